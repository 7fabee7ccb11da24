#pragma once

/**
 * Core value types shared by every module: enterprise state, actions,
 * agent specs, joint actions, and the tunable coordination knobs.
 * Everything is an immutable value; operations return new values.
 */

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "camco/errors.hpp"

namespace camco {

enum class ScenarioId { S1, S2, S3, Synthetic };

inline std::string to_string(ScenarioId id) {
    switch (id) {
        case ScenarioId::S1: return "s1";
        case ScenarioId::S2: return "s2";
        case ScenarioId::S3: return "s3";
        case ScenarioId::Synthetic: return "synthetic";
    }
    return "synthetic";
}

inline ScenarioId scenario_from_string(std::string_view s) {
    if (s == "s1") return ScenarioId::S1;
    if (s == "s2") return ScenarioId::S2;
    if (s == "s3") return ScenarioId::S3;
    if (s == "synthetic") return ScenarioId::Synthetic;
    throw UnknownScenario(std::string(s));
}

/// Shortest round-trip decimal form; deterministic across platforms.
inline std::string canonical_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Attribute values: numeric, flag, or categorical.

using AttrValue = std::variant<double, bool, std::string>;

inline std::optional<double> attr_number(const AttrValue& v) {
    if (const double* d = std::get_if<double>(&v)) return *d;
    return std::nullopt;
}
inline std::optional<bool> attr_flag(const AttrValue& v) {
    if (const bool* b = std::get_if<bool>(&v)) return *b;
    return std::nullopt;
}
inline std::optional<std::string> attr_text(const AttrValue& v) {
    if (const std::string* s = std::get_if<std::string>(&v)) return *s;
    return std::nullopt;
}

inline std::string attr_key(const AttrValue& v) {
    if (const double* d = std::get_if<double>(&v)) return "d:" + canonical_double(*d);
    if (const bool* b = std::get_if<bool>(&v)) return *b ? "b:1" : "b:0";
    return "s:" + std::get<std::string>(v);
}

// ---------------------------------------------------------------------------
// Enterprise state: one observed situation the roster must act in.

struct EnterpriseState {
    ScenarioId scenario_id = ScenarioId::Synthetic;
    std::map<std::string, AttrValue> variables; // ordered map: canonical iteration
    int step_index = 0;
    std::uint64_t rng_seed = 0;

    bool has(const std::string& name) const { return variables.count(name) != 0; }
    std::optional<AttrValue> var(const std::string& name) const {
        auto it = variables.find(name);
        if (it == variables.end()) return std::nullopt;
        return it->second;
    }
    std::optional<double> number(const std::string& name) const {
        auto it = variables.find(name);
        if (it == variables.end()) return std::nullopt;
        return attr_number(it->second);
    }
    std::optional<std::string> text(const std::string& name) const {
        auto it = variables.find(name);
        if (it == variables.end()) return std::nullopt;
        return attr_text(it->second);
    }
    bool flag(const std::string& name) const {
        auto it = variables.find(name);
        if (it == variables.end()) return false;
        auto b = attr_flag(it->second);
        return b.value_or(false);
    }
};

// ---------------------------------------------------------------------------
// Actions. Discrete: label + typed attributes. Continuous: finite vector.

enum class ActionKind { Discrete, Continuous };

struct ActionValue {
    ActionKind kind = ActionKind::Discrete;
    std::string label;                       // discrete only
    std::map<std::string, AttrValue> attrs;  // discrete only
    std::vector<double> vec;                 // continuous only

    static ActionValue discrete(std::string lbl, std::map<std::string, AttrValue> a = {}) {
        ActionValue v;
        v.kind = ActionKind::Discrete;
        v.label = std::move(lbl);
        v.attrs = std::move(a);
        return v;
    }
    static ActionValue continuous(std::vector<double> x) {
        ActionValue v;
        v.kind = ActionKind::Continuous;
        v.vec = std::move(x);
        return v;
    }

    std::optional<AttrValue> attr(const std::string& name) const {
        auto it = attrs.find(name);
        if (it == attrs.end()) return std::nullopt;
        return it->second;
    }

    bool finite() const {
        for (double x : vec)
            if (!std::isfinite(x)) return false;
        return true;
    }

    /// Total-order key: used for deterministic tie-breaking everywhere.
    std::string canonical_key() const {
        if (kind == ActionKind::Discrete) {
            std::string k = "D|" + label;
            for (const auto& [name, val] : attrs) k += "|" + name + "=" + attr_key(val);
            return k;
        }
        std::string k = "C|";
        for (std::size_t i = 0; i < vec.size(); ++i) {
            if (i) k += ",";
            k += canonical_double(vec[i]);
        }
        return k;
    }

    friend bool operator==(const ActionValue& a, const ActionValue& b) {
        if (a.kind != b.kind) return false;
        if (a.kind == ActionKind::Discrete) return a.label == b.label && a.attrs == b.attrs;
        return a.vec == b.vec;
    }
    friend bool operator!=(const ActionValue& a, const ActionValue& b) { return !(a == b); }
};

struct BoxBounds {
    std::vector<double> lo;
    std::vector<double> hi;

    std::size_t dim() const { return lo.size(); }
    void validate() const {
        if (lo.size() != hi.size())
            throw DimensionMismatch("box lo/hi arity " + std::to_string(lo.size()) + " vs " +
                                    std::to_string(hi.size()));
        for (std::size_t i = 0; i < lo.size(); ++i) {
            if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || lo[i] > hi[i])
                throw ConfigInvalid("box bounds at coordinate " + std::to_string(i));
        }
    }
    bool contains(const std::vector<double>& x, double tol = 0.0) const {
        if (x.size() != lo.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
        return true;
    }
};

struct ActionSpace {
    ActionKind kind = ActionKind::Discrete;
    std::vector<ActionValue> actions; // discrete: the finite menu, declared order
    BoxBounds box;                    // continuous: coordinate bounds

    std::size_t size() const {
        return kind == ActionKind::Discrete ? actions.size() : 0;
    }
    bool contains(const ActionValue& a) const {
        if (a.kind != kind) return false;
        if (kind == ActionKind::Discrete)
            return std::find(actions.begin(), actions.end(), a) != actions.end();
        return a.vec.size() == box.dim() && box.contains(a.vec);
    }
};

// ---------------------------------------------------------------------------
// Agents and joint actions.

struct AgentSpec {
    std::string agent_id;
    ActionSpace action_space;
    std::string utility_fn;   // registry name, resolved at evaluation time
    ActionValue safe_default; // must be in action_space and carry zero risk
};

struct JointAction {
    // Roster order is preserved; agent ids are unique.
    std::vector<std::pair<std::string, ActionValue>> entries;

    const ActionValue* find(std::string_view agent_id) const {
        for (const auto& [id, a] : entries)
            if (id == agent_id) return &a;
        return nullptr;
    }
    std::size_t size() const { return entries.size(); }

    std::string canonical_key() const {
        std::string k;
        for (const auto& [id, a] : entries) k += id + "=" + a.canonical_key() + ";";
        return k;
    }

    friend bool operator==(const JointAction& a, const JointAction& b) {
        return a.entries == b.entries;
    }
};

/// Non-owning view used by predicate evaluation; may be partial (a slice
/// containing a single agent) or a full joint assignment.
class JointView {
public:
    JointView() = default;
    explicit JointView(const JointAction& joint) {
        for (const auto& [id, a] : joint.entries) items_.emplace_back(id, &a);
    }
    JointView(std::string_view agent_id, const ActionValue& action) {
        items_.emplace_back(agent_id, &action);
    }

    const ActionValue* find(std::string_view agent_id) const {
        for (const auto& [id, a] : items_)
            if (id == agent_id) return a;
        return nullptr;
    }
    bool covers(std::string_view agent_id) const { return find(agent_id) != nullptr; }

private:
    std::vector<std::pair<std::string_view, const ActionValue*>> items_;
};

// ---------------------------------------------------------------------------
// Coordination knobs.

enum class DualUpdateRule { Alg1Ratio, HingeAscent, DiminishingHinge };

inline std::string to_string(DualUpdateRule r) {
    switch (r) {
        case DualUpdateRule::Alg1Ratio: return "ratio";
        case DualUpdateRule::HingeAscent: return "hinge";
        case DualUpdateRule::DiminishingHinge: return "diminishing";
    }
    return "ratio";
}

inline DualUpdateRule dual_rule_from_string(std::string_view s) {
    if (s == "ratio") return DualUpdateRule::Alg1Ratio;
    if (s == "hinge") return DualUpdateRule::HingeAscent;
    if (s == "diminishing") return DualUpdateRule::DiminishingHinge;
    throw ConfigInvalid("dual update rule '" + std::string(s) + "'");
}

struct CoordinationConfig {
    double tau = 1.0;       // joint risk budget, > 0
    double lambda0 = 0.0;   // initial multiplier, >= 0
    double delta = 0.25;    // base increment for the ratio rule, > 0
    int k_max = 10;         // negotiation round cap, >= 1
    DualUpdateRule dual_update_rule = DualUpdateRule::Alg1Ratio;
    double eta0 = 1.0;      // diminishing-rule base step, > 0
    double alpha = 0.5;     // hinge-rule step, > 0

    void validate() const {
        if (!(tau > 0) || !std::isfinite(tau)) throw ConfigInvalid("tau must be > 0");
        if (!(lambda0 >= 0) || !std::isfinite(lambda0)) throw ConfigInvalid("lambda0 must be >= 0");
        if (!(delta > 0) || !std::isfinite(delta)) throw ConfigInvalid("delta must be > 0");
        if (k_max < 1) throw ConfigInvalid("k_max must be >= 1");
        if (!(eta0 > 0) || !std::isfinite(eta0)) throw ConfigInvalid("eta0 must be > 0");
        if (!(alpha > 0) || !std::isfinite(alpha)) throw ConfigInvalid("alpha must be > 0");
    }
};

// ---------------------------------------------------------------------------
// Named-function registry. Utilities and risk indicators are referenced by
// name from serialized specs and resolved here at evaluation time.

using UtilityFn = std::function<double(const EnterpriseState&, const ActionValue&)>;
using IndicatorFn = std::function<double(const EnterpriseState&, const ActionValue&)>;

class FunctionRegistry {
public:
    void add_utility(std::string name, UtilityFn fn) { utilities_[std::move(name)] = std::move(fn); }
    void add_indicator(std::string name, IndicatorFn fn) { indicators_[std::move(name)] = std::move(fn); }

    const UtilityFn& utility(const std::string& name) const {
        auto it = utilities_.find(name);
        if (it == utilities_.end()) throw ConfigInvalid("utility fn '" + name + "' not registered");
        return it->second;
    }
    const IndicatorFn& indicator(const std::string& name) const {
        auto it = indicators_.find(name);
        if (it == indicators_.end()) throw MissingIndicator("indicator fn '" + name + "' not registered");
        return it->second;
    }
    bool has_utility(const std::string& name) const { return utilities_.count(name) != 0; }
    bool has_indicator(const std::string& name) const { return indicators_.count(name) != 0; }

    /// attr:<name> reads a numeric action attribute (absent -> 0);
    /// zero is the constant 0. Both usable as utility or indicator.
    static void add_builtins(FunctionRegistry& reg) {
        auto make_attr_reader = [](std::string attr) {
            return [attr](const EnterpriseState&, const ActionValue& a) -> double {
                auto v = a.attr(attr);
                if (!v) return 0.0;
                return attr_number(*v).value_or(0.0);
            };
        };
        for (const char* name : {"u", "r", "cost", "gain"}) {
            reg.add_utility(std::string("attr:") + name, make_attr_reader(name));
            reg.add_indicator(std::string("attr:") + name, make_attr_reader(name));
        }
        reg.add_utility("zero", [](const EnterpriseState&, const ActionValue&) { return 0.0; });
        reg.add_indicator("zero", [](const EnterpriseState&, const ActionValue&) { return 0.0; });
    }

private:
    std::map<std::string, UtilityFn> utilities_;
    std::map<std::string, IndicatorFn> indicators_;
};

inline double agent_utility(const FunctionRegistry& reg, const AgentSpec& agent,
                            const EnterpriseState& state, const ActionValue& action) {
    return reg.utility(agent.utility_fn)(state, action);
}

// ---------------------------------------------------------------------------
// Joint-space enumeration (discrete rosters only). Declared order per agent,
// last agent varies fastest; deterministic and repeatable.

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

inline std::size_t joint_space_size(const std::vector<AgentSpec>& agents) {
    std::size_t total = 1;
    for (const auto& ag : agents) {
        if (ag.action_space.kind != ActionKind::Discrete)
            throw ConfigInvalid("agent '" + ag.agent_id + "' has a continuous space; joint enumeration needs discrete rosters");
        std::size_t n = ag.action_space.actions.size();
        if (n == 0) throw ConfigInvalid("agent '" + ag.agent_id + "' has an empty action space");
        if (total > kDefaultEnumerationCap * 64 / n) // avoid overflow before the cap check
            return kDefaultEnumerationCap * 64;
        total *= n;
    }
    return total;
}

class JointSpaceEnumerator {
public:
    JointSpaceEnumerator(const std::vector<AgentSpec>& agents,
                         std::size_t cap = kDefaultEnumerationCap)
        : agents_(&agents) {
        std::size_t total = joint_space_size(agents);
        if (total > cap)
            throw OracleCapExceeded(std::to_string(total) + " joint actions > cap " + std::to_string(cap));
        idx_.assign(agents.size(), 0);
    }

    std::optional<JointAction> next() {
        if (done_) return std::nullopt;
        JointAction j;
        j.entries.reserve(agents_->size());
        for (std::size_t i = 0; i < agents_->size(); ++i)
            j.entries.emplace_back((*agents_)[i].agent_id,
                                   (*agents_)[i].action_space.actions[idx_[i]]);
        // odometer increment, last position fastest
        std::size_t i = agents_->size();
        while (i > 0) {
            --i;
            if (++idx_[i] < (*agents_)[i].action_space.actions.size()) break;
            idx_[i] = 0;
            if (i == 0) done_ = true;
        }
        if (agents_->empty()) done_ = true;
        return j;
    }

private:
    const std::vector<AgentSpec>* agents_;
    std::vector<std::size_t> idx_;
    bool done_ = false;
};

inline std::vector<JointAction> enumerate_joint_actions(const std::vector<AgentSpec>& agents,
                                                        std::size_t cap = kDefaultEnumerationCap) {
    JointSpaceEnumerator e(agents, cap);
    std::vector<JointAction> out;
    while (auto j = e.next()) out.push_back(std::move(*j));
    return out;
}

} // namespace camco
