#pragma once

/**
 * JSON forms for every persisted type. One format everywhere; documents
 * carry a "schema" tag checked on load. Round-trips are exact: numbers
 * serialize in shortest round-trip form and no field is optional unless
 * stated.
 */

#include <string>
#include <vector>

#include "json.hpp"

#include "camco/policy.hpp"
#include "camco/risk.hpp"

namespace camco {

using json = nlohmann::json;

inline constexpr const char* kScenarioSchema = "camco/scenario/v1";
inline constexpr const char* kBundleSchema = "camco/bundle/v1";
inline constexpr const char* kManifestSchema = "camco/manifest/v1";
inline constexpr const char* kAuditSchema = "camco/audit/v1";
inline constexpr const char* kResultsSchema = "camco/results/v1";

// --- AttrValue --------------------------------------------------------------

inline json attr_to_json(const AttrValue& v) {
    if (const double* d = std::get_if<double>(&v)) return *d;
    if (const bool* b = std::get_if<bool>(&v)) return *b;
    return std::get<std::string>(v);
}

inline AttrValue attr_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_string()) return j.get<std::string>();
    throw SchemaMismatch("attribute value must be number, bool, or string");
}

inline json attr_map_to_json(const std::map<std::string, AttrValue>& m) {
    json out = json::object();
    for (const auto& [k, v] : m) out[k] = attr_to_json(v);
    return out;
}

inline std::map<std::string, AttrValue> attr_map_from_json(const json& j) {
    std::map<std::string, AttrValue> out;
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = attr_from_json(it.value());
    return out;
}

// --- EnterpriseState ---------------------------------------------------------

inline json to_json(const EnterpriseState& s) {
    return json{{"scenario", to_string(s.scenario_id)},
                {"variables", attr_map_to_json(s.variables)},
                {"step_index", s.step_index},
                {"rng_seed", s.rng_seed}};
}

inline EnterpriseState state_from_json(const json& j) {
    EnterpriseState s;
    s.scenario_id = scenario_from_string(j.at("scenario").get<std::string>());
    s.variables = attr_map_from_json(j.at("variables"));
    s.step_index = j.at("step_index").get<int>();
    s.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    return s;
}

// --- ActionValue -------------------------------------------------------------

inline json to_json(const ActionValue& a) {
    if (a.kind == ActionKind::Discrete)
        return json{{"kind", "discrete"}, {"label", a.label}, {"attrs", attr_map_to_json(a.attrs)}};
    return json{{"kind", "continuous"}, {"vec", a.vec}};
}

inline ActionValue action_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "discrete")
        return ActionValue::discrete(j.at("label").get<std::string>(),
                                     attr_map_from_json(j.at("attrs")));
    if (kind == "continuous")
        return ActionValue::continuous(j.at("vec").get<std::vector<double>>());
    throw SchemaMismatch("action kind '" + kind + "'");
}

// --- BoxBounds / ActionSpace / AgentSpec --------------------------------------

inline json to_json(const BoxBounds& b) { return json{{"lo", b.lo}, {"hi", b.hi}}; }

inline BoxBounds box_from_json(const json& j) {
    BoxBounds b;
    b.lo = j.at("lo").get<std::vector<double>>();
    b.hi = j.at("hi").get<std::vector<double>>();
    b.validate();
    return b;
}

inline json to_json(const ActionSpace& s) {
    if (s.kind == ActionKind::Discrete) {
        json arr = json::array();
        for (const auto& a : s.actions) arr.push_back(to_json(a));
        return json{{"kind", "discrete"}, {"actions", arr}};
    }
    return json{{"kind", "continuous"}, {"box", to_json(s.box)}};
}

inline ActionSpace space_from_json(const json& j) {
    ActionSpace s;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "discrete") {
        s.kind = ActionKind::Discrete;
        for (const auto& a : j.at("actions")) s.actions.push_back(action_from_json(a));
    } else if (kind == "continuous") {
        s.kind = ActionKind::Continuous;
        s.box = box_from_json(j.at("box"));
    } else {
        throw SchemaMismatch("action space kind '" + kind + "'");
    }
    return s;
}

inline json to_json(const AgentSpec& a) {
    return json{{"agent_id", a.agent_id},
                {"action_space", to_json(a.action_space)},
                {"utility_fn", a.utility_fn},
                {"safe_default", to_json(a.safe_default)}};
}

inline AgentSpec agent_from_json(const json& j) {
    AgentSpec a;
    a.agent_id = j.at("agent_id").get<std::string>();
    a.action_space = space_from_json(j.at("action_space"));
    a.utility_fn = j.at("utility_fn").get<std::string>();
    a.safe_default = action_from_json(j.at("safe_default"));
    return a;
}

// --- JointAction ---------------------------------------------------------------

inline json to_json(const JointAction& joint) {
    json arr = json::array();
    for (const auto& [id, a] : joint.entries)
        arr.push_back(json{{"agent", id}, {"action", to_json(a)}});
    return arr;
}

inline JointAction joint_from_json(const json& j) {
    JointAction out;
    for (const auto& e : j)
        out.entries.emplace_back(e.at("agent").get<std::string>(),
                                 action_from_json(e.at("action")));
    return out;
}

// --- CoordinationConfig ----------------------------------------------------------

inline json to_json(const CoordinationConfig& c) {
    return json{{"tau", c.tau},
                {"lambda0", c.lambda0},
                {"delta", c.delta},
                {"k_max", c.k_max},
                {"dual_update_rule", to_string(c.dual_update_rule)},
                {"eta0", c.eta0},
                {"alpha", c.alpha}};
}

inline CoordinationConfig config_from_json(const json& j) {
    CoordinationConfig c;
    c.tau = j.at("tau").get<double>();
    c.lambda0 = j.at("lambda0").get<double>();
    c.delta = j.at("delta").get<double>();
    c.k_max = j.at("k_max").get<int>();
    c.dual_update_rule = dual_rule_from_string(j.at("dual_update_rule").get<std::string>());
    c.eta0 = j.at("eta0").get<double>();
    c.alpha = j.at("alpha").get<double>();
    c.validate();
    return c;
}

// --- Expr ------------------------------------------------------------------------

inline json to_json(const ExprPtr& e);

inline json expr_node_to_json(const Expr& e) {
    switch (e.node) {
        case Expr::Node::Const:
            return json{{"op", "const"}, {"value", attr_to_json(e.literal)}};
        case Expr::Node::StateVar:
            return json{{"op", "state"}, {"var", e.name}};
        case Expr::Node::AttrRef:
            return json{{"op", "attr"}, {"agent", e.name}, {"name", e.attr}};
        case Expr::Node::LabelRef:
            return json{{"op", "label"}, {"agent", e.name}};
        case Expr::Node::Cmp:
            return json{{"op", to_string(e.op)},
                        {"lhs", to_json(e.kids[0])},
                        {"rhs", to_json(e.kids[1])}};
        case Expr::Node::In: {
            json members = json::array();
            for (const auto& m : e.members) members.push_back(attr_to_json(m));
            return json{{"op", "in"}, {"value", to_json(e.kids[0])}, {"members", members}};
        }
        case Expr::Node::And:
        case Expr::Node::Or: {
            json args = json::array();
            for (const auto& k : e.kids) args.push_back(to_json(k));
            return json{{"op", e.node == Expr::Node::And ? "and" : "or"}, {"args", args}};
        }
        case Expr::Node::Not:
            return json{{"op", "not"}, {"arg", to_json(e.kids[0])}};
    }
    throw SchemaMismatch("unknown expression node");
}

inline json to_json(const ExprPtr& e) {
    if (!e) return nullptr;
    return expr_node_to_json(*e);
}

inline ExprPtr expr_from_json(const json& j) {
    if (j.is_null()) return nullptr;
    const std::string op = j.at("op").get<std::string>();
    if (op == "const") return expr::lit(attr_from_json(j.at("value")));
    if (op == "state") return expr::state(j.at("var").get<std::string>());
    if (op == "attr")
        return expr::attr(j.at("agent").get<std::string>(), j.at("name").get<std::string>());
    if (op == "label") return expr::label(j.at("agent").get<std::string>());
    if (op == "in") {
        std::vector<AttrValue> members;
        for (const auto& m : j.at("members")) members.push_back(attr_from_json(m));
        return expr::in(expr_from_json(j.at("value")), std::move(members));
    }
    if (op == "and" || op == "or") {
        std::vector<ExprPtr> kids;
        for (const auto& a : j.at("args")) kids.push_back(expr_from_json(a));
        return op == "and" ? expr::all(std::move(kids)) : expr::any(std::move(kids));
    }
    if (op == "not") return expr::neg(expr_from_json(j.at("arg")));
    CmpOp cmp = cmp_from_string(op); // rejects unknown ops before key lookups
    return expr::cmp(cmp, expr_from_json(j.at("lhs")), expr_from_json(j.at("rhs")));
}

// --- PolicyPredicate -----------------------------------------------------------

inline json to_json(const PolicyPredicate& p) {
    json out{{"predicate_id", p.predicate_id}, {"kind", to_string(p.kind())}};
    if (const auto* q = std::get_if<ApprovalChainParams>(&p.params)) {
        json chain = json::array();
        for (const auto& link : q->chain)
            chain.push_back(json{{"agent", link.agent}, {"approve_labels", link.approve_labels}});
        out["chain"] = chain;
    } else if (const auto* q = std::get_if<SegregationParams>(&p.params)) {
        out["first_agent"] = q->first_agent;
        out["first_labels"] = q->first_labels;
        out["attribute"] = q->attribute;
        if (q->pair_form()) {
            out["second_agent"] = q->second_agent;
            out["second_labels"] = q->second_labels;
        } else {
            out["state_var"] = q->state_var;
        }
    } else if (const auto* q = std::get_if<TemporalOrderParams>(&p.params)) {
        out["prerequisite_agent"] = q->prerequisite_agent;
        out["prerequisite_labels"] = q->prerequisite_labels;
        out["dependent_agent"] = q->dependent_agent;
        out["dependent_labels"] = q->dependent_labels;
    } else if (const auto* q = std::get_if<ThresholdGateParams>(&p.params)) {
        out["amount_var"] = q->amount_var;
        out["threshold"] = q->threshold;
        out["subject_agent"] = q->subject_agent;
        out["subject_labels"] = q->subject_labels;
        out["escalation_agent"] = q->escalation_agent;
        out["escalation_labels"] = q->escalation_labels;
    } else if (const auto* q = std::get_if<CustomParams>(&p.params)) {
        out["expression"] = to_json(q->expression);
    }
    return out;
}

inline PolicyPredicate predicate_from_json(const json& j) {
    PolicyPredicate p;
    p.predicate_id = j.at("predicate_id").get<std::string>();
    switch (predicate_kind_from_string(j.at("kind").get<std::string>())) {
        case PredicateKind::ApprovalChain: {
            ApprovalChainParams q;
            for (const auto& link : j.at("chain"))
                q.chain.push_back({link.at("agent").get<std::string>(),
                                   link.at("approve_labels").get<std::vector<std::string>>()});
            p.params = std::move(q);
            break;
        }
        case PredicateKind::SegregationOfDuties: {
            SegregationParams q;
            q.first_agent = j.at("first_agent").get<std::string>();
            q.first_labels = j.at("first_labels").get<std::vector<std::string>>();
            q.attribute = j.at("attribute").get<std::string>();
            if (j.contains("second_agent")) {
                q.second_agent = j.at("second_agent").get<std::string>();
                q.second_labels = j.at("second_labels").get<std::vector<std::string>>();
            } else {
                q.state_var = j.at("state_var").get<std::string>();
            }
            p.params = std::move(q);
            break;
        }
        case PredicateKind::TemporalOrder: {
            TemporalOrderParams q;
            q.prerequisite_agent = j.at("prerequisite_agent").get<std::string>();
            q.prerequisite_labels = j.at("prerequisite_labels").get<std::vector<std::string>>();
            q.dependent_agent = j.at("dependent_agent").get<std::string>();
            q.dependent_labels = j.at("dependent_labels").get<std::vector<std::string>>();
            p.params = std::move(q);
            break;
        }
        case PredicateKind::ThresholdGate: {
            ThresholdGateParams q;
            q.amount_var = j.at("amount_var").get<std::string>();
            q.threshold = j.at("threshold").get<double>();
            q.subject_agent = j.at("subject_agent").get<std::string>();
            q.subject_labels = j.at("subject_labels").get<std::vector<std::string>>();
            q.escalation_agent = j.at("escalation_agent").get<std::string>();
            q.escalation_labels = j.at("escalation_labels").get<std::vector<std::string>>();
            p.params = std::move(q);
            break;
        }
        case PredicateKind::Custom: {
            CustomParams q;
            q.expression = expr_from_json(j.at("expression"));
            p.params = std::move(q);
            break;
        }
    }
    return p;
}

// --- FeasibilityRule / PolicyBundle ----------------------------------------------

inline json to_json(const WindowSpec& w) {
    if (const auto* sw = std::get_if<StepWindow>(&w))
        return json{{"open_step", sw->open_step}, {"close_step", sw->close_step}};
    if (const auto* fw = std::get_if<FlagWindow>(&w)) return json{{"state_flag", fw->state_flag}};
    return nullptr;
}

inline WindowSpec window_from_json(const json& j) {
    if (j.is_null()) return std::monostate{};
    if (j.contains("state_flag")) return FlagWindow{j.at("state_flag").get<std::string>()};
    return StepWindow{j.at("open_step").get<int>(), j.at("close_step").get<int>()};
}

inline json to_json(const Halfspace& h) { return json{{"normal", h.normal}, {"offset", h.offset}}; }

inline Halfspace halfspace_from_json(const json& j) {
    return Halfspace{j.at("normal").get<std::vector<double>>(), j.at("offset").get<double>()};
}

inline json to_json(const FeasibilityRule& r) {
    json hs = json::array();
    for (const auto& h : r.halfspaces) hs.push_back(to_json(h));
    return json{{"rule_id", r.rule_id},     {"agent_id", r.agent_id}, {"perm", r.perm},
                {"avail", to_json(r.avail)}, {"window", to_json(r.window)}, {"halfspaces", hs}};
}

inline FeasibilityRule rule_from_json(const json& j) {
    FeasibilityRule r;
    r.rule_id = j.at("rule_id").get<std::string>();
    r.agent_id = j.at("agent_id").get<std::string>();
    r.perm = j.at("perm").get<std::vector<std::string>>();
    r.avail = expr_from_json(j.at("avail"));
    r.window = window_from_json(j.at("window"));
    for (const auto& h : j.at("halfspaces")) r.halfspaces.push_back(halfspace_from_json(h));
    return r;
}

inline json to_json(const PolicyBundle& b) {
    json preds = json::array();
    for (const auto& p : b.predicates) preds.push_back(to_json(p));
    json rules = json::array();
    for (const auto& r : b.feasibility) rules.push_back(to_json(r));
    return json{{"schema", kBundleSchema},
                {"bundle_version", b.bundle_version},
                {"predicates", preds},
                {"feasibility", rules}};
}

inline PolicyBundle bundle_from_json(const json& j) {
    if (j.contains("schema") && j.at("schema").get<std::string>() != kBundleSchema)
        throw SchemaMismatch("expected " + std::string(kBundleSchema));
    PolicyBundle b;
    b.bundle_version = j.at("bundle_version").get<std::string>();
    for (const auto& p : j.at("predicates")) b.predicates.push_back(predicate_from_json(p));
    for (const auto& r : j.at("feasibility")) b.feasibility.push_back(rule_from_json(r));
    return b;
}

// --- RiskProfile ---------------------------------------------------------------

inline json to_json(const RiskProfile& p) {
    json weights = json::object();
    for (const auto& [k, v] : p.weights) weights[k] = v;
    json inds = json::object();
    for (const auto& [agent, per_dim] : p.indicators) {
        json row = json::object();
        for (const auto& [dim, ref] : per_dim)
            row[dim] = json{{"fn", ref.fn}, {"r_max", ref.r_max}};
        inds[agent] = row;
    }
    return json{{"dimensions", p.dimensions}, {"weights", weights}, {"indicators", inds}};
}

inline RiskProfile risk_profile_from_json(const json& j) {
    RiskProfile p;
    p.dimensions = j.at("dimensions").get<std::vector<std::string>>();
    for (auto it = j.at("weights").begin(); it != j.at("weights").end(); ++it)
        p.weights[it.key()] = it.value().get<double>();
    for (auto it = j.at("indicators").begin(); it != j.at("indicators").end(); ++it) {
        for (auto jt = it.value().begin(); jt != it.value().end(); ++jt)
            p.indicators[it.key()][jt.key()] =
                IndicatorRef{jt.value().at("fn").get<std::string>(),
                             jt.value().at("r_max").get<double>()};
    }
    p.validate();
    return p;
}

} // namespace camco
