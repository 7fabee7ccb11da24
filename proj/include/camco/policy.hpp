#pragma once

/**
 * Policy layer: joint-action predicates (the conjunctive compliance gate),
 * per-agent feasibility rules, and the derived per-agent constraint sets
 * the projection step works against.
 */

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "camco/expr.hpp"

namespace camco {

enum class PredicateKind { ApprovalChain, SegregationOfDuties, TemporalOrder, ThresholdGate, Custom };

inline std::string to_string(PredicateKind k) {
    switch (k) {
        case PredicateKind::ApprovalChain: return "approval_chain";
        case PredicateKind::SegregationOfDuties: return "segregation_of_duties";
        case PredicateKind::TemporalOrder: return "temporal_order";
        case PredicateKind::ThresholdGate: return "threshold_gate";
        case PredicateKind::Custom: return "custom";
    }
    return "custom";
}

inline PredicateKind predicate_kind_from_string(std::string_view s) {
    if (s == "approval_chain") return PredicateKind::ApprovalChain;
    if (s == "segregation_of_duties") return PredicateKind::SegregationOfDuties;
    if (s == "temporal_order") return PredicateKind::TemporalOrder;
    if (s == "threshold_gate") return PredicateKind::ThresholdGate;
    if (s == "custom") return PredicateKind::Custom;
    throw ConfigInvalid("predicate kind '" + std::string(s) + "'");
}

// Per-kind parameter blocks ------------------------------------------------

struct ChainLink {
    std::string agent;
    std::vector<std::string> approve_labels;

    bool approves(const JointView& view) const {
        const ActionValue* a = view.find(agent);
        if (!a || a->kind != ActionKind::Discrete) return false;
        for (const auto& l : approve_labels)
            if (a->label == l) return true;
        return false;
    }
};

/// Prefix closure: link k may approve only if every earlier link approves.
struct ApprovalChainParams {
    std::vector<ChainLink> chain;
};

/// Forbids an agent acting in a matching role on its own subject: the
/// agent's identity attribute must not equal the state variable (state
/// form) or the partner agent's attribute (pair form). Exactly one of
/// state_var / second_agent is set.
struct SegregationParams {
    std::string first_agent;
    std::vector<std::string> first_labels; // labels on which the rule bites
    std::string attribute;                 // identity attribute compared
    std::string state_var;                 // state form
    std::string second_agent;              // pair form
    std::vector<std::string> second_labels;

    bool pair_form() const { return !second_agent.empty(); }
};

/// dependent acting requires prerequisite acting.
struct TemporalOrderParams {
    std::string prerequisite_agent;
    std::vector<std::string> prerequisite_labels;
    std::string dependent_agent;
    std::vector<std::string> dependent_labels;
};

/// state[amount_var] > threshold and subject acts  =>  escalation agent
/// must take one of the escalation labels.
struct ThresholdGateParams {
    std::string amount_var;
    double threshold = 0.0;
    std::string subject_agent;
    std::vector<std::string> subject_labels;
    std::string escalation_agent;
    std::vector<std::string> escalation_labels;
};

struct CustomParams {
    ExprPtr expression;
};

struct PolicyPredicate {
    std::string predicate_id;
    std::variant<ApprovalChainParams, SegregationParams, TemporalOrderParams,
                 ThresholdGateParams, CustomParams>
        params;

    PredicateKind kind() const {
        switch (params.index()) {
            case 0: return PredicateKind::ApprovalChain;
            case 1: return PredicateKind::SegregationOfDuties;
            case 2: return PredicateKind::TemporalOrder;
            case 3: return PredicateKind::ThresholdGate;
            default: return PredicateKind::Custom;
        }
    }

    std::set<std::string> referenced_agents() const {
        std::set<std::string> out;
        if (const auto* p = std::get_if<ApprovalChainParams>(&params)) {
            for (const auto& link : p->chain) out.insert(link.agent);
        } else if (const auto* p = std::get_if<SegregationParams>(&params)) {
            out.insert(p->first_agent);
            if (p->pair_form()) out.insert(p->second_agent);
        } else if (const auto* p = std::get_if<TemporalOrderParams>(&params)) {
            out.insert(p->prerequisite_agent);
            out.insert(p->dependent_agent);
        } else if (const auto* p = std::get_if<ThresholdGateParams>(&params)) {
            out.insert(p->subject_agent);
            out.insert(p->escalation_agent);
        } else if (const auto* p = std::get_if<CustomParams>(&params)) {
            return camco::referenced_agents(p->expression);
        }
        return out;
    }

    /// Total evaluation over a (possibly partial) view. Missing agents or
    /// attributes never throw; see each block for the absent-value rule.
    bool eval(const EnterpriseState& state, const JointView& view) const;
};

namespace detail {

inline bool label_in(const ActionValue* a, const std::vector<std::string>& labels) {
    if (!a || a->kind != ActionKind::Discrete) return false;
    for (const auto& l : labels)
        if (a->label == l) return true;
    return false;
}

inline bool eval_predicate(const ApprovalChainParams& p, const EnterpriseState&,
                           const JointView& view) {
    for (std::size_t k = 1; k < p.chain.size(); ++k) {
        if (p.chain[k].approves(view) && !p.chain[k - 1].approves(view)) return false;
    }
    return true;
}

inline bool eval_predicate(const SegregationParams& p, const EnterpriseState& state,
                           const JointView& view) {
    const ActionValue* first = view.find(p.first_agent);
    if (!label_in(first, p.first_labels)) return true;
    auto ident = first->attr(p.attribute);
    if (!ident) return true; // no identity attached: rule cannot bite
    if (p.pair_form()) {
        const ActionValue* second = view.find(p.second_agent);
        if (!label_in(second, p.second_labels)) return true;
        auto other = second->attr(p.attribute);
        return !(other && values_equal(*ident, *other));
    }
    auto var = state.var(p.state_var);
    return !(var && values_equal(*ident, *var));
}

inline bool eval_predicate(const TemporalOrderParams& p, const EnterpriseState&,
                           const JointView& view) {
    if (!label_in(view.find(p.dependent_agent), p.dependent_labels)) return true;
    return label_in(view.find(p.prerequisite_agent), p.prerequisite_labels);
}

inline bool eval_predicate(const ThresholdGateParams& p, const EnterpriseState& state,
                           const JointView& view) {
    auto amount = state.number(p.amount_var);
    if (!amount || *amount <= p.threshold) return true;
    if (!label_in(view.find(p.subject_agent), p.subject_labels)) return true;
    return label_in(view.find(p.escalation_agent), p.escalation_labels);
}

inline bool eval_predicate(const CustomParams& p, const EnterpriseState& state,
                           const JointView& view) {
    return eval_bool(p.expression, state, view);
}

} // namespace detail

inline bool PolicyPredicate::eval(const EnterpriseState& state, const JointView& view) const {
    return std::visit([&](const auto& p) { return detail::eval_predicate(p, state, view); }, params);
}

// ---------------------------------------------------------------------------
// Feasibility rules: grants of permitted labels (discrete) or region
// constraints (continuous), each gated by availability and a time window.

struct StepWindow {
    int open_step = 0;
    int close_step = 0; // inclusive
};
struct FlagWindow {
    std::string state_flag;
};
using WindowSpec = std::variant<std::monostate, StepWindow, FlagWindow>;

inline bool window_open(const WindowSpec& w, const EnterpriseState& state) {
    if (const auto* sw = std::get_if<StepWindow>(&w))
        return state.step_index >= sw->open_step && state.step_index <= sw->close_step;
    if (const auto* fw = std::get_if<FlagWindow>(&w)) return state.flag(fw->state_flag);
    return true;
}

/// normal . x <= offset
struct Halfspace {
    std::vector<double> normal;
    double offset = 0.0;

    double violation(const std::vector<double>& x) const {
        double dot = 0;
        for (std::size_t i = 0; i < normal.size(); ++i) dot += normal[i] * x[i];
        return dot - offset;
    }
};

struct FeasibilityRule {
    std::string rule_id;
    std::string agent_id;
    std::vector<std::string> perm;     // labels granted (discrete spaces)
    ExprPtr avail;                     // null = always available
    WindowSpec window;                 // monostate = always open
    std::vector<Halfspace> halfspaces; // extra constraints (continuous spaces)

    bool active(const EnterpriseState& state) const {
        return eval_bool(avail, state, JointView{}) && window_open(window, state);
    }
};

struct PolicyBundle {
    std::string bundle_version = "v1";
    std::vector<PolicyPredicate> predicates;
    std::vector<FeasibilityRule> feasibility;

    std::vector<const FeasibilityRule*> rules_for(std::string_view agent_id) const {
        std::vector<const FeasibilityRule*> out;
        for (const auto& r : feasibility)
            if (r.agent_id == agent_id) out.push_back(&r);
        return out;
    }
};

// ---------------------------------------------------------------------------
// Phi: conjunction over all predicates, with per-predicate verdicts.

struct PredicateVerdict {
    std::string predicate_id;
    bool passed = true;
};

struct PhiVerdict {
    int value = 1; // 0 or 1
    std::vector<PredicateVerdict> verdicts;

    std::vector<std::string> failing() const {
        std::vector<std::string> out;
        for (const auto& v : verdicts)
            if (!v.passed) out.push_back(v.predicate_id);
        return out;
    }
};

inline PhiVerdict eval_phi(const PolicyBundle& bundle, const EnterpriseState& state,
                           const JointAction& joint) {
    for (const auto& [id, a] : joint.entries) {
        bool known = false;
        for (const auto& r : bundle.feasibility)
            if (r.agent_id == id) { known = true; break; }
        if (!known)
            throw SchemaMismatch("joint action references agent '" + id +
                                 "' with no feasibility rules in the bundle");
        (void)a;
    }
    PhiVerdict out;
    JointView view(joint);
    out.verdicts.reserve(bundle.predicates.size());
    for (const auto& p : bundle.predicates) {
        bool ok = p.eval(state, view);
        out.verdicts.push_back({p.predicate_id, ok});
        if (!ok) out.value = 0;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Per-agent feasible set F_i(s). The safe default is always a member, so
// the set is never empty.

struct FeasibleSet {
    ActionKind kind = ActionKind::Discrete;
    std::vector<ActionValue> actions;  // discrete: explicit members, declared order
    bool region_enabled = false;       // continuous: some rule active
    BoxBounds box;                     // continuous: active region bounds
    std::vector<Halfspace> halfspaces; // continuous: active region cuts
    ActionValue safe_default;

    bool contains(const ActionValue& a, double tol = 1e-9) const {
        if (a == safe_default) return true;
        if (a.kind != kind) return false;
        if (kind == ActionKind::Discrete) {
            for (const auto& m : actions)
                if (m == a) return true;
            return false;
        }
        if (!region_enabled) return false;
        if (a.vec.size() != box.dim()) return false;
        if (!box.contains(a.vec, tol)) return false;
        for (const auto& h : halfspaces)
            if (h.violation(a.vec) > tol) return false;
        return true;
    }
};

inline FeasibleSet feasible_set(const PolicyBundle& bundle, const EnterpriseState& state,
                                const AgentSpec& agent) {
    FeasibleSet out;
    out.kind = agent.action_space.kind;
    out.safe_default = agent.safe_default;
    if (agent.action_space.kind == ActionKind::Discrete) {
        std::set<std::string> granted;
        for (const auto* r : bundle.rules_for(agent.agent_id)) {
            if (!r->active(state)) continue;
            for (const auto& l : r->perm) granted.insert(l);
        }
        bool saw_default = false;
        for (const auto& a : agent.action_space.actions) {
            bool in = granted.count(a.label) != 0 || a == agent.safe_default;
            if (in) out.actions.push_back(a);
            if (a == agent.safe_default) saw_default = true;
        }
        if (!saw_default) out.actions.push_back(agent.safe_default);
        return out;
    }
    out.box = agent.action_space.box;
    for (const auto* r : bundle.rules_for(agent.agent_id)) {
        if (!r->active(state)) continue;
        out.region_enabled = true;
        for (const auto& h : r->halfspaces) out.halfspaces.push_back(h);
    }
    return out;
}

/// Full joint feasibility: every component in its agent's F_i(s) and the
/// compliance gate passes.
inline bool joint_feasible(const FunctionRegistry&, const PolicyBundle& bundle,
                           const EnterpriseState& state, const std::vector<AgentSpec>& agents,
                           const JointAction& joint) {
    for (const auto& ag : agents) {
        const ActionValue* a = joint.find(ag.agent_id);
        if (!a) return false;
        if (!feasible_set(bundle, state, ag).contains(*a)) return false;
    }
    return eval_phi(bundle, state, joint).value == 1;
}

// ---------------------------------------------------------------------------
// Per-agent constraint set C_i(s): the feasible set intersected with the
// slices of predicates decidable for agent i alone. Joint predicates stay
// with the negotiation loop's full gate.

struct AgentConstraintSet {
    FeasibleSet feasible;
    std::vector<const PolicyPredicate*> unary; // predicates referencing only this agent

    bool admits(const EnterpriseState& state, const std::string& agent_id,
                const ActionValue& a) const {
        if (!feasible.contains(a)) return false;
        JointView view(agent_id, a);
        for (const auto* p : unary)
            if (!p->eval(state, view)) return false;
        return true;
    }
};

inline AgentConstraintSet agent_constraints(const PolicyBundle& bundle,
                                            const EnterpriseState& state,
                                            const AgentSpec& agent) {
    AgentConstraintSet out;
    out.feasible = feasible_set(bundle, state, agent);
    for (const auto& p : bundle.predicates) {
        auto refs = p.referenced_agents();
        if (refs.size() == 1 && *refs.begin() == agent.agent_id) out.unary.push_back(&p);
    }
    return out;
}

} // namespace camco
