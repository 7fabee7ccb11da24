#pragma once

/**
 * Exact reference solver. Enumerates the product of the per-agent
 * feasible sets, keeps every tuple that clears the gate, and maximizes
 * total utility among those that also fit the risk budget. Exponential
 * in roster size, so it carries the same enumeration cap as the
 * joint-space walker; meant for cross-checking negotiated outcomes on
 * small rosters, not for production-sized ones.
 */

#include <limits>
#include <optional>
#include <vector>

#include "camco/policy.hpp"
#include "camco/risk.hpp"

namespace camco {

struct OracleReport {
    std::size_t points_scanned = 0;    // tuples enumerated: product of feasible menu sizes
    bool gate_feasible = false;        // some enumerated tuple passes every predicate
    bool feasible = false;             // ... and fits the risk budget
    double best_utility = 0.0;         // over admissible tuples; 0.0 when infeasible
    std::optional<JointAction> argmax; // admissible maximizer, lesser canonical key on ties
    double min_gate_risk = 0.0;        // smallest R_tot among gate-passing tuples
    double raw_optimum_utility = 0.0;  // sum of unconstrained per-agent maxima
};

/// Sum of per-agent raw argmax utilities over the full menus. The joint
/// objective is separable across agents, so this equals the joint optimum
/// with every constraint removed.
inline double raw_joint_optimum(const FunctionRegistry& reg, const std::vector<AgentSpec>& agents,
                                const EnterpriseState& state) {
    double total = 0.0;
    for (const auto& ag : agents) {
        if (ag.action_space.kind != ActionKind::Discrete)
            throw ConfigInvalid("agent '" + ag.agent_id +
                                "' has a continuous space; the reference solver needs discrete rosters");
        if (ag.action_space.actions.empty())
            throw ConfigInvalid("agent '" + ag.agent_id + "' has an empty action space");
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& a : ag.action_space.actions) {
            double u = agent_utility(reg, ag, state, a);
            if (u > best) best = u;
        }
        total += best;
    }
    return total;
}

inline double joint_utility(const FunctionRegistry& reg, const std::vector<AgentSpec>& agents,
                            const EnterpriseState& state, const JointAction& joint) {
    double total = 0.0;
    for (const auto& ag : agents) {
        const ActionValue* a = joint.find(ag.agent_id);
        if (!a) throw ConfigInvalid("joint action misses agent '" + ag.agent_id + "'");
        total += agent_utility(reg, ag, state, *a);
    }
    return total;
}

inline OracleReport oracle_solve(const FunctionRegistry& reg, const std::vector<AgentSpec>& agents,
                                 const EnterpriseState& state, const PolicyBundle& bundle,
                                 const RiskProfile& profile, double tau,
                                 std::size_t cap = kDefaultEnumerationCap) {
    OracleReport rep;
    rep.raw_optimum_utility = raw_joint_optimum(reg, agents, state);

    // Restrict each menu to the agent's feasible set before enumerating.
    // The safe default is always a member, so no menu is empty.
    std::vector<AgentSpec> restricted = agents;
    for (std::size_t i = 0; i < agents.size(); ++i)
        restricted[i].action_space.actions = feasible_set(bundle, state, agents[i]).actions;

    JointSpaceEnumerator walk(restricted, cap);
    while (auto tuple = walk.next()) {
        ++rep.points_scanned;
        if (eval_phi(bundle, state, *tuple).value != 1) continue;
        RiskReport risk = joint_risk(profile, reg, agents, state, *tuple, tau);
        if (!rep.gate_feasible || risk.total < rep.min_gate_risk) rep.min_gate_risk = risk.total;
        rep.gate_feasible = true;
        if (!risk.within_bound) continue;
        double u = joint_utility(reg, agents, state, *tuple);
        bool better = !rep.feasible || u > rep.best_utility ||
                      (u == rep.best_utility &&
                       tuple->canonical_key() < rep.argmax->canonical_key());
        if (better) {
            rep.best_utility = u;
            rep.argmax = std::move(*tuple);
        }
        rep.feasible = true;
    }
    return rep;
}

} // namespace camco
