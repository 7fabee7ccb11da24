#pragma once

/**
 * Reference coordinators the evaluation compares against. All four emit
 * the same audit-event schema as the negotiation engine so one verifier
 * reads every trail; what differs is which checks they actually enforce.
 */

#include "camco/negotiation.hpp"

namespace camco {

enum class CoordinatorKind {
    CAMCO,              // full projection + gate + dual negotiation
    UnconstrainedArgmax, // b1: raw per-agent argmax, nothing enforced
    CentralizedGreedy,   // b2: per-agent argmax over F_i(s), gate ignored
    StaticRules,         // b3: argmax filtered by static membership, one gate check
    PerAgentLagrangian   // b4: per-agent hinge multipliers, budget tau/n, no gate
};

inline std::string to_string(CoordinatorKind k) {
    switch (k) {
        case CoordinatorKind::CAMCO: return "camco";
        case CoordinatorKind::UnconstrainedArgmax: return "b1";
        case CoordinatorKind::CentralizedGreedy: return "b2";
        case CoordinatorKind::StaticRules: return "b3";
        case CoordinatorKind::PerAgentLagrangian: return "b4";
    }
    return "camco";
}

inline CoordinatorKind coordinator_from_string(std::string_view s) {
    if (s == "camco") return CoordinatorKind::CAMCO;
    if (s == "b1") return CoordinatorKind::UnconstrainedArgmax;
    if (s == "b2") return CoordinatorKind::CentralizedGreedy;
    if (s == "b3") return CoordinatorKind::StaticRules;
    if (s == "b4") return CoordinatorKind::PerAgentLagrangian;
    throw ConfigInvalid("coordinator '" + std::string(s) + "'");
}

inline std::vector<CoordinatorKind> all_coordinators() {
    return {CoordinatorKind::CAMCO, CoordinatorKind::UnconstrainedArgmax,
            CoordinatorKind::CentralizedGreedy, CoordinatorKind::StaticRules,
            CoordinatorKind::PerAgentLagrangian};
}

namespace detail {

/// Shared tail: record the joint risk and gate verdict (enforced or not),
/// then the accept/fail event.
inline void finish_joint(detail::AuditTrail& trail, int iteration, const FunctionRegistry& reg,
                         const std::vector<AgentSpec>& agents, const EnterpriseState& state,
                         const PolicyBundle& bundle, const RiskProfile& profile,
                         const CoordinationConfig& cfg, const JointAction& tuple,
                         NegotiationOutcome& out, bool enforce_phi) {
    RiskReport risk = joint_risk(profile, reg, agents, state, tuple, cfg.tau);
    trail.emit(iteration, "", AuditEventKind::RiskEval,
               json{{"total", risk.total},
                    {"threshold", risk.threshold},
                    {"ratio", risk.ratio},
                    {"within_bound", risk.within_bound}});
    PhiVerdict phi = eval_phi(bundle, state, tuple);
    json verdicts = json::array();
    for (const auto& v : phi.verdicts)
        verdicts.push_back(json{{"predicate_id", v.predicate_id}, {"passed", v.passed}});
    trail.emit(iteration, "", AuditEventKind::PhiVerdict,
               json{{"value", phi.value}, {"verdicts", verdicts}});

    out.final_risk = risk;
    out.iterations_used = iteration;
    if (enforce_phi && phi.value != 1) {
        out.status = NegotiationStatus::Failed;
        trail.emit(iteration, "", AuditEventKind::Fail,
                   json{{"k_max", iteration}, {"last_risk_total", risk.total}});
        return;
    }
    out.status = NegotiationStatus::Accepted;
    out.joint = tuple;
    trail.emit(iteration, "", AuditEventKind::Accept,
               json{{"joint", to_json(tuple)}, {"risk_total", risk.total}, {"iterations", iteration}});
}

} // namespace detail

/// b1: every agent plays its raw argmax; no membership, gate, or risk
/// enforcement anywhere. Single round, always accepted. Reads none of the
/// dual-update knobs, so its behavior is invariant to them.
inline NegotiationOutcome b1_unconstrained(const FunctionRegistry& reg,
                                           const std::vector<AgentSpec>& agents,
                                           const EnterpriseState& state,
                                           const PolicyBundle& bundle, const RiskProfile& profile,
                                           const CoordinationConfig& cfg,
                                           EpisodeContext* ctx = nullptr) {
    NegotiationOutcome out;
    detail::AuditTrail trail(out.audit, ctx ? ctx->episode_id : "");
    JointAction tuple;
    for (const auto& ag : agents) {
        BestResponse br = best_response(reg, profile, ag, state, 0.0);
        trail.emit(1, ag.agent_id, AuditEventKind::Proposal,
                   json{{"action", to_json(br.action)},
                        {"utility", br.utility},
                        {"risk", br.risk},
                        {"shaped", br.utility},
                        {"lambda", 0.0}});
        trail.emit(1, ag.agent_id, AuditEventKind::RiskEval, json{{"risk", br.risk}});
        tuple.entries.emplace_back(ag.agent_id, br.action);
    }
    detail::finish_joint(trail, 1, reg, agents, state, bundle, profile, cfg, tuple, out,
                         /*enforce_phi=*/false);
    return out;
}

/// b2: per-agent argmax of raw utility over F_i(s). With a separable
/// objective and per-agent membership constraints the per-agent argmax IS
/// the joint optimum over the product set, so no joint enumeration is
/// needed. The gate and the budget are not enforced.
inline NegotiationOutcome b2_centralized_greedy(const FunctionRegistry& reg,
                                                const std::vector<AgentSpec>& agents,
                                                const EnterpriseState& state,
                                                const PolicyBundle& bundle,
                                                const RiskProfile& profile,
                                                const CoordinationConfig& cfg,
                                                EpisodeContext* ctx = nullptr) {
    NegotiationOutcome out;
    detail::AuditTrail trail(out.audit, ctx ? ctx->episode_id : "");
    JointAction tuple;
    for (const auto& ag : agents) {
        FeasibleSet fs = feasible_set(bundle, state, ag);
        ActionValue pick = ag.safe_default;
        double best_u = 0.0;
        bool found = false;
        std::string best_key;
        if (ag.action_space.kind == ActionKind::Discrete) {
            for (const auto& a : fs.actions) {
                double u = agent_utility(reg, ag, state, a);
                std::string key = a.canonical_key();
                if (!found || u > best_u || (u == best_u && key < best_key)) {
                    pick = a;
                    best_u = u;
                    best_key = std::move(key);
                    found = true;
                }
            }
        } else {
            // Greedy for regions: raw argmax pulled into the region, kept
            // only if it beats the safe default.
            pick = ag.safe_default;
            best_u = agent_utility(reg, ag, state, pick);
            found = true;
            if (fs.region_enabled) {
                BestResponse br = best_response(reg, profile, ag, state, 0.0);
                ProjectionResult pr = project_continuous(br.action.vec, fs.box, fs.halfspaces);
                if (pr.outcome != ProjectionOutcome::Reject) {
                    double u = agent_utility(reg, ag, state, *pr.action);
                    if (u > best_u) {
                        pick = *pr.action;
                        best_u = u;
                    }
                }
            }
        }
        double r = agent_risk(profile, reg, ag.agent_id, state, pick);
        trail.emit(1, ag.agent_id, AuditEventKind::Proposal,
                   json{{"action", to_json(pick)},
                        {"utility", best_u},
                        {"risk", r},
                        {"shaped", best_u},
                        {"lambda", 0.0}});
        trail.emit(1, ag.agent_id, AuditEventKind::RiskEval, json{{"risk", r}});
        tuple.entries.emplace_back(ag.agent_id, std::move(pick));
    }
    detail::finish_joint(trail, 1, reg, agents, state, bundle, profile, cfg, tuple, out,
                         /*enforce_phi=*/false);
    return out;
}

/// b3: static rule filter. Raw argmax, then a membership test against
/// F_i(s) and the per-agent policy slices; failures are replaced by the
/// safe default outright (no nearest-candidate search). One joint gate
/// check decides accept/fail; there is no retry and no risk budget.
inline NegotiationOutcome b3_static_rules(const FunctionRegistry& reg,
                                          const std::vector<AgentSpec>& agents,
                                          const EnterpriseState& state, const PolicyBundle& bundle,
                                          const RiskProfile& profile,
                                          const CoordinationConfig& cfg,
                                          EpisodeContext* ctx = nullptr) {
    NegotiationOutcome out;
    detail::AuditTrail trail(out.audit, ctx ? ctx->episode_id : "");
    JointAction tuple;
    for (const auto& ag : agents) {
        BestResponse br = best_response(reg, profile, ag, state, 0.0);
        trail.emit(1, ag.agent_id, AuditEventKind::Proposal,
                   json{{"action", to_json(br.action)},
                        {"utility", br.utility},
                        {"risk", br.risk},
                        {"shaped", br.utility},
                        {"lambda", 0.0}});
        AgentConstraintSet cs = agent_constraints(bundle, state, ag);
        ActionValue chosen = br.action;
        if (!cs.admits(state, ag.agent_id, chosen)) {
            chosen = ag.safe_default;
            trail.emit(1, ag.agent_id, AuditEventKind::RejectToSafeDefault,
                       json{{"action", to_json(chosen)}});
        }
        double r = agent_risk(profile, reg, ag.agent_id, state, chosen);
        trail.emit(1, ag.agent_id, AuditEventKind::RiskEval, json{{"risk", r}});
        tuple.entries.emplace_back(ag.agent_id, std::move(chosen));
    }
    detail::finish_joint(trail, 1, reg, agents, state, bundle, profile, cfg, tuple, out,
                         /*enforce_phi=*/true);
    if (out.status == NegotiationStatus::Failed) {
        JointAction fb = fallback_joint(agents, ctx);
        auto phi = eval_phi(bundle, state, fb);
        auto risk = joint_risk(profile, reg, agents, state, fb, cfg.tau);
        trail.emit(1, "", AuditEventKind::Fallback,
                   json{{"joint", to_json(fb)},
                        {"source", ctx && ctx->last_compliant ? "last_compliant" : "safe_defaults"},
                        {"phi", phi.value},
                        {"risk_total", risk.total}});
    } else if (ctx && out.joint) {
        ctx->last_compliant = *out.joint;
    }
    return out;
}

/// b4: each agent runs its own hinge-ascent multiplier against an equal
/// split tau/n of the budget. No projection, no joint gate; after the
/// rounds settle the tuple ships as-is, so any gate violations surface
/// only in post-hoc verification.
inline NegotiationOutcome b4_per_agent_lagrangian(const FunctionRegistry& reg,
                                                  const std::vector<AgentSpec>& agents,
                                                  const EnterpriseState& state,
                                                  const PolicyBundle& bundle,
                                                  const RiskProfile& profile,
                                                  const CoordinationConfig& cfg,
                                                  EpisodeContext* ctx = nullptr) {
    cfg.validate();
    NegotiationOutcome out;
    detail::AuditTrail trail(out.audit, ctx ? ctx->episode_id : "");
    const double budget = cfg.tau / static_cast<double>(agents.size());
    std::vector<double> lambdas(agents.size(), cfg.lambda0);
    std::vector<ActionValue> current(agents.size());

    int rounds = 0;
    for (int k = 1; k <= cfg.k_max; ++k) {
        rounds = k;
        bool any_over = false;
        for (std::size_t i = 0; i < agents.size(); ++i) {
            const auto& ag = agents[i];
            BestResponse br = best_response(reg, profile, ag, state, lambdas[i]);
            current[i] = br.action;
            trail.emit(k, ag.agent_id, AuditEventKind::Proposal,
                       json{{"action", to_json(br.action)},
                            {"utility", br.utility},
                            {"risk", br.risk},
                            {"shaped", br.shaped},
                            {"lambda", lambdas[i]}});
            trail.emit(k, ag.agent_id, AuditEventKind::RiskEval, json{{"risk", br.risk}});
            if (br.risk > budget) {
                any_over = true;
                double before = lambdas[i];
                lambdas[i] += cfg.alpha * (br.risk - budget);
                trail.emit(k, ag.agent_id, AuditEventKind::LambdaUpdate,
                           json{{"rule", "hinge"},
                                {"before", before},
                                {"after", lambdas[i]},
                                {"r_tot", br.risk},
                                {"tau", budget}});
            }
        }
        if (!any_over) break;
    }

    JointAction tuple;
    for (std::size_t i = 0; i < agents.size(); ++i)
        tuple.entries.emplace_back(agents[i].agent_id, current[i]);
    detail::finish_joint(trail, rounds, reg, agents, state, bundle, profile, cfg, tuple, out,
                         /*enforce_phi=*/false);
    return out;
}

inline NegotiationOutcome run_coordinator(CoordinatorKind kind, const FunctionRegistry& reg,
                                          const std::vector<AgentSpec>& agents,
                                          const EnterpriseState& state, const PolicyBundle& bundle,
                                          const RiskProfile& profile,
                                          const CoordinationConfig& cfg,
                                          EpisodeContext* ctx = nullptr) {
    switch (kind) {
        case CoordinatorKind::CAMCO:
            return negotiate(reg, agents, state, bundle, profile, cfg, ctx);
        case CoordinatorKind::UnconstrainedArgmax:
            return b1_unconstrained(reg, agents, state, bundle, profile, cfg, ctx);
        case CoordinatorKind::CentralizedGreedy:
            return b2_centralized_greedy(reg, agents, state, bundle, profile, cfg, ctx);
        case CoordinatorKind::StaticRules:
            return b3_static_rules(reg, agents, state, bundle, profile, cfg, ctx);
        case CoordinatorKind::PerAgentLagrangian:
            return b4_per_agent_lagrangian(reg, agents, state, bundle, profile, cfg, ctx);
    }
    throw ConfigInvalid("unknown coordinator");
}

} // namespace camco
