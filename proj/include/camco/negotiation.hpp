#pragma once

/**
 * The negotiation loop: propose, project, evaluate risk, check the
 * compliance gate, tighten the multiplier, repeat. Returns within k_max
 * rounds by construction. Every decision is appended to the outcome's
 * audit trail with logical timestamps; nothing here reads a clock or an
 * RNG, so a rerun reproduces the trail byte for byte.
 */

#include <optional>
#include <string>
#include <vector>

#include "camco/projection.hpp"
#include "camco/serialization.hpp"
#include "camco/shaping.hpp"

namespace camco {

enum class AuditEventKind {
    Proposal,
    Projection,
    RejectToSafeDefault,
    RiskEval,
    PhiVerdict,
    LambdaUpdate,
    Accept,
    Fail,
    Fallback
};

inline std::string to_string(AuditEventKind k) {
    switch (k) {
        case AuditEventKind::Proposal: return "proposal";
        case AuditEventKind::Projection: return "projection";
        case AuditEventKind::RejectToSafeDefault: return "reject_to_safe_default";
        case AuditEventKind::RiskEval: return "risk_eval";
        case AuditEventKind::PhiVerdict: return "phi_verdict";
        case AuditEventKind::LambdaUpdate: return "lambda_update";
        case AuditEventKind::Accept: return "accept";
        case AuditEventKind::Fail: return "fail";
        case AuditEventKind::Fallback: return "fallback";
    }
    return "proposal";
}

inline AuditEventKind audit_kind_from_string(std::string_view s) {
    if (s == "proposal") return AuditEventKind::Proposal;
    if (s == "projection") return AuditEventKind::Projection;
    if (s == "reject_to_safe_default") return AuditEventKind::RejectToSafeDefault;
    if (s == "risk_eval") return AuditEventKind::RiskEval;
    if (s == "phi_verdict") return AuditEventKind::PhiVerdict;
    if (s == "lambda_update") return AuditEventKind::LambdaUpdate;
    if (s == "accept") return AuditEventKind::Accept;
    if (s == "fail") return AuditEventKind::Fail;
    if (s == "fallback") return AuditEventKind::Fallback;
    throw SchemaMismatch("audit event kind '" + std::string(s) + "'");
}

struct AuditEvent {
    std::string episode_id;
    int iteration = 0;    // negotiation round, 1-based; 0 for pre/post-loop events
    std::string agent_id; // empty for joint-level events
    AuditEventKind kind = AuditEventKind::Proposal;
    json payload;
    std::uint64_t timestamp = 0; // logical, strictly increasing per episode
};

enum class NegotiationStatus { Accepted, Failed };

inline std::string to_string(NegotiationStatus s) {
    return s == NegotiationStatus::Accepted ? "accepted" : "failed";
}

inline NegotiationStatus status_from_string(std::string_view s) {
    if (s == "accepted") return NegotiationStatus::Accepted;
    if (s == "failed") return NegotiationStatus::Failed;
    throw SchemaMismatch("negotiation status '" + std::string(s) + "'");
}

struct NegotiationOutcome {
    NegotiationStatus status = NegotiationStatus::Failed;
    std::optional<JointAction> joint; // set when Accepted
    int iterations_used = 0;
    std::vector<double> lambda_trajectory; // value entering each round
    RiskReport final_risk;                 // of the last evaluated tuple
    std::vector<AuditEvent> audit;
};

/// Carries cross-step episode memory: the last jointly compliant tuple,
/// which the fallback operator prefers over the all-safe-defaults joint.
struct EpisodeContext {
    std::string episode_id;
    std::optional<JointAction> last_compliant;
};

inline JointAction safe_default_joint(const std::vector<AgentSpec>& agents) {
    JointAction j;
    j.entries.reserve(agents.size());
    for (const auto& ag : agents) j.entries.emplace_back(ag.agent_id, ag.safe_default);
    return j;
}

inline JointAction fallback_joint(const std::vector<AgentSpec>& agents,
                                  const EpisodeContext* ctx) {
    if (ctx && ctx->last_compliant) return *ctx->last_compliant;
    return safe_default_joint(agents);
}

/// Checks the standing guarantee the fallback relies on: the fallback
/// tuple passes the gate and fits the budget. A failure here is a
/// configuration bug, not a runtime condition.
inline void verify_fallback(const FunctionRegistry& reg, const std::vector<AgentSpec>& agents,
                            const EnterpriseState& state, const PolicyBundle& bundle,
                            const RiskProfile& profile, double tau,
                            const EpisodeContext* ctx = nullptr) {
    JointAction fb = fallback_joint(agents, ctx);
    auto phi = eval_phi(bundle, state, fb);
    if (phi.value != 1) {
        std::string ids;
        for (const auto& f : phi.failing()) ids += (ids.empty() ? "" : ",") + f;
        throw FallbackInfeasible("fallback joint fails predicates [" + ids + "]");
    }
    auto risk = joint_risk(profile, reg, agents, state, fb, tau);
    if (!risk.within_bound)
        throw FallbackInfeasible("fallback joint risk " + canonical_double(risk.total) +
                                 " exceeds budget " + canonical_double(tau));
}

/// Reverts to the fallback tuple, verifying it still holds up, and logs
/// the reversion.
inline JointAction apply_fallback(const FunctionRegistry& reg, const std::vector<AgentSpec>& agents,
                                  const EnterpriseState& state, const PolicyBundle& bundle,
                                  const RiskProfile& profile, double tau, EpisodeContext* ctx,
                                  std::vector<AuditEvent>* audit = nullptr,
                                  std::uint64_t* timestamp = nullptr) {
    verify_fallback(reg, agents, state, bundle, profile, tau, ctx);
    JointAction fb = fallback_joint(agents, ctx);
    if (audit) {
        AuditEvent ev;
        ev.episode_id = ctx ? ctx->episode_id : "";
        ev.kind = AuditEventKind::Fallback;
        ev.payload = json{{"joint", to_json(fb)},
                          {"source", ctx && ctx->last_compliant ? "last_compliant" : "safe_defaults"}};
        ev.timestamp = timestamp ? (*timestamp)++ : 0;
        audit->push_back(std::move(ev));
    }
    return fb;
}

// ---------------------------------------------------------------------------

namespace detail {

class AuditTrail {
public:
    AuditTrail(std::vector<AuditEvent>& sink, std::string episode_id)
        : sink_(&sink), episode_id_(std::move(episode_id)) {}

    void emit(int iteration, std::string agent_id, AuditEventKind kind, json payload) {
        AuditEvent ev;
        ev.episode_id = episode_id_;
        ev.iteration = iteration;
        ev.agent_id = std::move(agent_id);
        ev.kind = kind;
        ev.payload = std::move(payload);
        ev.timestamp = next_++;
        sink_->push_back(std::move(ev));
    }
    std::uint64_t clock() const { return next_; }
    std::uint64_t& clock_ref() { return next_; }

private:
    std::vector<AuditEvent>* sink_;
    std::string episode_id_;
    std::uint64_t next_ = 0;
};

} // namespace detail

/**
 * One coordination episode. Per round: each agent proposes its shaped
 * best response, the projection step maps it into the agent's constraint
 * set (safe default on an empty set), joint risk is totaled, and the
 * tuple is accepted iff the gate passes and risk fits the budget;
 * otherwise the multiplier tightens and the roster re-proposes.
 */
inline NegotiationOutcome negotiate(const FunctionRegistry& reg,
                                    const std::vector<AgentSpec>& agents,
                                    const EnterpriseState& state, const PolicyBundle& bundle,
                                    const RiskProfile& profile, const CoordinationConfig& cfg,
                                    EpisodeContext* ctx = nullptr) {
    cfg.validate();
    NegotiationOutcome out;
    detail::AuditTrail trail(out.audit, ctx ? ctx->episode_id : "");
    LambdaState ls = LambdaState::initial(cfg);

    for (int k = 1; k <= cfg.k_max; ++k) {
        out.lambda_trajectory.push_back(ls.lambda);
        JointAction tuple;
        tuple.entries.reserve(agents.size());

        for (const auto& ag : agents) {
            BestResponse br = best_response(reg, profile, ag, state, ls.lambda);
            trail.emit(k, ag.agent_id, AuditEventKind::Proposal,
                       json{{"action", to_json(br.action)},
                            {"utility", br.utility},
                            {"risk", br.risk},
                            {"shaped", br.shaped},
                            {"lambda", ls.lambda}});

            ProjectionResult pr = project(bundle, state, ag, br.action);
            trail.emit(k, ag.agent_id, AuditEventKind::Projection,
                       json{{"outcome", to_string(pr.outcome)},
                            {"action", pr.action ? to_json(*pr.action) : json(nullptr)},
                            {"distance", pr.distance},
                            {"candidates", pr.candidates_examined}});

            ActionValue chosen;
            if (pr.outcome == ProjectionOutcome::Reject) {
                chosen = ag.safe_default;
                trail.emit(k, ag.agent_id, AuditEventKind::RejectToSafeDefault,
                           json{{"action", to_json(chosen)}});
            } else {
                chosen = *pr.action;
            }
            double r = agent_risk(profile, reg, ag.agent_id, state, chosen);
            trail.emit(k, ag.agent_id, AuditEventKind::RiskEval, json{{"risk", r}});
            tuple.entries.emplace_back(ag.agent_id, std::move(chosen));
        }

        RiskReport risk = joint_risk(profile, reg, agents, state, tuple, cfg.tau);
        trail.emit(k, "", AuditEventKind::RiskEval,
                   json{{"total", risk.total},
                        {"threshold", risk.threshold},
                        {"ratio", risk.ratio},
                        {"within_bound", risk.within_bound}});

        PhiVerdict phi = eval_phi(bundle, state, tuple);
        {
            json verdicts = json::array();
            for (const auto& v : phi.verdicts)
                verdicts.push_back(json{{"predicate_id", v.predicate_id}, {"passed", v.passed}});
            trail.emit(k, "", AuditEventKind::PhiVerdict,
                       json{{"value", phi.value}, {"verdicts", verdicts}});
        }

        out.final_risk = risk;
        if (phi.value == 1 && risk.within_bound) {
            out.status = NegotiationStatus::Accepted;
            out.joint = tuple;
            out.iterations_used = k;
            trail.emit(k, "", AuditEventKind::Accept,
                       json{{"joint", to_json(tuple)},
                            {"risk_total", risk.total},
                            {"iterations", k}});
            if (ctx) ctx->last_compliant = std::move(tuple);
            return out;
        }

        double before = ls.lambda;
        ls = update_lambda(ls, risk.total, cfg.tau, cfg);
        trail.emit(k, "", AuditEventKind::LambdaUpdate,
                   json{{"rule", to_string(cfg.dual_update_rule)},
                        {"before", before},
                        {"after", ls.lambda},
                        {"r_tot", risk.total},
                        {"tau", cfg.tau}});
    }

    out.status = NegotiationStatus::Failed;
    out.iterations_used = cfg.k_max;
    trail.emit(cfg.k_max, "", AuditEventKind::Fail,
               json{{"k_max", cfg.k_max},
                    {"last_risk_total", out.final_risk.total}});
    {
        // Operationally the system reverts; the reverted tuple is recorded
        // with its own gate verdict so the trail shows what actually ran.
        JointAction fb = fallback_joint(agents, ctx);
        auto phi = eval_phi(bundle, state, fb);
        auto risk = joint_risk(profile, reg, agents, state, fb, cfg.tau);
        trail.emit(cfg.k_max, "", AuditEventKind::Fallback,
                   json{{"joint", to_json(fb)},
                        {"source", ctx && ctx->last_compliant ? "last_compliant" : "safe_defaults"},
                        {"phi", phi.value},
                        {"risk_total", risk.total}});
    }
    return out;
}

} // namespace camco
