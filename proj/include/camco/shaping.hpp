#pragma once

/**
 * Multiplier-shaped decision layer: the penalized utility each agent
 * maximizes, the dual-variable update rules, and the per-agent best
 * response search.
 */

#include <cmath>
#include <string>
#include <vector>

#include "camco/risk.hpp"

namespace camco {

inline double shaped_utility(double utility, double risk, double lambda) {
    return utility - lambda * risk;
}

struct LambdaState {
    double lambda = 0.0;
    int iteration = 0; // completed update count
    DualUpdateRule rule = DualUpdateRule::Alg1Ratio;

    struct HistoryEntry {
        int iteration;  // 1-based update ordinal
        double lambda;  // value after the update
        double r_tot;   // joint risk that drove it
    };
    std::vector<HistoryEntry> history;

    static LambdaState initial(const CoordinationConfig& cfg) {
        LambdaState s;
        s.lambda = cfg.lambda0;
        s.rule = cfg.dual_update_rule;
        return s;
    }
};

/// One dual step. The ratio rule always moves by at least delta; the two
/// hinge rules move only on budget overshoot, the second with a 1/sqrt(t)
/// decaying step.
inline LambdaState update_lambda(LambdaState s, double r_tot, double tau,
                                 const CoordinationConfig& cfg) {
    double next = s.lambda;
    int t = s.iteration + 1;
    switch (cfg.dual_update_rule) {
        case DualUpdateRule::Alg1Ratio:
            next += cfg.delta * std::max(1.0, r_tot / tau);
            break;
        case DualUpdateRule::HingeAscent:
            next += cfg.alpha * std::max(0.0, r_tot - tau);
            break;
        case DualUpdateRule::DiminishingHinge:
            next += (cfg.eta0 / std::sqrt(static_cast<double>(t))) * std::max(0.0, r_tot - tau);
            break;
    }
    s.lambda = next;
    s.iteration = t;
    s.history.push_back({t, next, r_tot});
    return s;
}

struct BestResponse {
    ActionValue action;
    double utility = 0.0;
    double risk = 0.0;
    double shaped = 0.0;
};

namespace detail {

inline BestResponse scan_discrete(const FunctionRegistry& reg, const RiskProfile& profile,
                                  const AgentSpec& agent, const EnterpriseState& state,
                                  double lambda) {
    BestResponse best;
    std::string best_key;
    bool found = false;
    for (const auto& a : agent.action_space.actions) {
        double u = agent_utility(reg, agent, state, a);
        double r = agent_risk(profile, reg, agent.agent_id, state, a);
        double s = shaped_utility(u, r, lambda);
        std::string key = a.canonical_key();
        if (!found || s > best.shaped || (s == best.shaped && key < best_key)) {
            best = {a, u, r, s};
            best_key = std::move(key);
            found = true;
        }
    }
    if (!found) throw ConfigInvalid("agent '" + agent.agent_id + "' has an empty action space");
    return best;
}

inline constexpr int kGridPointsPerAxis = 33;
inline constexpr int kGridMaxDims = 4;

inline BestResponse scan_continuous(const FunctionRegistry& reg, const RiskProfile& profile,
                                    const AgentSpec& agent, const EnterpriseState& state,
                                    double lambda) {
    const BoxBounds& box = agent.action_space.box;
    box.validate();
    const std::size_t d = box.dim();
    if (d == 0 || d > kGridMaxDims)
        throw ConfigInvalid("continuous best response supports 1.." +
                            std::to_string(kGridMaxDims) + " coordinates, got " + std::to_string(d));

    auto evaluate = [&](const std::vector<double>& x) {
        ActionValue a = ActionValue::continuous(x);
        double u = agent_utility(reg, agent, state, a);
        double r = agent_risk(profile, reg, agent.agent_id, state, a);
        return BestResponse{std::move(a), u, r, shaped_utility(u, r, lambda)};
    };

    // Grid scan over [lo, hi], then one refinement pass of the same
    // resolution around the incumbent cell. First-found wins ties, and the
    // scan order is a fixed odometer, so the result is deterministic.
    auto scan = [&](const std::vector<double>& lo, const std::vector<double>& hi,
                    BestResponse& best, bool& has_best) {
        std::vector<int> idx(d, 0);
        std::vector<double> x(d);
        while (true) {
            for (std::size_t i = 0; i < d; ++i) {
                double t = static_cast<double>(idx[i]) / (kGridPointsPerAxis - 1);
                x[i] = lo[i] + t * (hi[i] - lo[i]);
            }
            BestResponse cand = evaluate(x);
            if (!has_best || cand.shaped > best.shaped) {
                best = std::move(cand);
                has_best = true;
            }
            std::size_t i = d;
            bool carry = true;
            while (i > 0 && carry) {
                --i;
                if (++idx[i] < kGridPointsPerAxis)
                    carry = false;
                else
                    idx[i] = 0;
            }
            if (carry) break;
        }
    };

    BestResponse best;
    bool has_best = false;
    scan(box.lo, box.hi, best, has_best);

    std::vector<double> lo2(d), hi2(d);
    for (std::size_t i = 0; i < d; ++i) {
        double cell = (box.hi[i] - box.lo[i]) / (kGridPointsPerAxis - 1);
        lo2[i] = std::max(box.lo[i], best.action.vec[i] - cell);
        hi2[i] = std::min(box.hi[i], best.action.vec[i] + cell);
    }
    scan(lo2, hi2, best, has_best);
    return best;
}

} // namespace detail

/// argmax over the agent's raw action space of U - lambda * R. Ties break
/// toward the smallest canonical key (discrete) or first grid visit
/// (continuous).
inline BestResponse best_response(const FunctionRegistry& reg, const RiskProfile& profile,
                                  const AgentSpec& agent, const EnterpriseState& state,
                                  double lambda) {
    if (agent.action_space.kind == ActionKind::Discrete)
        return detail::scan_discrete(reg, profile, agent, state, lambda);
    return detail::scan_continuous(reg, profile, agent, state, lambda);
}

} // namespace camco
