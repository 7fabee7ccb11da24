#pragma once

/**
 * Risk layer: weighted multi-dimensional exposure per agent action, and
 * the joint aggregate the negotiation loop compares against the budget.
 */

#include <map>
#include <string>
#include <vector>

#include "camco/domain.hpp"

namespace camco {

struct IndicatorRef {
    std::string fn;     // registry name
    double r_max = 1.0; // output ceiling for this (agent, dimension)
};

struct RiskProfile {
    std::vector<std::string> dimensions;          // declared order
    std::map<std::string, double> weights;        // dimension -> w_d >= 0
    // agent -> dimension -> indicator. A listed agent with no entry for a
    // dimension contributes zero on it; an agent absent from the map is an
    // error, so silent zero-risk agents cannot slip in.
    std::map<std::string, std::map<std::string, IndicatorRef>> indicators;

    double weight(const std::string& dim) const {
        auto it = weights.find(dim);
        return it == weights.end() ? 0.0 : it->second;
    }

    void validate() const {
        for (const auto& [dim, w] : weights) {
            if (!(w >= 0) || !std::isfinite(w)) throw ConfigInvalid("weight for '" + dim + "'");
            bool known = false;
            for (const auto& d : dimensions) known = known || d == dim;
            if (!known) throw ConfigInvalid("weight names undeclared dimension '" + dim + "'");
        }
        for (const auto& [agent, per_dim] : indicators) {
            for (const auto& [dim, ref] : per_dim) {
                bool known = false;
                for (const auto& d : dimensions) known = known || d == dim;
                if (!known)
                    throw ConfigInvalid("indicator for '" + agent + "' names undeclared dimension '" + dim + "'");
                if (!(ref.r_max >= 0) || !std::isfinite(ref.r_max))
                    throw ConfigInvalid("r_max for ('" + agent + "', '" + dim + "')");
            }
        }
    }
};

/// R_i(a): weighted sum over dimensions, each indicator clamped into
/// [0, r_max]. Throws MissingIndicator for an agent the profile ignores.
inline double agent_risk(const RiskProfile& profile, const FunctionRegistry& reg,
                         const std::string& agent_id, const EnterpriseState& state,
                         const ActionValue& action) {
    auto it = profile.indicators.find(agent_id);
    if (it == profile.indicators.end())
        throw MissingIndicator("agent '" + agent_id + "' has no indicators in the risk profile");
    double total = 0.0;
    for (const auto& dim : profile.dimensions) {
        auto jt = it->second.find(dim);
        if (jt == it->second.end()) continue;
        double raw = reg.indicator(jt->second.fn)(state, action);
        if (raw < 0.0) raw = 0.0;
        if (raw > jt->second.r_max) raw = jt->second.r_max;
        total += profile.weight(dim) * raw;
    }
    return total;
}

struct RiskReport {
    std::vector<std::pair<std::string, double>> per_agent; // roster order
    double total = 0.0;
    double threshold = 0.0;
    double ratio = 0.0; // total / threshold
    bool within_bound = true;
};

inline RiskReport joint_risk(const RiskProfile& profile, const FunctionRegistry& reg,
                             const std::vector<AgentSpec>& agents, const EnterpriseState& state,
                             const JointAction& joint, double tau) {
    RiskReport out;
    out.threshold = tau;
    for (const auto& ag : agents) {
        const ActionValue* a = joint.find(ag.agent_id);
        if (!a) throw ConfigInvalid("joint action misses agent '" + ag.agent_id + "'");
        double r = agent_risk(profile, reg, ag.agent_id, state, *a);
        out.per_agent.emplace_back(ag.agent_id, r);
        out.total += r;
    }
    out.ratio = tau > 0 ? out.total / tau : 0.0;
    out.within_bound = out.total <= tau;
    return out;
}

} // namespace camco
