#pragma once

/**
 * Structural validation of a roster and its companion policy bundle and
 * risk profile. Errors are conditions evaluation would throw on; warnings
 * are suspicious but survivable (an always-false predicate, a granted
 * label no action carries).
 */

#include <set>
#include <string>
#include <vector>

#include "camco/policy.hpp"
#include "camco/risk.hpp"

namespace camco {

enum class FindingSeverity { Error, Warning };

struct Finding {
    FindingSeverity severity = FindingSeverity::Error;
    std::string code;    // stable machine-readable tag
    std::string subject; // agent / predicate / rule id
    std::string detail;
};

struct ValidationReport {
    std::vector<Finding> findings;

    bool ok() const {
        for (const auto& f : findings)
            if (f.severity == FindingSeverity::Error) return false;
        return true;
    }
    std::size_t errors() const {
        std::size_t n = 0;
        for (const auto& f : findings) n += f.severity == FindingSeverity::Error;
        return n;
    }
    void add(FindingSeverity sev, std::string code, std::string subject, std::string detail) {
        findings.push_back({sev, std::move(code), std::move(subject), std::move(detail)});
    }
};

inline ValidationReport validate_roster(const std::vector<AgentSpec>& agents,
                                        const EnterpriseState& state,
                                        const PolicyBundle* bundle = nullptr,
                                        const RiskProfile* profile = nullptr,
                                        const FunctionRegistry* registry = nullptr) {
    ValidationReport rep;
    std::set<std::string> ids;
    std::set<std::string> labels_by_agent_key; // "agent\nlabel"

    for (const auto& ag : agents) {
        if (!ids.insert(ag.agent_id).second)
            rep.add(FindingSeverity::Error, "duplicate_agent_id", ag.agent_id, "agent id repeats in roster");
        if (ag.action_space.kind == ActionKind::Discrete) {
            if (ag.action_space.actions.empty())
                rep.add(FindingSeverity::Error, "empty_action_space", ag.agent_id, "no actions declared");
            for (const auto& a : ag.action_space.actions)
                labels_by_agent_key.insert(ag.agent_id + "\n" + a.label);
        } else {
            try {
                ag.action_space.box.validate();
            } catch (const Error& e) {
                rep.add(FindingSeverity::Error, "bad_box", ag.agent_id, e.what());
            }
        }
        if (!ag.action_space.contains(ag.safe_default))
            rep.add(FindingSeverity::Error, "safe_default_outside_space", ag.agent_id,
                    "safe default is not a member of the action space");
        if (registry && !registry->has_utility(ag.utility_fn))
            rep.add(FindingSeverity::Error, "unknown_utility_fn", ag.agent_id,
                    "utility fn '" + ag.utility_fn + "' not registered");
    }

    auto known_agent = [&](const std::string& id) { return ids.count(id) != 0; };
    auto known_label = [&](const std::string& agent, const std::string& label) {
        return labels_by_agent_key.count(agent + "\n" + label) != 0;
    };

    if (bundle) {
        std::set<std::string> ruled;
        for (const auto& r : bundle->feasibility) {
            ruled.insert(r.agent_id);
            if (!known_agent(r.agent_id))
                rep.add(FindingSeverity::Error, "rule_unknown_agent", r.rule_id,
                        "feasibility rule targets unknown agent '" + r.agent_id + "'");
            for (const auto& l : r.perm)
                if (known_agent(r.agent_id) && !known_label(r.agent_id, l))
                    rep.add(FindingSeverity::Warning, "granted_label_missing", r.rule_id,
                            "granted label '" + l + "' matches no action of '" + r.agent_id + "'");
            for (const auto& v : referenced_state_vars(r.avail))
                if (!state.has(v))
                    rep.add(FindingSeverity::Warning, "missing_state_variable", r.rule_id,
                            "availability reads absent state variable '" + v + "'");
            if (const auto* fw = std::get_if<FlagWindow>(&r.window))
                if (!state.has(fw->state_flag))
                    rep.add(FindingSeverity::Warning, "missing_state_variable", r.rule_id,
                            "window reads absent state variable '" + fw->state_flag + "'");
        }
        for (const auto& ag : agents)
            if (!ruled.count(ag.agent_id))
                rep.add(FindingSeverity::Error, "agent_without_rules", ag.agent_id,
                        "no feasibility rule covers this agent");
        for (const auto& p : bundle->predicates) {
            for (const auto& a : p.referenced_agents())
                if (!known_agent(a))
                    rep.add(FindingSeverity::Error, "predicate_unknown_agent", p.predicate_id,
                            "references unknown agent '" + a + "'");
            if (const auto* q = std::get_if<CustomParams>(&p.params)) {
                for (const auto& v : referenced_state_vars(q->expression))
                    if (!state.has(v))
                        rep.add(FindingSeverity::Warning, "missing_state_variable", p.predicate_id,
                                "expression reads absent state variable '" + v + "'");
            } else if (const auto* q = std::get_if<SegregationParams>(&p.params)) {
                if (!q->pair_form() && !state.has(q->state_var))
                    rep.add(FindingSeverity::Warning, "missing_state_variable", p.predicate_id,
                            "compares against absent state variable '" + q->state_var + "'");
            } else if (const auto* q = std::get_if<ThresholdGateParams>(&p.params)) {
                if (!state.has(q->amount_var))
                    rep.add(FindingSeverity::Warning, "missing_state_variable", p.predicate_id,
                            "gate reads absent state variable '" + q->amount_var + "'");
            }
        }
    }

    if (profile) {
        try {
            profile->validate();
        } catch (const Error& e) {
            rep.add(FindingSeverity::Error, "bad_risk_profile", "", e.what());
        }
        for (const auto& ag : agents)
            if (!profile->indicators.count(ag.agent_id))
                rep.add(FindingSeverity::Error, "agent_without_indicators", ag.agent_id,
                        "risk profile has no indicator row for this agent");
        for (const auto& [agent, per_dim] : profile->indicators) {
            if (!known_agent(agent))
                rep.add(FindingSeverity::Warning, "indicator_unknown_agent", agent,
                        "indicator row for agent not in roster");
            if (registry)
                for (const auto& [dim, ref] : per_dim)
                    if (!registry->has_indicator(ref.fn))
                        rep.add(FindingSeverity::Error, "unknown_indicator_fn", agent,
                                "indicator fn '" + ref.fn + "' for dimension '" + dim +
                                    "' not registered");
        }
        // The fallback guarantee leans on zero-risk safe defaults.
        if (registry) {
            for (const auto& ag : agents) {
                if (!profile->indicators.count(ag.agent_id)) continue;
                bool resolvable = true;
                for (const auto& [dim, ref] : profile->indicators.at(ag.agent_id))
                    resolvable = resolvable && registry->has_indicator(ref.fn);
                if (!resolvable) continue;
                double r = agent_risk(*profile, *registry, ag.agent_id, state, ag.safe_default);
                if (r != 0.0)
                    rep.add(FindingSeverity::Error, "safe_default_carries_risk", ag.agent_id,
                            "safe default risk is " + canonical_double(r) + ", expected 0");
            }
        }
    }
    return rep;
}

} // namespace camco
