#pragma once

/**
 * Seeded random instances: small rosters with random menus, policies,
 * and risk shapes. Used by property tests, the termination sweep, and
 * the oracle comparison harness. Utilities and indicators go through the
 * attr:* builtins so instances serialize cleanly.
 */

#include <string>
#include <vector>

#include "camco/rng.hpp"
#include "camco/validate.hpp"

namespace camco {

struct SyntheticOptions {
    int min_agents = 1;
    int max_agents = 3;
    int min_actions = 2;
    int max_actions = 6;
    int max_predicates = 3;
    bool allow_windows = true;
};

struct SyntheticInstance {
    std::vector<AgentSpec> roster;
    PolicyBundle bundle;
    RiskProfile profile;
    EnterpriseState state;
    CoordinationConfig cfg;
};

namespace detail {

inline const std::vector<std::string>& synthetic_principals() {
    static const std::vector<std::string> pool = {"p1", "p2", "p3", "p4"};
    return pool;
}

inline std::string pick(Rng& rng, const std::vector<std::string>& pool) {
    return pool[static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
}

} // namespace detail

/// Fully seeded; equal seeds give equal instances. The safe default is a
/// zero-risk "noop" granted unconditionally, so rosters always have a
/// riskless out even when the random policy is hostile.
inline SyntheticInstance make_synthetic_instance(std::uint64_t seed,
                                                 const SyntheticOptions& opts = {}) {
    Rng root(seed);
    Rng rng = root.derive("instance");
    SyntheticInstance inst;

    inst.state.scenario_id = ScenarioId::Synthetic;
    inst.state.rng_seed = seed;
    inst.state.variables["amount"] = rng.next_in(0.0, 100.0);
    inst.state.variables["busy"] = rng.next_bool(0.5);
    inst.state.variables["owner"] = detail::pick(rng, detail::synthetic_principals());

    const int n = static_cast<int>(rng.next_int(opts.min_agents, opts.max_agents));
    const std::vector<std::string> cats = {"a", "b", "c"};

    for (int i = 0; i < n; ++i) {
        AgentSpec ag;
        ag.agent_id = "agent" + std::to_string(i);
        ag.utility_fn = "attr:u";
        ag.action_space.kind = ActionKind::Discrete;

        ActionValue noop = ActionValue::discrete(
            "noop", {{"u", rng.next_in(0.0, 1.0)}, {"r", 0.0}, {"level", 0.0}});
        ag.action_space.actions.push_back(noop);
        ag.safe_default = noop;

        const int acts = static_cast<int>(rng.next_int(opts.min_actions, opts.max_actions));
        for (int a = 1; a < acts; ++a) {
            std::map<std::string, AttrValue> attrs;
            attrs["u"] = rng.next_in(0.0, 10.0);
            attrs["r"] = rng.next_in(0.0, 1.0);
            attrs["level"] = static_cast<double>(a);
            attrs["cat"] = detail::pick(rng, cats);
            if (rng.next_bool(0.6)) attrs["principal"] = detail::pick(rng, detail::synthetic_principals());
            ag.action_space.actions.push_back(
                ActionValue::discrete("act" + std::to_string(a), std::move(attrs)));
        }
        inst.roster.push_back(std::move(ag));
    }

    // Feasibility: one broad unconditional grant per agent (random subset,
    // safe default implicitly member) plus an occasional gated grant.
    for (const auto& ag : inst.roster) {
        FeasibilityRule base;
        base.rule_id = ag.agent_id + ".base";
        base.agent_id = ag.agent_id;
        for (const auto& a : ag.action_space.actions)
            if (a.label == "noop" || rng.next_bool(0.8)) base.perm.push_back(a.label);
        inst.bundle.feasibility.push_back(std::move(base));

        if (rng.next_bool(0.3)) {
            FeasibilityRule gated;
            gated.rule_id = ag.agent_id + ".gated";
            gated.agent_id = ag.agent_id;
            for (const auto& a : ag.action_space.actions)
                if (rng.next_bool(0.5)) gated.perm.push_back(a.label);
            if (rng.next_bool(0.5))
                gated.avail = expr::neg(expr::state("busy"));
            else if (opts.allow_windows)
                gated.window = FlagWindow{"busy"};
            inst.bundle.feasibility.push_back(std::move(gated));
        }
    }

    // Predicates: random mix across every kind.
    const int preds = static_cast<int>(rng.next_int(0, opts.max_predicates));
    for (int p = 0; p < preds; ++p) {
        const auto& first = inst.roster[static_cast<std::size_t>(
            rng.next_int(0, static_cast<std::int64_t>(inst.roster.size()) - 1))];
        const auto& second = inst.roster[static_cast<std::size_t>(
            rng.next_int(0, static_cast<std::int64_t>(inst.roster.size()) - 1))];
        auto labels_of = [&](const AgentSpec& ag, double keep) {
            std::vector<std::string> out;
            for (const auto& a : ag.action_space.actions)
                if (a.label != "noop" && rng.next_bool(keep)) out.push_back(a.label);
            if (out.empty() && ag.action_space.actions.size() > 1)
                out.push_back(ag.action_space.actions[1].label);
            return out;
        };
        PolicyPredicate pred;
        pred.predicate_id = "pred" + std::to_string(p);
        switch (rng.next_int(0, 3)) {
            case 0: {
                SegregationParams q;
                q.first_agent = first.agent_id;
                q.first_labels = labels_of(first, 0.6);
                q.attribute = "principal";
                if (rng.next_bool(0.5) && second.agent_id != first.agent_id) {
                    q.second_agent = second.agent_id;
                    q.second_labels = labels_of(second, 0.6);
                } else {
                    q.state_var = "owner";
                }
                pred.params = std::move(q);
                break;
            }
            case 1: {
                TemporalOrderParams q;
                q.prerequisite_agent = first.agent_id;
                q.prerequisite_labels = labels_of(first, 0.5);
                q.dependent_agent = second.agent_id;
                q.dependent_labels = labels_of(second, 0.5);
                pred.params = std::move(q);
                break;
            }
            case 2: {
                ThresholdGateParams q;
                q.amount_var = "amount";
                q.threshold = rng.next_in(20.0, 80.0);
                q.subject_agent = first.agent_id;
                q.subject_labels = labels_of(first, 0.6);
                q.escalation_agent = second.agent_id;
                q.escalation_labels = labels_of(second, 0.5);
                pred.params = std::move(q);
                break;
            }
            default: {
                CustomParams q;
                q.expression = expr::implies(
                    expr::gt(expr::state("amount"), expr::num(rng.next_in(10.0, 90.0))),
                    expr::neg(expr::label_in(first.agent_id, labels_of(first, 0.4))));
                pred.params = std::move(q);
                break;
            }
        }
        inst.bundle.predicates.push_back(std::move(pred));
    }

    // Risk: one weighted dimension over the attr:r indicator.
    inst.profile.dimensions = {"operational"};
    inst.profile.weights["operational"] = rng.next_in(0.5, 1.5);
    for (const auto& ag : inst.roster)
        inst.profile.indicators[ag.agent_id]["operational"] = IndicatorRef{"attr:r", 1.0};

    inst.cfg.tau = rng.next_in(0.3, 2.5);
    inst.cfg.lambda0 = rng.next_bool(0.8) ? 0.0 : 0.2;
    inst.cfg.delta = rng.next_in(0.1, 0.6);
    inst.cfg.k_max = static_cast<int>(rng.next_int(3, 12));
    switch (rng.next_int(0, 2)) {
        case 0: inst.cfg.dual_update_rule = DualUpdateRule::Alg1Ratio; break;
        case 1: inst.cfg.dual_update_rule = DualUpdateRule::HingeAscent; break;
        default: inst.cfg.dual_update_rule = DualUpdateRule::DiminishingHinge; break;
    }
    inst.cfg.alpha = rng.next_in(0.2, 1.0);
    inst.cfg.eta0 = rng.next_in(0.5, 2.0);
    return inst;
}

} // namespace camco
