#pragma once

/**
 * Packaged enterprise scenarios: procurement approval (s1), payroll
 * adjustment (s2), and infrastructure deployment (s3). Each definition
 * bundles a roster, its policy bundle, a risk profile, default
 * coordination knobs, and a seeded episode sampler.
 *
 * Numeric choices follow two house rules, documented per parameter in
 * docs/scenarios.md:
 *   - every action carries u0/r0 attributes (base utility, base risk);
 *     state-dependent terms live in the registered functions, so the
 *     projection metric naturally treats "similar value, similar
 *     exposure" actions as near neighbors;
 *   - along an approval chain, downstream certifications carry at least
 *     as much base risk as the approvals they depend on, so risk
 *     pressure retires them first and never strands a dangling
 *     certification.
 */

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "camco/policy.hpp"
#include "camco/risk.hpp"
#include "camco/rng.hpp"
#include "camco/serialization.hpp"

namespace camco {

struct ScenarioDefinition {
    ScenarioId id = ScenarioId::Synthetic;
    std::string name;  // "s1" | "s2" | "s3"
    std::string title; // one-line description for tables and docs
    std::vector<AgentSpec> roster;
    PolicyBundle bundle;
    RiskProfile risk_profile;
    CoordinationConfig defaults;
    std::uint64_t seed = 0; // drives episode sampling only; structure is fixed
};

inline std::vector<ScenarioId> evaluation_scenarios() {
    return {ScenarioId::S1, ScenarioId::S2, ScenarioId::S3};
}

namespace scenario_detail {

inline ActionValue act(std::string label, double u0, double r0,
                       std::map<std::string, AttrValue> extra = {}) {
    extra.emplace("u0", u0);
    extra.emplace("r0", r0);
    return ActionValue::discrete(std::move(label), std::move(extra));
}

inline double attr_num(const ActionValue& a, const char* key) {
    auto v = a.attr(key);
    if (!v) return 0.0;
    return attr_number(*v).value_or(0.0);
}

// Exposure scale factors. Safe defaults carry no r0, so every indicator
// below is exactly zero on them regardless of state.
inline double s1_scale(const EnterpriseState& s) {
    double amount = s.number("amount").value_or(0.0);
    double rating = s.number("counterparty_rating").value_or(1.0);
    return (0.55 + 0.55 * amount / 500000.0) * rating;
}
inline double s2_scale(const EnterpriseState& s) {
    double payout = s.number("total_payout").value_or(0.0);
    return 0.7 + 0.6 * payout / 2000000.0;
}
inline double s3_scale(const EnterpriseState& s) {
    double blast = s.number("blast_radius").value_or(0.0);
    return 0.55 + 0.75 * blast;
}

inline PolicyPredicate predicate(std::string id,
                                 std::variant<ApprovalChainParams, SegregationParams,
                                              TemporalOrderParams, ThresholdGateParams,
                                              CustomParams>
                                     params) {
    PolicyPredicate p;
    p.predicate_id = std::move(id);
    p.params = std::move(params);
    return p;
}

/// State-form segregation: agent identity attribute vs a state variable.
inline PolicyPredicate sod_state(std::string id, std::string agent, std::string label,
                                 std::string state_var) {
    SegregationParams p;
    p.first_agent = std::move(agent);
    p.first_labels = {std::move(label)};
    p.attribute = "principal";
    p.state_var = std::move(state_var);
    return predicate(std::move(id), std::move(p));
}

inline FeasibilityRule grant(std::string rule_id, std::string agent_id,
                             std::vector<std::string> labels, WindowSpec window = {}) {
    FeasibilityRule r;
    r.rule_id = std::move(rule_id);
    r.agent_id = std::move(agent_id);
    r.perm = std::move(labels);
    r.window = std::move(window);
    return r;
}

} // namespace scenario_detail

// ---------------------------------------------------------------------------
// Registered functions. Utilities read u0 plus state-keyed bonuses; risk
// indicators read r0 times the scenario exposure scale.

inline void register_scenario_functions(FunctionRegistry& reg) {
    using scenario_detail::attr_num;
    using scenario_detail::s1_scale;
    using scenario_detail::s2_scale;
    using scenario_detail::s3_scale;

    reg.add_utility("s1:utility", [](const EnterpriseState& s, const ActionValue& a) {
        double u = attr_num(a, "u0");
        if (a.label == "submit") u += 0.8 * s.number("urgency").value_or(0.0);
        return u;
    });
    reg.add_indicator("s1:exposure", [](const EnterpriseState& s, const ActionValue& a) {
        return attr_num(a, "r0") * s1_scale(s);
    });

    reg.add_utility("s2:utility", [](const EnterpriseState& s, const ActionValue& a) {
        double u = attr_num(a, "u0");
        if (a.label == "bulk_edit") u += 2.2 * s.number("change_pct").value_or(0.0);
        if (a.label == "run_retro" && s.flag("retro_needed")) u += 1.8;
        if (a.label == "sign_off_delegate" && s.flag("delegation_active")) u += 3.2;
        return u;
    });
    reg.add_indicator("s2:compliance", [](const EnterpriseState& s, const ActionValue& a) {
        return 0.6 * attr_num(a, "r0") * s2_scale(s);
    });
    reg.add_indicator("s2:audit", [](const EnterpriseState& s, const ActionValue& a) {
        double r = 0.4 * attr_num(a, "r0") * s2_scale(s);
        // Retroactive edits expose every pay period they reach back over.
        if (a.label == "run_retro")
            r += 0.5 * s2_scale(s) * s.number("retro_days").value_or(0.0) / 60.0;
        return r;
    });

    reg.add_utility("s3:utility", [](const EnterpriseState& s, const ActionValue& a) {
        double u = attr_num(a, "u0");
        if (a.label == "hotfix_prod_direct") u += 4.0 * s.number("sev_pressure").value_or(0.0);
        return u;
    });
    reg.add_indicator("s3:disruption", [](const EnterpriseState& s, const ActionValue& a) {
        return 0.7 * attr_num(a, "r0") * s3_scale(s);
    });
    reg.add_indicator("s3:rto", [](const EnterpriseState& s, const ActionValue& a) {
        return 0.3 * attr_num(a, "r0") * s3_scale(s);
    });
}

// ---------------------------------------------------------------------------
// s1: procurement approval. A requester files a purchase, a line manager
// and a compliance officer countersign, the CFO releases funds for large
// amounts. Exposure is financial: amount times counterparty rating.

namespace scenario_detail {

inline ScenarioDefinition build_s1(std::uint64_t seed) {
    ScenarioDefinition def;
    def.id = ScenarioId::S1;
    def.name = "s1";
    def.title = "procurement approval with amount escalation";
    def.seed = seed;

    auto mk = [](std::string id, std::vector<ActionValue> actions) {
        AgentSpec ag;
        ag.agent_id = std::move(id);
        ag.action_space.kind = ActionKind::Discrete;
        ag.action_space.actions = std::move(actions);
        ag.action_space.actions.push_back(ActionValue::discrete("noop"));
        ag.utility_fn = "s1:utility";
        ag.safe_default = ActionValue::discrete("noop");
        return ag;
    };

    def.roster.push_back(mk("requester", {
        act("self_approve", 9.55, 1.2),
        act("submit", 9.0, 0.35),
        act("defer", 8.0, 0.12),
        act("log_only", 4.0, 0.03),
    }));
    def.roster.push_back(mk("manager", {
        act("approve", 8.0, 0.42, {{"principal", std::string("mgr_0")}}),
        act("scrutinize", 7.6, 0.10),
        act("sample_check", 4.0, 0.02),
    }));
    def.roster.push_back(mk("compliance_officer", {
        act("certify", 6.0, 0.48, {{"principal", std::string("comp_0")}}),
        act("review", 5.65, 0.09),
        act("spot_review", 3.0, 0.02),
    }));
    def.roster.push_back(mk("cfo", {
        act("authorize", 7.0, 0.18, {{"principal", std::string("cfo_0")}}),
        act("hold", 6.6, 0.08),
        act("ack", 3.5, 0.02),
    }));

    def.bundle.feasibility = {
        grant("s1-requester-lane", "requester", {"submit", "defer", "log_only"}),
        grant("s1-manager-lane", "manager", {"approve", "scrutinize", "sample_check"}),
        grant("s1-compliance-lane", "compliance_officer", {"certify", "review", "spot_review"}),
        grant("s1-cfo-lane", "cfo", {"hold", "ack"}),
        // Fund release needs an open budget cycle.
        grant("s1-cfo-release", "cfo", {"authorize"}, FlagWindow{"budget_open"}),
    };

    ApprovalChainParams chain;
    chain.chain = {{"manager", {"approve"}}, {"compliance_officer", {"certify"}}};

    ThresholdGateParams escalation;
    escalation.amount_var = "amount";
    escalation.threshold = 250000.0;
    escalation.subject_agent = "requester";
    escalation.subject_labels = {"submit"};
    escalation.escalation_agent = "cfo";
    escalation.escalation_labels = {"authorize"};

    def.bundle.predicates = {
        predicate("s1-approval-chain", std::move(chain)),
        predicate("s1-large-amount-release", std::move(escalation)),
        sod_state("s1-sod-manager", "manager", "approve", "requester_principal"),
        sod_state("s1-sod-compliance", "compliance_officer", "certify", "requester_principal"),
        sod_state("s1-sod-cfo", "cfo", "authorize", "requester_principal"),
        predicate("s1-no-self-approval",
                  CustomParams{expr::neg(expr::label_in("requester", {"self_approve"}))}),
    };

    def.risk_profile.dimensions = {"financial_exposure"};
    def.risk_profile.weights = {{"financial_exposure", 1.0}};
    for (const auto& ag : def.roster)
        def.risk_profile.indicators[ag.agent_id] = {{"financial_exposure", {"s1:exposure", 2.0}}};

    def.defaults.tau = 1.0;
    def.defaults.delta = 0.6;
    def.defaults.alpha = 2.0;
    def.defaults.eta0 = 1.5;
    def.defaults.k_max = 10;
    def.defaults.dual_update_rule = DualUpdateRule::Alg1Ratio;
    return def;
}

// s2: payroll adjustment. An HR analyst validates a change set, payroll
// runs it, an audit reviewer signs off. Exposure splits into compliance
// and audit dimensions; retroactive runs add audit exposure per day
// reached back.

inline ScenarioDefinition build_s2(std::uint64_t seed) {
    ScenarioDefinition def;
    def.id = ScenarioId::S2;
    def.name = "s2";
    def.title = "payroll adjustment with retroactive limits";
    def.seed = seed;

    auto mk = [](std::string id, std::vector<ActionValue> actions) {
        AgentSpec ag;
        ag.agent_id = std::move(id);
        ag.action_space.kind = ActionKind::Discrete;
        ag.action_space.actions = std::move(actions);
        ag.action_space.actions.push_back(ActionValue::discrete("noop"));
        ag.utility_fn = "s2:utility";
        ag.safe_default = ActionValue::discrete("noop");
        return ag;
    };

    std::map<std::string, AttrValue> hr_id = {{"principal", std::string("hr_0")}};
    def.roster.push_back(mk("hr_analyst", {
        act("bulk_edit", 6.4, 1.3, hr_id),
        act("validate", 7.0, 0.38, hr_id),
        act("precheck", 5.4, 0.08, hr_id),
        act("sample_audit", 3.0, 0.02, hr_id),
    }));
    def.roster.push_back(mk("payroll_processor", {
        act("run", 8.0, 0.45),
        act("run_retro", 7.0, 0.5),
        act("partial_run", 6.9, 0.12),
        act("dry_run", 3.5, 0.02),
    }));
    def.roster.push_back(mk("audit_reviewer", {
        act("sign_off", 6.0, 0.35, {{"principal", std::string("aud_0")}}),
        act("sign_off_delegate", 3.0, 0.35, hr_id),
        act("deep_review", 5.95, 0.28),
        act("spot_check", 4.8, 0.08),
        act("defer_review", 2.5, 0.02),
    }));

    def.bundle.feasibility = {
        grant("s2-hr-lane", "hr_analyst", {"validate", "precheck", "sample_audit"}),
        grant("s2-payroll-lane", "payroll_processor", {"run", "partial_run", "dry_run"}),
        // Retroactive runs are frozen while the quarter is closing.
        grant("s2-payroll-retro", "payroll_processor", {"run_retro"}, FlagWindow{"quarter_open"}),
        grant("s2-audit-lane", "audit_reviewer",
              {"sign_off", "sign_off_delegate", "deep_review", "spot_check", "defer_review"}),
    };

    TemporalOrderParams order;
    order.prerequisite_agent = "hr_analyst";
    order.prerequisite_labels = {"validate"};
    order.dependent_agent = "payroll_processor";
    order.dependent_labels = {"run", "run_retro"};

    SegregationParams preparer_signer;
    preparer_signer.first_agent = "hr_analyst";
    preparer_signer.first_labels = {"bulk_edit", "validate", "precheck", "sample_audit"};
    preparer_signer.attribute = "principal";
    preparer_signer.second_agent = "audit_reviewer";
    preparer_signer.second_labels = {"sign_off", "sign_off_delegate"};

    def.bundle.predicates = {
        predicate("s2-retro-limit",
                  CustomParams{expr::implies(
                      expr::label_in("payroll_processor", {"run_retro"}),
                      expr::le(expr::state("retro_days"), expr::num(30.0)))}),
        predicate("s2-exec-sensitivity",
                  CustomParams{expr::implies(
                      expr::all({expr::state("exec_affected"),
                                 expr::gt(expr::state("change_pct"), expr::num(0.1)),
                                 expr::label_in("payroll_processor", {"run", "run_retro"})}),
                      expr::label_in("audit_reviewer", {"deep_review"}))}),
        predicate("s2-validate-before-run", std::move(order)),
        predicate("s2-sod-preparer-signer", std::move(preparer_signer)),
        predicate("s2-no-bulk-edit",
                  CustomParams{expr::neg(expr::label_in("hr_analyst", {"bulk_edit"}))}),
    };

    def.risk_profile.dimensions = {"compliance_violation", "audit_exposure"};
    def.risk_profile.weights = {{"compliance_violation", 1.0}, {"audit_exposure", 1.0}};
    for (const auto& ag : def.roster)
        def.risk_profile.indicators[ag.agent_id] = {
            {"compliance_violation", {"s2:compliance", 2.0}},
            {"audit_exposure", {"s2:audit", 2.0}},
        };

    def.defaults.tau = 1.0;
    def.defaults.delta = 0.7;
    def.defaults.alpha = 2.0;
    def.defaults.eta0 = 1.5;
    def.defaults.k_max = 10;
    def.defaults.dual_update_rule = DualUpdateRule::Alg1Ratio;
    return def;
}

// s3: infrastructure deployment. A developer lands a change, DevOps
// deploys it behind security and change-manager approvals, an SRE keeps
// rollback ready. Exposure splits into disruption and recovery-time
// dimensions scaled by blast radius.

inline ScenarioDefinition build_s3(std::uint64_t seed) {
    ScenarioDefinition def;
    def.id = ScenarioId::S3;
    def.name = "s3";
    def.title = "deployment with sovereignty and change windows";
    def.seed = seed;

    auto mk = [](std::string id, std::vector<ActionValue> actions, ActionValue safe) {
        AgentSpec ag;
        ag.agent_id = std::move(id);
        ag.action_space.kind = ActionKind::Discrete;
        ag.action_space.actions = std::move(actions);
        ag.action_space.actions.push_back(safe);
        ag.utility_fn = "s3:utility";
        ag.safe_default = std::move(safe);
        return ag;
    };
    ActionValue plain_noop = ActionValue::discrete("noop");

    def.roster.push_back(mk("developer", {
        act("hotfix_prod_direct", 6.5, 1.4),
        act("merge", 8.0, 0.3),
        act("stage", 7.5, 0.08),
        act("code_review_only", 4.0, 0.02),
    }, plain_noop));
    // Every DevOps action names its deployment target so data-residency
    // policy can read it; the idle/no-op rows target "none".
    def.roster.push_back(mk("devops", {
        act("deploy_prod", 8.5, 0.5, {{"target", std::string("global")}}),
        act("deploy_eu", 8.2, 0.45, {{"target", std::string("eu-west")}}),
        act("deploy_canary", 8.1, 0.12, {{"target", std::string("canary")}}),
        act("monitor", 4.0, 0.03, {{"target", std::string("none")}}),
    }, ActionValue::discrete("noop", {{"target", std::string("none")}})));
    def.roster.push_back(mk("security_reviewer", {
        act("approve_security", 6.2, 0.3, {{"principal", std::string("sec_0")}}),
        act("request_changes", 5.3, 0.07),
        act("scan_only", 3.0, 0.02),
    }, plain_noop));
    def.roster.push_back(mk("change_manager", {
        act("approve_change", 7.2, 0.35),
        act("schedule_review", 6.7, 0.07),
        act("log_change", 3.0, 0.02),
    }, plain_noop));
    def.roster.push_back(mk("sre", {
        act("standby", 6.1, 0.12),
        act("arm_rollback", 5.9, 0.03),
        act("optimize", 5.8, 0.30),
        act("idle", 2.0, 0.01),
    }, plain_noop));

    def.bundle.feasibility = {
        grant("s3-dev-lane", "developer", {"merge", "stage", "code_review_only"}),
        grant("s3-devops-observe", "devops", {"monitor"}),
        grant("s3-devops-deploys", "devops", {"deploy_prod", "deploy_eu", "deploy_canary"},
              FlagWindow{"in_change_window"}),
        grant("s3-security-lane", "security_reviewer",
              {"approve_security", "request_changes", "scan_only"}),
        grant("s3-cm-lane", "change_manager", {"approve_change", "schedule_review", "log_change"}),
        grant("s3-sre-lane", "sre", {"standby", "arm_rollback", "optimize", "idle"}),
    };

    ApprovalChainParams chain;
    chain.chain = {{"security_reviewer", {"approve_security"}},
                   {"change_manager", {"approve_change"}}};

    TemporalOrderParams deploy_order;
    deploy_order.prerequisite_agent = "change_manager";
    deploy_order.prerequisite_labels = {"approve_change"};
    deploy_order.dependent_agent = "devops";
    deploy_order.dependent_labels = {"deploy_prod", "deploy_eu"};

    TemporalOrderParams rollback_ready;
    rollback_ready.prerequisite_agent = "sre";
    rollback_ready.prerequisite_labels = {"arm_rollback", "standby"};
    rollback_ready.dependent_agent = "devops";
    rollback_ready.dependent_labels = {"deploy_prod"};

    ThresholdGateParams sev_freeze;
    sev_freeze.amount_var = "open_sev";
    sev_freeze.threshold = 2.5;
    sev_freeze.subject_agent = "devops";
    sev_freeze.subject_labels = {"deploy_prod", "deploy_eu"};
    sev_freeze.escalation_agent = "sre";
    sev_freeze.escalation_labels = {"arm_rollback"};

    def.bundle.predicates = {
        predicate("s3-security-before-change", std::move(chain)),
        predicate("s3-change-before-deploy", std::move(deploy_order)),
        predicate("s3-rollback-ready", std::move(rollback_ready)),
        predicate("s3-eu-sovereignty",
                  CustomParams{expr::implies(
                      expr::eq(expr::state("data_region"), expr::text("eu")),
                      expr::in(expr::attr("devops", "target"),
                               {AttrValue(std::string("eu-west")), AttrValue(std::string("canary")),
                                AttrValue(std::string("none"))}))}),
        sod_state("s3-sod-security-author", "security_reviewer", "approve_security",
                  "author_principal"),
        predicate("s3-sev-freeze", std::move(sev_freeze)),
        predicate("s3-no-direct-hotfix",
                  CustomParams{expr::neg(expr::label_in("developer", {"hotfix_prod_direct"}))}),
    };

    def.risk_profile.dimensions = {"service_disruption", "rto_deviation"};
    def.risk_profile.weights = {{"service_disruption", 1.0}, {"rto_deviation", 1.0}};
    for (const auto& ag : def.roster)
        def.risk_profile.indicators[ag.agent_id] = {
            {"service_disruption", {"s3:disruption", 2.0}},
            {"rto_deviation", {"s3:rto", 2.0}},
        };

    def.defaults.tau = 1.0;
    def.defaults.delta = 0.8;
    def.defaults.alpha = 6.0;
    def.defaults.eta0 = 1.5;
    def.defaults.k_max = 10;
    def.defaults.dual_update_rule = DualUpdateRule::Alg1Ratio;
    return def;
}

} // namespace scenario_detail

inline ScenarioDefinition build_scenario(ScenarioId id, std::uint64_t seed) {
    switch (id) {
        case ScenarioId::S1: return scenario_detail::build_s1(seed);
        case ScenarioId::S2: return scenario_detail::build_s2(seed);
        case ScenarioId::S3: return scenario_detail::build_s3(seed);
        case ScenarioId::Synthetic: break;
    }
    throw UnknownScenario("no packaged definition for 'synthetic'");
}

// ---------------------------------------------------------------------------
// Episode sampling. One keyed stream per (run seed, episode, scenario);
// draws happen in a fixed order so states are stable across platforms.

inline EnterpriseState sample_episode_state(const ScenarioDefinition& def,
                                            std::uint64_t episode_index) {
    Rng rng = episode_rng(def.seed, episode_index, def.name + ":state");
    EnterpriseState s;
    s.scenario_id = def.id;
    s.step_index = 0;
    s.rng_seed = rng.derive("episode-id").next_u64();

    auto log_uniform = [&rng](double lo, double hi) {
        return lo * std::exp(rng.next_unit() * std::log(hi / lo));
    };

    switch (def.id) {
        case ScenarioId::S1: {
            s.variables["amount"] = log_uniform(5000.0, 500000.0);
            s.variables["urgency"] = rng.next_unit();
            s.variables["counterparty_rating"] = rng.next_in(0.85, 1.2);
            s.variables["budget_open"] = rng.next_bool(0.85);
            double who = rng.next_unit();
            std::string principal;
            if (who < 0.02) principal = "mgr_0";
            else if (who < 0.035) principal = "cfo_0";
            else if (who < 0.045) principal = "comp_0";
            else principal = "emp_" + std::to_string(rng.next_int(0, 9));
            s.variables["requester_principal"] = principal;
            break;
        }
        case ScenarioId::S2: {
            s.variables["total_payout"] = log_uniform(50000.0, 2000000.0);
            s.variables["change_pct"] = rng.next_in(0.01, 0.5);
            s.variables["exec_affected"] = rng.next_bool(0.25);
            s.variables["retro_needed"] = rng.next_bool(0.30);
            s.variables["retro_days"] = static_cast<double>(rng.next_int(0, 60));
            s.variables["quarter_open"] = rng.next_bool(0.80);
            s.variables["delegation_active"] = rng.next_bool(0.02);
            break;
        }
        case ScenarioId::S3: {
            s.variables["data_region"] = std::string(rng.next_bool(0.30) ? "eu" : "us");
            s.variables["in_change_window"] = rng.next_bool(0.85);
            double sev_roll = rng.next_unit();
            double sev = sev_roll < 0.60 ? 0 : sev_roll < 0.85 ? 1 : sev_roll < 0.95 ? 2
                         : sev_roll < 0.99 ? 3 : 4;
            s.variables["open_sev"] = sev;
            s.variables["sev_pressure"] = rng.next_unit();
            s.variables["blast_radius"] = rng.next_unit();
            std::string author = rng.next_bool(0.02)
                                     ? std::string("sec_0")
                                     : "dev_" + std::to_string(rng.next_int(0, 9));
            s.variables["author_principal"] = author;
            break;
        }
        case ScenarioId::Synthetic:
            throw UnknownScenario("synthetic states come from the instance generator");
    }
    return s;
}

// ---------------------------------------------------------------------------
// Scenario file format.

inline json to_json(const ScenarioDefinition& def) {
    json roster = json::array();
    for (const auto& ag : def.roster) roster.push_back(to_json(ag));
    return json{{"schema", kScenarioSchema},
                {"id", to_string(def.id)},
                {"name", def.name},
                {"title", def.title},
                {"seed", def.seed},
                {"roster", roster},
                {"bundle", to_json(def.bundle)},
                {"risk_profile", to_json(def.risk_profile)},
                {"defaults", to_json(def.defaults)}};
}

inline ScenarioDefinition scenario_from_json(const json& j) {
    if (!j.contains("schema") || j.at("schema").get<std::string>() != kScenarioSchema)
        throw SchemaMismatch("expected " + std::string(kScenarioSchema));
    ScenarioDefinition def;
    def.id = scenario_from_string(j.at("id").get<std::string>());
    def.name = j.at("name").get<std::string>();
    def.title = j.at("title").get<std::string>();
    def.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& a : j.at("roster")) def.roster.push_back(agent_from_json(a));
    def.bundle = bundle_from_json(j.at("bundle"));
    def.risk_profile = risk_profile_from_json(j.at("risk_profile"));
    def.defaults = config_from_json(j.at("defaults"));
    return def;
}

} // namespace camco
