#include <gtest/gtest.h>

#include "camco/negotiation.hpp"
#include "camco/synthetic.hpp"

namespace camco {
namespace {

// Single agent, three actions, attr-backed utility and risk. The grant rule
// covers every label so projection is a no-op and the episode exercises the
// multiplier schedule alone.
struct SoloFixture {
    std::vector<AgentSpec> roster;
    EnterpriseState state;
    PolicyBundle bundle;
    RiskProfile profile;
    FunctionRegistry reg;
    CoordinationConfig cfg;

    SoloFixture() {
        AgentSpec ag;
        ag.agent_id = "solo";
        ag.utility_fn = "attr:u";
        ag.action_space.actions = {
            ActionValue::discrete("big", {{"u", 10.0}, {"r", 1.0}}),
            ActionValue::discrete("small", {{"u", 9.0}, {"r", 0.2}}),
            ActionValue::discrete("noop", {{"u", 0.0}, {"r", 0.0}}),
        };
        ag.safe_default = ag.action_space.actions[2];
        roster.push_back(ag);

        FeasibilityRule rule;
        rule.rule_id = "grant_all";
        rule.agent_id = "solo";
        rule.perm = {"big", "small", "noop"};
        bundle.feasibility.push_back(rule);

        profile.dimensions = {"op"};
        profile.weights["op"] = 1.0;
        profile.indicators["solo"]["op"] = {"attr:r", 1.0};

        FunctionRegistry::add_builtins(reg);

        cfg.tau = 0.5;
        cfg.lambda0 = 0.0;
        cfg.delta = 0.25;
        cfg.dual_update_rule = DualUpdateRule::Alg1Ratio;
    }
};

TEST(Negotiate, HandTracedRatioSchedule) {
    // lambda 0, 0.5, 1.0: shaped big beats small (10-lambda vs 9-0.2*lambda).
    // Each rejected round overshoots by ratio 1.0/0.5 = 2, so the bump is
    // 0.25*2 = 0.5. At lambda 1.5 the small action finally wins
    // (8.5 < 8.7) and its risk 0.2 fits the 0.5 budget.
    SoloFixture f;
    auto out = negotiate(f.reg, f.roster, f.state, f.bundle, f.profile, f.cfg);
    ASSERT_EQ(out.status, NegotiationStatus::Accepted);
    EXPECT_EQ(out.iterations_used, 4);
    ASSERT_EQ(out.lambda_trajectory.size(), 4u);
    EXPECT_DOUBLE_EQ(out.lambda_trajectory[0], 0.0);
    EXPECT_DOUBLE_EQ(out.lambda_trajectory[1], 0.5);
    EXPECT_DOUBLE_EQ(out.lambda_trajectory[2], 1.0);
    EXPECT_DOUBLE_EQ(out.lambda_trajectory[3], 1.5);
    ASSERT_TRUE(out.joint.has_value());
    EXPECT_EQ(out.joint->find("solo")->label, "small");
    EXPECT_DOUBLE_EQ(out.final_risk.total, 0.2);
    EXPECT_TRUE(out.final_risk.within_bound);

    // 3 agent events + 2 joint events + 1 tail event per round, 4 rounds.
    ASSERT_EQ(out.audit.size(), 24u);
    EXPECT_EQ(out.audit.back().kind, AuditEventKind::Accept);
    int lambda_updates = 0;
    for (const auto& ev : out.audit)
        if (ev.kind == AuditEventKind::LambdaUpdate) ++lambda_updates;
    EXPECT_EQ(lambda_updates, 3);
}

TEST(Negotiate, AcceptRecordsLastCompliant) {
    SoloFixture f;
    EpisodeContext ctx;
    ctx.episode_id = "ep-7";
    auto out = negotiate(f.reg, f.roster, f.state, f.bundle, f.profile, f.cfg, &ctx);
    ASSERT_EQ(out.status, NegotiationStatus::Accepted);
    ASSERT_TRUE(ctx.last_compliant.has_value());
    EXPECT_EQ(ctx.last_compliant->find("solo")->label, "small");
    for (const auto& ev : out.audit) EXPECT_EQ(ev.episode_id, "ep-7");
}

TEST(Negotiate, ImpossibleJointPredicateFailsAtKMax) {
    SoloFixture f;
    PolicyPredicate never;
    never.predicate_id = "never";
    never.params = CustomParams{expr::flag(false)};
    f.bundle.predicates.push_back(never);
    f.cfg.k_max = 3;

    auto out = negotiate(f.reg, f.roster, f.state, f.bundle, f.profile, f.cfg);
    EXPECT_EQ(out.status, NegotiationStatus::Failed);
    EXPECT_FALSE(out.joint.has_value());
    EXPECT_EQ(out.iterations_used, 3);
    EXPECT_EQ(out.lambda_trajectory.size(), 3u);
    ASSERT_GE(out.audit.size(), 2u);
    EXPECT_EQ(out.audit[out.audit.size() - 2].kind, AuditEventKind::Fail);
    EXPECT_EQ(out.audit.back().kind, AuditEventKind::Fallback);
    EXPECT_EQ(out.audit.back().payload.at("source"), "safe_defaults");
    // The reverted tuple is recorded with its own gate verdict, here 0: the
    // predicate rejects every joint, safe defaults included.
    EXPECT_EQ(out.audit.back().payload.at("phi"), 0);
}

TEST(Negotiate, EmptyConstraintSliceRejectsToSafeDefault) {
    // A unary predicate admitting no label empties C_i entirely, so every
    // proposal is rejected to the safe default, and the same predicate then
    // fails the joint gate: the episode cannot accept.
    SoloFixture f;
    PolicyPredicate none;
    none.predicate_id = "no_label_allowed";
    none.params = CustomParams{expr::label_in("solo", {})};
    f.bundle.predicates.push_back(none);
    f.cfg.k_max = 2;

    auto out = negotiate(f.reg, f.roster, f.state, f.bundle, f.profile, f.cfg);
    EXPECT_EQ(out.status, NegotiationStatus::Failed);
    int rejects = 0;
    for (const auto& ev : out.audit) {
        if (ev.kind == AuditEventKind::RejectToSafeDefault) {
            ++rejects;
            EXPECT_EQ(ev.payload.at("action").at("label"), "noop");
        }
        if (ev.kind == AuditEventKind::RiskEval && !ev.agent_id.empty())
            EXPECT_DOUBLE_EQ(ev.payload.at("risk").get<double>(), 0.0);
    }
    EXPECT_EQ(rejects, 2);
}

TEST(Negotiate, FallbackPrefersLastCompliantAcrossEpisodes) {
    SoloFixture f;
    EpisodeContext ctx;
    ctx.episode_id = "ep-a";
    auto first = negotiate(f.reg, f.roster, f.state, f.bundle, f.profile, f.cfg, &ctx);
    ASSERT_EQ(first.status, NegotiationStatus::Accepted);

    PolicyBundle poisoned = f.bundle;
    PolicyPredicate never;
    never.predicate_id = "never";
    never.params = CustomParams{expr::flag(false)};
    poisoned.predicates.push_back(never);
    f.cfg.k_max = 2;
    ctx.episode_id = "ep-b";
    auto second = negotiate(f.reg, f.roster, f.state, poisoned, f.profile, f.cfg, &ctx);
    EXPECT_EQ(second.status, NegotiationStatus::Failed);
    const auto& fb = second.audit.back();
    ASSERT_EQ(fb.kind, AuditEventKind::Fallback);
    EXPECT_EQ(fb.payload.at("source"), "last_compliant");
    JointAction recorded = joint_from_json(fb.payload.at("joint"));
    EXPECT_EQ(recorded.find("solo")->label, "small");
    // Failure does not clear the remembered compliant tuple.
    ASSERT_TRUE(ctx.last_compliant.has_value());
    EXPECT_EQ(ctx.last_compliant->find("solo")->label, "small");
}

TEST(Fallback, VerifyPassesOnCleanRoster) {
    SoloFixture f;
    EXPECT_NO_THROW(verify_fallback(f.reg, f.roster, f.state, f.bundle, f.profile, f.cfg.tau));
}

TEST(Fallback, VerifyThrowsWhenGateRejectsSafeDefaults) {
    SoloFixture f;
    PolicyPredicate never;
    never.predicate_id = "never";
    never.params = CustomParams{expr::flag(false)};
    f.bundle.predicates.push_back(never);
    EXPECT_THROW(verify_fallback(f.reg, f.roster, f.state, f.bundle, f.profile, f.cfg.tau),
                 FallbackInfeasible);
}

TEST(Fallback, VerifyThrowsWhenSafeDefaultCarriesRisk) {
    SoloFixture f;
    f.roster[0].safe_default = f.roster[0].action_space.actions[0]; // r = 1.0
    EXPECT_THROW(verify_fallback(f.reg, f.roster, f.state, f.bundle, f.profile, 0.5),
                 FallbackInfeasible);
}

TEST(Fallback, ApplyEmitsEventAndPrefersContext) {
    SoloFixture f;
    EpisodeContext ctx;
    ctx.episode_id = "ep-z";
    JointAction remembered;
    remembered.entries.emplace_back("solo", f.roster[0].action_space.actions[1]); // small
    ctx.last_compliant = remembered;

    std::vector<AuditEvent> audit;
    std::uint64_t clock = 41;
    JointAction fb = apply_fallback(f.reg, f.roster, f.state, f.bundle, f.profile, f.cfg.tau,
                                    &ctx, &audit, &clock);
    EXPECT_EQ(fb.find("solo")->label, "small");
    ASSERT_EQ(audit.size(), 1u);
    EXPECT_EQ(audit[0].kind, AuditEventKind::Fallback);
    EXPECT_EQ(audit[0].payload.at("source"), "last_compliant");
    EXPECT_EQ(audit[0].timestamp, 41u);
    EXPECT_EQ(clock, 42u);

    EpisodeContext empty_ctx;
    JointAction fb2 = apply_fallback(f.reg, f.roster, f.state, f.bundle, f.profile, f.cfg.tau,
                                     &empty_ctx, nullptr, nullptr);
    EXPECT_EQ(fb2.find("solo")->label, "noop");
}

json audit_to_json(const std::vector<AuditEvent>& events) {
    json arr = json::array();
    for (const auto& ev : events)
        arr.push_back(json{{"episode_id", ev.episode_id},
                           {"iteration", ev.iteration},
                           {"agent_id", ev.agent_id},
                           {"kind", to_string(ev.kind)},
                           {"payload", ev.payload},
                           {"timestamp", ev.timestamp}});
    return arr;
}

TEST(Negotiate, PropertiesOverSyntheticInstances) {
    int accepted = 0, failed = 0;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        auto inst = make_synthetic_instance(seed);
        FunctionRegistry reg;
        FunctionRegistry::add_builtins(reg);
        auto out = negotiate(reg, inst.roster, inst.state, inst.bundle, inst.profile, inst.cfg);

        ASSERT_GE(out.iterations_used, 1) << "seed " << seed;
        ASSERT_LE(out.iterations_used, inst.cfg.k_max) << "seed " << seed;
        ASSERT_EQ(out.lambda_trajectory.size(),
                  static_cast<std::size_t>(out.iterations_used))
            << "seed " << seed;
        ASSERT_DOUBLE_EQ(out.lambda_trajectory[0], inst.cfg.lambda0) << "seed " << seed;
        for (std::size_t i = 1; i < out.lambda_trajectory.size(); ++i)
            ASSERT_GE(out.lambda_trajectory[i], out.lambda_trajectory[i - 1]) << "seed " << seed;

        std::uint64_t prev_ts = 0;
        for (std::size_t i = 0; i < out.audit.size(); ++i) {
            if (i > 0) ASSERT_GT(out.audit[i].timestamp, prev_ts) << "seed " << seed;
            prev_ts = out.audit[i].timestamp;
        }

        if (out.status == NegotiationStatus::Accepted) {
            ++accepted;
            ASSERT_TRUE(out.joint.has_value()) << "seed " << seed;
            auto phi = eval_phi(inst.bundle, inst.state, *out.joint);
            ASSERT_EQ(phi.value, 1) << "seed " << seed;
            auto risk = joint_risk(inst.profile, reg, inst.roster, inst.state, *out.joint,
                                   inst.cfg.tau);
            ASSERT_TRUE(risk.within_bound) << "seed " << seed;
            for (const auto& ag : inst.roster) {
                auto cs = agent_constraints(inst.bundle, inst.state, ag);
                ASSERT_TRUE(cs.admits(inst.state, ag.agent_id, *out.joint->find(ag.agent_id)))
                    << "seed " << seed << " agent " << ag.agent_id;
            }
            ASSERT_EQ(out.audit.back().kind, AuditEventKind::Accept) << "seed " << seed;
        } else {
            ++failed;
            ASSERT_FALSE(out.joint.has_value()) << "seed " << seed;
            ASSERT_EQ(out.iterations_used, inst.cfg.k_max) << "seed " << seed;
            ASSERT_EQ(out.audit.back().kind, AuditEventKind::Fallback) << "seed " << seed;
        }

        auto rerun = negotiate(reg, inst.roster, inst.state, inst.bundle, inst.profile, inst.cfg);
        ASSERT_EQ(audit_to_json(out.audit).dump(), audit_to_json(rerun.audit).dump())
            << "seed " << seed;
    }
    // The generator must exercise both endpoints or the loop assertions
    // above are vacuous on one side.
    EXPECT_GT(accepted, 20);
    EXPECT_GT(failed, 5);
}

} // namespace
} // namespace camco
