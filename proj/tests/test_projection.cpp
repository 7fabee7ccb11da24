#include <gtest/gtest.h>

#include "camco/projection.hpp"
#include "camco/synthetic.hpp"

namespace camco {
namespace {

ActionValue act(const std::string& label, std::map<std::string, AttrValue> attrs = {}) {
    return ActionValue::discrete(label, std::move(attrs));
}

// --- edit distance -----------------------------------------------------------

TEST(EditDistance, HandComputedCases) {
    EditDistanceSpec spec;
    spec.numeric_ranges["level"] = {0.0, 4.0};

    EXPECT_DOUBLE_EQ(edit_distance(act("a", {{"level", 2.0}}), act("a", {{"level", 2.0}}), spec), 0.0);
    // Label swap alone.
    EXPECT_DOUBLE_EQ(edit_distance(act("a"), act("b"), spec), 1.0);
    // Numeric attr scaled by declared range: |1-3|/4 = 0.5.
    EXPECT_DOUBLE_EQ(edit_distance(act("a", {{"level", 1.0}}), act("a", {{"level", 3.0}}), spec), 0.5);
    // Label + numeric together.
    EXPECT_DOUBLE_EQ(edit_distance(act("a", {{"level", 1.0}}), act("b", {{"level", 3.0}}), spec), 1.5);
    // Categorical mismatch costs 1, match costs 0.
    EXPECT_DOUBLE_EQ(edit_distance(act("a", {{"cat", std::string("x")}}),
                                   act("a", {{"cat", std::string("y")}}), spec), 1.0);
    EXPECT_DOUBLE_EQ(edit_distance(act("a", {{"cat", std::string("x")}}),
                                   act("a", {{"cat", std::string("x")}}), spec), 0.0);
    // Attribute present on one side only costs 1.
    EXPECT_DOUBLE_EQ(edit_distance(act("a", {{"level", 1.0}}), act("a"), spec), 1.0);
    // Numeric attr with no declared range: exact match or full cost.
    EXPECT_DOUBLE_EQ(edit_distance(act("a", {{"other", 3.0}}), act("a", {{"other", 3.0}}), spec), 0.0);
    EXPECT_DOUBLE_EQ(edit_distance(act("a", {{"other", 3.0}}), act("a", {{"other", 3.1}}), spec), 1.0);
}

TEST(EditDistance, SpecDerivedRangesFromMenu) {
    std::vector<ActionValue> menu = {act("a", {{"level", 0.0}}), act("b", {{"level", 10.0}}),
                                     act("c", {{"level", 4.0}})};
    auto spec = EditDistanceSpec::from_actions(menu);
    ASSERT_TRUE(spec.numeric_ranges.count("level"));
    EXPECT_DOUBLE_EQ(spec.numeric_ranges["level"].first, 0.0);
    EXPECT_DOUBLE_EQ(spec.numeric_ranges["level"].second, 10.0);
    EXPECT_DOUBLE_EQ(edit_distance(act("a", {{"level", 0.0}}), act("a", {{"level", 5.0}}), spec), 0.5);
}

TEST(EditDistance, MetricPropertiesOnRandomMenus) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto inst = make_synthetic_instance(seed);
        for (const auto& ag : inst.roster) {
            const auto& menu = ag.action_space.actions;
            auto spec = EditDistanceSpec::from_actions(menu);
            for (const auto& a : menu) {
                EXPECT_DOUBLE_EQ(edit_distance(a, a, spec), 0.0);
                for (const auto& b : menu) {
                    double dab = edit_distance(a, b, spec);
                    EXPECT_DOUBLE_EQ(dab, edit_distance(b, a, spec));
                    EXPECT_GE(dab, 0.0);
                    for (const auto& c : menu) {
                        double dac = edit_distance(a, c, spec);
                        double dcb = edit_distance(c, b, spec);
                        EXPECT_LE(dab, dac + dcb + 1e-12);
                    }
                }
            }
        }
    }
}

// --- discrete projection --------------------------------------------------------

TEST(ProjectDiscrete, MemberPassesUnchanged) {
    std::vector<ActionValue> candidates = {act("a"), act("b", {{"level", 1.0}})};
    auto spec = EditDistanceSpec::from_actions(candidates);
    auto r = project_discrete(act("b", {{"level", 1.0}}), candidates, spec);
    EXPECT_EQ(r.outcome, ProjectionOutcome::Unchanged);
    EXPECT_EQ(*r.action, act("b", {{"level", 1.0}}));
    EXPECT_DOUBLE_EQ(r.distance, 0.0);
    EXPECT_EQ(r.candidates_examined, 2u);
}

TEST(ProjectDiscrete, EmptyCandidateListRejects) {
    auto r = project_discrete(act("a"), {}, EditDistanceSpec{});
    EXPECT_EQ(r.outcome, ProjectionOutcome::Reject);
    EXPECT_FALSE(r.action.has_value());
}

TEST(ProjectDiscrete, TieBreaksOnCanonicalKey) {
    // Both candidates are one label swap away; the smaller key must win
    // regardless of list order.
    std::vector<ActionValue> fwd = {act("bb"), act("aa")};
    std::vector<ActionValue> rev = {act("aa"), act("bb")};
    EditDistanceSpec spec;
    auto r1 = project_discrete(act("zz"), fwd, spec);
    auto r2 = project_discrete(act("zz"), rev, spec);
    ASSERT_EQ(r1.outcome, ProjectionOutcome::Projected);
    EXPECT_EQ(r1.action->label, "aa");
    EXPECT_EQ(r2.action->label, "aa");
}

TEST(ProjectDiscrete, MatchesBruteForceOracleOnRandomInstances) {
    // Oracle: independently scan all candidates for the minimum distance,
    // breaking ties by canonical key, and compare the full result.
    for (std::uint64_t seed = 100; seed < 300; ++seed) {
        auto inst = make_synthetic_instance(seed);
        const auto& ag = inst.roster[seed % inst.roster.size()];
        auto cs = agent_constraints(inst.bundle, inst.state, ag);
        std::vector<ActionValue> candidates;
        for (const auto& a : cs.feasible.actions)
            if (cs.admits(inst.state, ag.agent_id, a)) candidates.push_back(a);
        auto spec = EditDistanceSpec::from_actions(ag.action_space.actions);
        const auto& proposal =
            ag.action_space.actions[seed % ag.action_space.actions.size()];
        auto got = project_discrete(proposal, candidates, spec);

        if (candidates.empty()) {
            EXPECT_EQ(got.outcome, ProjectionOutcome::Reject);
            continue;
        }
        const ActionValue* best = nullptr;
        double best_d = 0;
        for (const auto& c : candidates) {
            double d = edit_distance(proposal, c, spec);
            if (!best || d < best_d ||
                (d == best_d && c.canonical_key() < best->canonical_key())) {
                best = &c;
                best_d = d;
            }
        }
        ASSERT_TRUE(got.action.has_value());
        EXPECT_EQ(*got.action, *best);
        if (*best == proposal) {
            EXPECT_EQ(got.outcome, ProjectionOutcome::Unchanged);
        } else {
            EXPECT_EQ(got.outcome, ProjectionOutcome::Projected);
            EXPECT_DOUBLE_EQ(got.distance, best_d);
        }
    }
}

TEST(ProjectDiscrete, Idempotent) {
    for (std::uint64_t seed = 300; seed < 360; ++seed) {
        auto inst = make_synthetic_instance(seed);
        const auto& ag = inst.roster[0];
        auto cs = agent_constraints(inst.bundle, inst.state, ag);
        std::vector<ActionValue> candidates;
        for (const auto& a : cs.feasible.actions)
            if (cs.admits(inst.state, ag.agent_id, a)) candidates.push_back(a);
        auto spec = EditDistanceSpec::from_actions(ag.action_space.actions);
        auto first = project_discrete(ag.action_space.actions.back(), candidates, spec);
        if (first.outcome == ProjectionOutcome::Reject) continue;
        auto second = project_discrete(*first.action, candidates, spec);
        EXPECT_EQ(second.outcome, ProjectionOutcome::Unchanged);
        EXPECT_EQ(*second.action, *first.action);
    }
}

// --- continuous projection --------------------------------------------------------

TEST(ProjectContinuous, InsidePointUnchangedBitwise) {
    BoxBounds box{{0.0, -1.0}, {2.0, 1.0}};
    std::vector<double> x = {0.3, 0.9999999};
    auto r = project_continuous(x, box, {});
    EXPECT_EQ(r.outcome, ProjectionOutcome::Unchanged);
    EXPECT_EQ(r.action->vec, x);
    EXPECT_DOUBLE_EQ(r.distance, 0.0);
}

TEST(ProjectContinuous, BoxClampIsExact) {
    BoxBounds box{{0.0, 0.0}, {1.0, 2.0}};
    auto r = project_continuous({-3.0, 5.0}, box, {});
    ASSERT_EQ(r.outcome, ProjectionOutcome::Projected);
    EXPECT_EQ(r.action->vec, (std::vector<double>{0.0, 2.0}));
    EXPECT_DOUBLE_EQ(r.distance, std::sqrt(9.0 + 9.0));
}

TEST(ProjectContinuous, SingleHalfspaceMatchesClosedForm) {
    // Project (1,1) onto x+y <= 1 within [0,2]^2: closed form gives (.5,.5).
    BoxBounds box{{0.0, 0.0}, {2.0, 2.0}};
    std::vector<Halfspace> cuts = {{{1.0, 1.0}, 1.0}};
    auto r = project_continuous({1.0, 1.0}, box, cuts);
    ASSERT_EQ(r.outcome, ProjectionOutcome::Projected);
    EXPECT_NEAR(r.action->vec[0], 0.5, 1e-8);
    EXPECT_NEAR(r.action->vec[1], 0.5, 1e-8);
    EXPECT_NEAR(r.distance, std::sqrt(0.5), 1e-8);
}

TEST(ProjectContinuous, EmptyRegionCertifiedAndRejected) {
    BoxBounds box{{0.0, 0.0}, {1.0, 1.0}};
    // x + y <= -1 cannot meet the box.
    auto r1 = project_continuous({0.5, 0.5}, box, {{{1.0, 1.0}, -1.0}});
    EXPECT_EQ(r1.outcome, ProjectionOutcome::Reject);
    // Contradictory pair: x <= 0.2 and x >= 0.8.
    auto r2 = project_continuous({0.5, 0.5}, box, {{{1.0, 0.0}, 0.2}, {{-1.0, 0.0}, -0.8}});
    EXPECT_EQ(r2.outcome, ProjectionOutcome::Reject);
    // The near-identical satisfiable pair is accepted.
    auto r3 = project_continuous({0.5, 0.5}, box, {{{1.0, 0.0}, 0.8}, {{-1.0, 0.0}, -0.2}});
    EXPECT_NE(r3.outcome, ProjectionOutcome::Reject);
}

TEST(ProjectContinuous, DegenerateRegionSinglePoint) {
    // Cuts pin x to exactly 0.4: x <= 0.4 and -x <= -0.4.
    BoxBounds box{{0.0}, {1.0}};
    auto r = project_continuous({0.9}, box, {{{1.0}, 0.4}, {{-1.0}, -0.4}});
    ASSERT_EQ(r.outcome, ProjectionOutcome::Projected);
    EXPECT_NEAR(r.action->vec[0], 0.4, 1e-7);
}

TEST(ProjectContinuous, ErrorsOnBadInput) {
    BoxBounds box{{0.0, 0.0}, {1.0, 1.0}};
    EXPECT_THROW(project_continuous({0.5}, box, {}), DimensionMismatch);
    EXPECT_THROW(project_continuous({0.5, std::nan("")}, box, {}), ConfigInvalid);
    EXPECT_THROW(project_continuous({0.5, 0.5}, box, {{{1.0}, 0.5}}), DimensionMismatch);
    BoxBounds big{std::vector<double>(9, 0.0), std::vector<double>(9, 1.0)};
    EXPECT_THROW(project_continuous(std::vector<double>(9, 2.0), big, {{std::vector<double>(9, 1.0), 1.0}}),
                 ConfigInvalid);
}

TEST(ProjectContinuous, NearestPointAgreesWithDenseGridOracle) {
    // Oracle: scan a 201x201 grid over the box, keep feasible points,
    // take the minimum distance. The true projection cannot beat the
    // grid by more than one cell diagonal.
    struct Case {
        BoxBounds box;
        std::vector<Halfspace> cuts;
        std::vector<double> x;
    };
    std::vector<Case> cases = {
        {{{0.0, 0.0}, {2.0, 2.0}}, {{{1.0, 1.0}, 1.0}}, {1.8, 1.6}},
        {{{0.0, 0.0}, {1.0, 1.0}}, {{{1.0, -1.0}, 0.2}, {{-1.0, 1.0}, 0.2}}, {0.9, 0.1}},
        {{{-1.0, -1.0}, {1.0, 1.0}},
         {{{1.0, 2.0}, 0.5}, {{-2.0, 1.0}, 0.4}, {{0.0, -1.0}, 0.7}},
         {0.95, 0.9}},
        {{{0.0, 0.0}, {4.0, 1.0}}, {{{1.0, 4.0}, 2.0}}, {3.9, 0.9}},
    };
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        const auto& c = cases[ci];
        auto r = project_continuous(c.x, c.box, c.cuts);
        ASSERT_EQ(r.outcome, ProjectionOutcome::Projected) << ci;
        // Result must itself be feasible to tolerance.
        EXPECT_TRUE(detail::region_member(r.action->vec, c.box, c.cuts, 1e-7)) << ci;

        const int n = 201;
        double best = 1e300;
        double cell = 0.0;
        for (std::size_t d = 0; d < 2; ++d)
            cell = std::max(cell, (c.box.hi[d] - c.box.lo[d]) / (n - 1));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                std::vector<double> p = {
                    c.box.lo[0] + (c.box.hi[0] - c.box.lo[0]) * i / (n - 1),
                    c.box.lo[1] + (c.box.hi[1] - c.box.lo[1]) * j / (n - 1)};
                bool ok = true;
                for (const auto& h : c.cuts) ok = ok && h.violation(p) <= 1e-12;
                if (ok) best = std::min(best, detail::euclid(c.x, p));
            }
        }
        ASSERT_LT(best, 1e300) << ci;
        double diag = cell * std::sqrt(2.0);
        EXPECT_LE(r.distance, best + 1e-9) << ci;      // never worse than the grid
        EXPECT_GE(r.distance, best - diag) << ci;       // and the grid only wins by a cell
    }
}

TEST(ProjectContinuous, IdempotentWithinTolerance) {
    BoxBounds box{{0.0, 0.0}, {2.0, 2.0}};
    std::vector<Halfspace> cuts = {{{1.0, 1.0}, 1.0}, {{1.0, -2.0}, 0.5}};
    auto r1 = project_continuous({1.9, 1.7}, box, cuts);
    ASSERT_EQ(r1.outcome, ProjectionOutcome::Projected);
    auto r2 = project_continuous(r1.action->vec, box, cuts);
    // Either already a member, or it moves less than the tolerance scale.
    if (r2.outcome != ProjectionOutcome::Unchanged) {
        EXPECT_LE(r2.distance, 1e-7);
    }
}

// --- full per-agent projection ------------------------------------------------------

TEST(Project, UnarySliceCanEmptyTheConstraintSet) {
    AgentSpec ag;
    ag.agent_id = "w";
    ag.utility_fn = "zero";
    ag.action_space.actions = {act("idle"), act("work")};
    ag.safe_default = act("idle");

    PolicyBundle b;
    FeasibilityRule r;
    r.rule_id = "w.base";
    r.agent_id = "w";
    r.perm = {"idle", "work"};
    b.feasibility = {r};
    PolicyPredicate impossible;
    impossible.predicate_id = "nothing_allowed";
    CustomParams q;
    q.expression = expr::label_in("w", {}); // false for every action of w
    impossible.params = std::move(q);
    b.predicates = {impossible};

    EnterpriseState s;
    auto res = project(b, s, ag, act("work"));
    EXPECT_EQ(res.outcome, ProjectionOutcome::Reject);
}

TEST(Project, DiscreteDispatchProjectsToNearestPermitted) {
    AgentSpec ag;
    ag.agent_id = "w";
    ag.utility_fn = "zero";
    ag.action_space.actions = {act("idle", {{"level", 0.0}}), act("work", {{"level", 1.0}}),
                               act("push", {{"level", 2.0}})};
    ag.safe_default = act("idle", {{"level", 0.0}});
    PolicyBundle b;
    FeasibilityRule r;
    r.rule_id = "w.base";
    r.agent_id = "w";
    r.perm = {"idle", "work"};
    b.feasibility = {r};
    EnterpriseState s;
    auto res = project(b, s, ag, act("push", {{"level", 2.0}}));
    ASSERT_EQ(res.outcome, ProjectionOutcome::Projected);
    EXPECT_EQ(res.action->label, "work"); // nearer than idle on the level axis
}

TEST(Project, KindMismatchThrows) {
    AgentSpec ag;
    ag.agent_id = "w";
    ag.utility_fn = "zero";
    ag.action_space.actions = {act("idle")};
    ag.safe_default = act("idle");
    PolicyBundle b;
    FeasibilityRule r;
    r.rule_id = "w.base";
    r.agent_id = "w";
    b.feasibility = {r};
    EnterpriseState s;
    EXPECT_THROW(project(b, s, ag, ActionValue::continuous({0.0})), DimensionMismatch);
}

TEST(Project, ContinuousDisabledRegionFallsToSafeDefault) {
    AgentSpec ag;
    ag.agent_id = "c";
    ag.utility_fn = "zero";
    ag.action_space.kind = ActionKind::Continuous;
    ag.action_space.box = {{0.0, 0.0}, {1.0, 1.0}};
    ag.safe_default = ActionValue::continuous({0.25, 0.25});
    PolicyBundle b;
    FeasibilityRule r;
    r.rule_id = "c.base";
    r.agent_id = "c";
    r.avail = expr::flag(false); // never active
    b.feasibility = {r};
    EnterpriseState s;
    auto res = project(b, s, ag, ActionValue::continuous({0.9, 0.9}));
    ASSERT_EQ(res.outcome, ProjectionOutcome::Projected);
    EXPECT_EQ(res.action->vec, (std::vector<double>{0.25, 0.25}));
    EXPECT_NEAR(res.distance, detail::euclid({0.9, 0.9}, {0.25, 0.25}), 1e-12);

    auto same = project(b, s, ag, ActionValue::continuous({0.25, 0.25}));
    EXPECT_EQ(same.outcome, ProjectionOutcome::Unchanged);
}

} // namespace
} // namespace camco
