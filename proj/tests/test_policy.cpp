#include <gtest/gtest.h>

#include "camco/policy.hpp"

namespace camco {
namespace {

ActionValue act(const std::string& label, std::map<std::string, AttrValue> attrs = {}) {
    return ActionValue::discrete(label, std::move(attrs));
}

JointAction joint(std::vector<std::pair<std::string, ActionValue>> entries) {
    JointAction j;
    j.entries = std::move(entries);
    return j;
}

EnterpriseState base_state() {
    EnterpriseState s;
    s.variables["amount"] = 300.0;
    s.variables["requester"] = std::string("dana");
    s.variables["open"] = true;
    return s;
}

// --- ApprovalChain ----------------------------------------------------------

PolicyPredicate chain_pred() {
    PolicyPredicate p;
    p.predicate_id = "chain";
    ApprovalChainParams q;
    q.chain = {{"l1", {"ok"}}, {"l2", {"ok"}}, {"l3", {"ok"}}};
    p.params = std::move(q);
    return p;
}

TEST(ApprovalChain, PrefixClosureOverAllCombos) {
    PolicyPredicate p = chain_pred();
    EnterpriseState s = base_state();
    // Independent oracle: a combo passes iff approvals form a prefix,
    // checked here by scanning for any approval after a gap.
    for (int mask = 0; mask < 8; ++mask) {
        bool a1 = mask & 1, a2 = mask & 2, a3 = mask & 4;
        JointAction j = joint({{"l1", act(a1 ? "ok" : "no")},
                               {"l2", act(a2 ? "ok" : "no")},
                               {"l3", act(a3 ? "ok" : "no")}});
        bool expected = true;
        bool approvals[3] = {a1, a2, a3};
        bool gap_seen = false;
        for (bool ap : approvals) {
            if (!ap) gap_seen = true;
            else if (gap_seen) expected = false;
        }
        EXPECT_EQ(p.eval(s, JointView(j)), expected) << "mask=" << mask;
    }
}

TEST(ApprovalChain, MissingAgentCountsAsNotApproving) {
    PolicyPredicate p = chain_pred();
    EnterpriseState s = base_state();
    // Only l2 present and approving: l1 missing means a broken prefix.
    JointAction j = joint({{"l2", act("ok")}});
    EXPECT_FALSE(p.eval(s, JointView(j)));
    JointAction k = joint({{"l1", act("ok")}});
    EXPECT_TRUE(p.eval(s, JointView(k)));
}

// --- SegregationOfDuties -----------------------------------------------------

TEST(Segregation, StateFormBitesOnMatchingIdentity) {
    PolicyPredicate p;
    p.predicate_id = "sod";
    SegregationParams q;
    q.first_agent = "mgr";
    q.first_labels = {"approve"};
    q.attribute = "approver";
    q.state_var = "requester";
    p.params = std::move(q);
    EnterpriseState s = base_state(); // requester = dana

    auto check = [&](const ActionValue& a, bool expected) {
        JointAction j = joint({{"mgr", a}});
        EXPECT_EQ(p.eval(s, JointView(j)), expected);
    };
    check(act("approve", {{"approver", std::string("dana")}}), false); // self-approval
    check(act("approve", {{"approver", std::string("eli")}}), true);
    check(act("reject", {{"approver", std::string("dana")}}), true);   // label not covered
    check(act("approve"), true);                                        // identity absent
    EnterpriseState s2 = base_state();
    s2.variables.erase("requester");
    JointAction j = joint({{"mgr", act("approve", {{"approver", std::string("dana")}})}});
    EXPECT_TRUE(p.eval(s2, JointView(j))); // state side absent
}

TEST(Segregation, PairFormComparesTwoAgents) {
    PolicyPredicate p;
    p.predicate_id = "sod2";
    SegregationParams q;
    q.first_agent = "auditor";
    q.first_labels = {"review"};
    q.attribute = "principal";
    q.second_agent = "maker";
    q.second_labels = {"submit"};
    p.params = std::move(q);
    EnterpriseState s = base_state();

    auto run = [&](const std::string& ap, const std::string& mp) {
        JointAction j = joint({{"auditor", act("review", {{"principal", ap}})},
                               {"maker", act("submit", {{"principal", mp}})}});
        return p.eval(s, JointView(j));
    };
    EXPECT_FALSE(run("kim", "kim"));
    EXPECT_TRUE(run("kim", "lee"));
    // Non-covered labels release the rule.
    JointAction j = joint({{"auditor", act("waive", {{"principal", std::string("kim")}})},
                           {"maker", act("submit", {{"principal", std::string("kim")}})}});
    EXPECT_TRUE(p.eval(s, JointView(j)));
}

// --- TemporalOrder ------------------------------------------------------------

TEST(TemporalOrder, DependentRequiresPrerequisite) {
    PolicyPredicate p;
    p.predicate_id = "order";
    TemporalOrderParams q;
    q.prerequisite_agent = "validator";
    q.prerequisite_labels = {"validate"};
    q.dependent_agent = "executor";
    q.dependent_labels = {"run", "run_fast"};
    p.params = std::move(q);
    EnterpriseState s = base_state();

    auto run = [&](const std::string& v, const std::string& e) {
        JointAction j = joint({{"validator", act(v)}, {"executor", act(e)}});
        return p.eval(s, JointView(j));
    };
    EXPECT_TRUE(run("validate", "run"));
    EXPECT_FALSE(run("skip", "run"));
    EXPECT_FALSE(run("skip", "run_fast"));
    EXPECT_TRUE(run("skip", "hold")); // dependent idle: no requirement
}

// --- ThresholdGate --------------------------------------------------------------

TEST(ThresholdGate, EscalationRequiredAboveThreshold) {
    PolicyPredicate p;
    p.predicate_id = "gate";
    ThresholdGateParams q;
    q.amount_var = "amount";
    q.threshold = 250.0;
    q.subject_agent = "req";
    q.subject_labels = {"submit"};
    q.escalation_agent = "cfo";
    q.escalation_labels = {"authorize"};
    p.params = std::move(q);

    EnterpriseState hot = base_state(); // amount 300 > 250
    auto run = [&](const EnterpriseState& s, const std::string& r, const std::string& c) {
        JointAction j = joint({{"req", act(r)}, {"cfo", act(c)}});
        return p.eval(s, JointView(j));
    };
    EXPECT_FALSE(run(hot, "submit", "decline"));
    EXPECT_TRUE(run(hot, "submit", "authorize"));
    EXPECT_TRUE(run(hot, "hold", "decline")); // subject idle

    EnterpriseState cold = base_state();
    cold.variables["amount"] = 100.0;
    EXPECT_TRUE(run(cold, "submit", "decline")); // below threshold
    EnterpriseState blank = base_state();
    blank.variables.erase("amount");
    EXPECT_TRUE(run(blank, "submit", "decline")); // amount absent: gate idle
}

// --- Custom ---------------------------------------------------------------------

TEST(CustomPredicate, WrapsExpression) {
    PolicyPredicate p;
    p.predicate_id = "no_self";
    CustomParams q;
    q.expression = expr::neg(expr::eq(expr::label("req"), expr::text("self_approve")));
    p.params = std::move(q);
    EnterpriseState s = base_state();
    EXPECT_FALSE(p.eval(s, JointView(joint({{"req", act("self_approve")}}))));
    EXPECT_TRUE(p.eval(s, JointView(joint({{"req", act("submit")}}))));
}

// --- referenced_agents ------------------------------------------------------------

TEST(PolicyPredicate, ReferencedAgentsPerKind) {
    EXPECT_EQ(chain_pred().referenced_agents(), (std::set<std::string>{"l1", "l2", "l3"}));

    PolicyPredicate sod;
    SegregationParams sq;
    sq.first_agent = "a";
    sq.first_labels = {"x"};
    sq.attribute = "principal";
    sq.state_var = "owner";
    sod.params = std::move(sq);
    EXPECT_EQ(sod.referenced_agents(), (std::set<std::string>{"a"}));

    PolicyPredicate gate;
    ThresholdGateParams gq;
    gq.amount_var = "amount";
    gq.subject_agent = "a";
    gq.escalation_agent = "b";
    gate.params = std::move(gq);
    EXPECT_EQ(gate.referenced_agents(), (std::set<std::string>{"a", "b"}));

    PolicyPredicate cust;
    CustomParams cq;
    cq.expression = expr::label_in("only", {"x"});
    cust.params = std::move(cq);
    EXPECT_EQ(cust.referenced_agents(), (std::set<std::string>{"only"}));
}

// --- eval_phi -----------------------------------------------------------------------

PolicyBundle two_pred_bundle() {
    PolicyBundle b;
    PolicyPredicate p1;
    p1.predicate_id = "always";
    CustomParams q1;
    q1.expression = expr::flag(true);
    p1.params = std::move(q1);
    PolicyPredicate p2;
    p2.predicate_id = "no_fast";
    CustomParams q2;
    q2.expression = expr::neg(expr::eq(expr::label("a"), expr::text("fast")));
    p2.params = std::move(q2);
    b.predicates = {p1, p2};
    FeasibilityRule r;
    r.rule_id = "a.base";
    r.agent_id = "a";
    r.perm = {"slow", "fast"};
    b.feasibility = {r};
    return b;
}

TEST(EvalPhi, ConjunctionWithPerPredicateVerdicts) {
    PolicyBundle b = two_pred_bundle();
    EnterpriseState s = base_state();
    auto good = eval_phi(b, s, joint({{"a", act("slow")}}));
    EXPECT_EQ(good.value, 1);
    ASSERT_EQ(good.verdicts.size(), 2u);
    EXPECT_TRUE(good.verdicts[0].passed);
    EXPECT_TRUE(good.verdicts[1].passed);
    EXPECT_TRUE(good.failing().empty());

    auto bad = eval_phi(b, s, joint({{"a", act("fast")}}));
    EXPECT_EQ(bad.value, 0);
    EXPECT_EQ(bad.failing(), (std::vector<std::string>{"no_fast"}));
}

TEST(EvalPhi, UnknownAgentInJointThrows) {
    PolicyBundle b = two_pred_bundle();
    EnterpriseState s = base_state();
    EXPECT_THROW(eval_phi(b, s, joint({{"ghost", act("slow")}})), SchemaMismatch);
}

// --- feasible_set ----------------------------------------------------------------------

AgentSpec worker_agent() {
    AgentSpec ag;
    ag.agent_id = "w";
    ag.utility_fn = "zero";
    ag.action_space.actions = {act("idle"), act("work"), act("overtime")};
    ag.safe_default = act("idle");
    return ag;
}

TEST(FeasibleSet, UnionOfActiveGrantsPlusSafeDefault) {
    AgentSpec ag = worker_agent();
    PolicyBundle b;
    FeasibilityRule always;
    always.rule_id = "w.base";
    always.agent_id = "w";
    always.perm = {"work"};
    FeasibilityRule gated;
    gated.rule_id = "w.ot";
    gated.agent_id = "w";
    gated.perm = {"overtime"};
    gated.avail = expr::state("open");
    b.feasibility = {always, gated};

    EnterpriseState open_state = base_state(); // open = true
    auto fs_open = feasible_set(b, open_state, ag);
    ASSERT_EQ(fs_open.actions.size(), 3u); // idle (default) + work + overtime
    EXPECT_TRUE(fs_open.contains(act("overtime")));

    EnterpriseState closed = base_state();
    closed.variables["open"] = false;
    auto fs_closed = feasible_set(b, closed, ag);
    EXPECT_TRUE(fs_closed.contains(act("idle")));
    EXPECT_TRUE(fs_closed.contains(act("work")));
    EXPECT_FALSE(fs_closed.contains(act("overtime")));
}

TEST(FeasibleSet, SafeDefaultAlwaysMemberEvenUngranted) {
    AgentSpec ag = worker_agent();
    PolicyBundle b;
    FeasibilityRule none;
    none.rule_id = "w.none";
    none.agent_id = "w";
    none.perm = {}; // grants nothing
    b.feasibility = {none};
    auto fs = feasible_set(b, base_state(), ag);
    ASSERT_EQ(fs.actions.size(), 1u);
    EXPECT_EQ(fs.actions[0], act("idle"));
}

TEST(FeasibleSet, StepWindowBoundsInclusive) {
    AgentSpec ag = worker_agent();
    PolicyBundle b;
    FeasibilityRule windowed;
    windowed.rule_id = "w.win";
    windowed.agent_id = "w";
    windowed.perm = {"work"};
    windowed.window = StepWindow{2, 4};
    b.feasibility = {windowed};
    for (int step : {1, 2, 3, 4, 5}) {
        EnterpriseState s = base_state();
        s.step_index = step;
        bool expect_granted = step >= 2 && step <= 4;
        EXPECT_EQ(feasible_set(b, s, ag).contains(act("work")), expect_granted) << step;
    }
}

TEST(FeasibleSet, FlagWindowReadsState) {
    AgentSpec ag = worker_agent();
    PolicyBundle b;
    FeasibilityRule windowed;
    windowed.rule_id = "w.flag";
    windowed.agent_id = "w";
    windowed.perm = {"work"};
    windowed.window = FlagWindow{"open"};
    b.feasibility = {windowed};
    EnterpriseState s = base_state();
    EXPECT_TRUE(feasible_set(b, s, ag).contains(act("work")));
    s.variables["open"] = false;
    EXPECT_FALSE(feasible_set(b, s, ag).contains(act("work")));
}

TEST(FeasibleSet, ContinuousRegionTogglesWithRules) {
    AgentSpec ag;
    ag.agent_id = "c";
    ag.utility_fn = "zero";
    ag.action_space.kind = ActionKind::Continuous;
    ag.action_space.box = {{0.0, 0.0}, {1.0, 1.0}};
    ag.safe_default = ActionValue::continuous({0.0, 0.0});

    PolicyBundle b;
    FeasibilityRule r;
    r.rule_id = "c.base";
    r.agent_id = "c";
    r.avail = expr::state("open");
    r.halfspaces = {{{1.0, 1.0}, 1.5}};
    b.feasibility = {r};

    EnterpriseState s = base_state();
    auto fs = feasible_set(b, s, ag);
    EXPECT_TRUE(fs.region_enabled);
    EXPECT_TRUE(fs.contains(ActionValue::continuous({0.5, 0.5})));
    EXPECT_FALSE(fs.contains(ActionValue::continuous({0.9, 0.9}))); // violates cut
    EXPECT_TRUE(fs.contains(ActionValue::continuous({0.0, 0.0}))); // safe default

    s.variables["open"] = false;
    auto fs2 = feasible_set(b, s, ag);
    EXPECT_FALSE(fs2.region_enabled);
    EXPECT_FALSE(fs2.contains(ActionValue::continuous({0.5, 0.5})));
    EXPECT_TRUE(fs2.contains(ActionValue::continuous({0.0, 0.0})));
}

// --- agent_constraints -------------------------------------------------------------------

TEST(AgentConstraints, UnarySlicesSeparatedFromJointPredicates) {
    AgentSpec ag = worker_agent();
    PolicyBundle b;
    FeasibilityRule r;
    r.rule_id = "w.base";
    r.agent_id = "w";
    r.perm = {"idle", "work", "overtime"};
    b.feasibility = {r};

    PolicyPredicate unary;
    unary.predicate_id = "no_overtime";
    CustomParams uq;
    uq.expression = expr::neg(expr::eq(expr::label("w"), expr::text("overtime")));
    unary.params = std::move(uq);

    PolicyPredicate joint_pred;
    joint_pred.predicate_id = "needs_partner";
    TemporalOrderParams jq;
    jq.prerequisite_agent = "other";
    jq.prerequisite_labels = {"go"};
    jq.dependent_agent = "w";
    jq.dependent_labels = {"work"};
    joint_pred.params = std::move(jq);

    b.predicates = {unary, joint_pred};
    auto cs = agent_constraints(b, base_state(), ag);
    ASSERT_EQ(cs.unary.size(), 1u);
    EXPECT_EQ(cs.unary[0]->predicate_id, "no_overtime");
    EXPECT_TRUE(cs.admits(base_state(), "w", act("work"))); // joint predicate not applied here
    EXPECT_FALSE(cs.admits(base_state(), "w", act("overtime")));
    EXPECT_FALSE(cs.admits(base_state(), "w", act("unlisted")));
}

} // namespace
} // namespace camco
