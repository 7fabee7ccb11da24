#include <gtest/gtest.h>

#include <charconv>

#include "camco/domain.hpp"

namespace camco {
namespace {

AgentSpec tiny_agent(const std::string& id, std::vector<std::string> labels) {
    AgentSpec ag;
    ag.agent_id = id;
    ag.utility_fn = "zero";
    for (auto& l : labels) ag.action_space.actions.push_back(ActionValue::discrete(l));
    ag.safe_default = ag.action_space.actions.front();
    return ag;
}

TEST(CanonicalDouble, RoundTripsExactly) {
    for (double v : {0.1, -3.5, 1.0 / 3.0, 1e-17, 123456789.123456, 0.0, -0.0, 5e300}) {
        std::string s = canonical_double(v);
        double back = 0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), back);
        ASSERT_EQ(res.ec, std::errc());
        EXPECT_EQ(back, v) << s;
    }
}

TEST(ActionValue, EqualityCoversLabelAndAttrs) {
    auto a = ActionValue::discrete("x", {{"k", 1.0}});
    auto b = ActionValue::discrete("x", {{"k", 1.0}});
    auto c = ActionValue::discrete("x", {{"k", 2.0}});
    auto d = ActionValue::discrete("y", {{"k", 1.0}});
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    EXPECT_NE(a, d);
    EXPECT_NE(a, ActionValue::continuous({1.0}));
}

TEST(ActionValue, CanonicalKeySeparatesValues) {
    auto a = ActionValue::discrete("x", {{"k", 1.0}, {"m", true}});
    auto b = ActionValue::discrete("x", {{"k", 1.0}, {"m", false}});
    auto c = ActionValue::continuous({1.0, 2.0});
    EXPECT_NE(a.canonical_key(), b.canonical_key());
    EXPECT_NE(a.canonical_key(), c.canonical_key());
    EXPECT_EQ(a.canonical_key(), ActionValue::discrete("x", {{"m", true}, {"k", 1.0}}).canonical_key());
}

TEST(ActionValue, FiniteChecksVector) {
    EXPECT_TRUE(ActionValue::continuous({1.0, -2.0}).finite());
    EXPECT_FALSE(ActionValue::continuous({1.0, std::nan("")}).finite());
    EXPECT_FALSE(ActionValue::continuous({std::numeric_limits<double>::infinity()}).finite());
}

TEST(BoxBounds, ValidateRejectsBadBounds) {
    BoxBounds ok{{0.0, -1.0}, {1.0, 1.0}};
    EXPECT_NO_THROW(ok.validate());
    BoxBounds arity{{0.0}, {1.0, 2.0}};
    EXPECT_THROW(arity.validate(), DimensionMismatch);
    BoxBounds inverted{{2.0}, {1.0}};
    EXPECT_THROW(inverted.validate(), ConfigInvalid);
}

TEST(EnterpriseState, TypedAccessors) {
    EnterpriseState s;
    s.variables["amount"] = 12.5;
    s.variables["rush"] = true;
    s.variables["owner"] = std::string("dana");
    EXPECT_EQ(s.number("amount"), 12.5);
    EXPECT_EQ(s.text("owner"), "dana");
    EXPECT_TRUE(s.flag("rush"));
    EXPECT_FALSE(s.flag("absent"));
    EXPECT_EQ(s.number("owner"), std::nullopt);
    EXPECT_EQ(s.number("absent"), std::nullopt);
}

TEST(CoordinationConfig, ValidateCatchesEachKnob) {
    CoordinationConfig good;
    EXPECT_NO_THROW(good.validate());
    auto expect_bad = [](CoordinationConfig c) { EXPECT_THROW(c.validate(), ConfigInvalid); };
    CoordinationConfig c = good;
    c.tau = 0.0;
    expect_bad(c);
    c = good;
    c.lambda0 = -0.1;
    expect_bad(c);
    c = good;
    c.delta = 0.0;
    expect_bad(c);
    c = good;
    c.k_max = 0;
    expect_bad(c);
    c = good;
    c.eta0 = -1.0;
    expect_bad(c);
    c = good;
    c.alpha = 0.0;
    expect_bad(c);
}

TEST(FunctionRegistry, MissingNamesThrowTypedErrors) {
    FunctionRegistry reg;
    EXPECT_THROW(reg.utility("nope"), ConfigInvalid);
    EXPECT_THROW(reg.indicator("nope"), MissingIndicator);
}

TEST(FunctionRegistry, BuiltinAttrReaders) {
    FunctionRegistry reg;
    FunctionRegistry::add_builtins(reg);
    EnterpriseState s;
    auto a = ActionValue::discrete("x", {{"u", 7.5}, {"r", 0.25}});
    EXPECT_EQ(reg.utility("attr:u")(s, a), 7.5);
    EXPECT_EQ(reg.indicator("attr:r")(s, a), 0.25);
    EXPECT_EQ(reg.utility("attr:u")(s, ActionValue::discrete("bare")), 0.0);
    EXPECT_EQ(reg.utility("zero")(s, a), 0.0);
}

TEST(JointEnumeration, LexicographicOdometerLastAgentFastest) {
    std::vector<AgentSpec> roster = {tiny_agent("a", {"a0", "a1"}),
                                     tiny_agent("b", {"b0", "b1", "b2"})};
    // Independent oracle: hand-built expected sequence.
    std::vector<std::pair<std::string, std::string>> expected = {
        {"a0", "b0"}, {"a0", "b1"}, {"a0", "b2"},
        {"a1", "b0"}, {"a1", "b1"}, {"a1", "b2"}};
    auto joints = enumerate_joint_actions(roster);
    ASSERT_EQ(joints.size(), expected.size());
    for (std::size_t i = 0; i < joints.size(); ++i) {
        EXPECT_EQ(joints[i].entries[0].second.label, expected[i].first);
        EXPECT_EQ(joints[i].entries[1].second.label, expected[i].second);
    }
    EXPECT_EQ(joint_space_size(roster), 6u);
}

TEST(JointEnumeration, SingleAgentAndEmptyRoster) {
    std::vector<AgentSpec> one = {tiny_agent("a", {"x", "y"})};
    EXPECT_EQ(enumerate_joint_actions(one).size(), 2u);
    std::vector<AgentSpec> none;
    auto joints = enumerate_joint_actions(none);
    ASSERT_EQ(joints.size(), 1u); // the empty tuple
    EXPECT_EQ(joints[0].size(), 0u);
}

TEST(JointEnumeration, CapGuardsMaterialization) {
    std::vector<std::string> labels;
    for (int i = 0; i < 100; ++i) labels.push_back("l" + std::to_string(i));
    std::vector<AgentSpec> roster = {tiny_agent("a", labels), tiny_agent("b", labels),
                                     tiny_agent("c", labels)};
    EXPECT_THROW(JointSpaceEnumerator(roster, 999'999), OracleCapExceeded);
    EXPECT_NO_THROW(JointSpaceEnumerator(roster, 1'000'000));
}

TEST(JointEnumeration, ContinuousAgentRejected) {
    AgentSpec ag;
    ag.agent_id = "c";
    ag.action_space.kind = ActionKind::Continuous;
    ag.action_space.box = {{0.0}, {1.0}};
    ag.safe_default = ActionValue::continuous({0.0});
    std::vector<AgentSpec> roster = {ag};
    EXPECT_THROW(joint_space_size(roster), ConfigInvalid);
}

TEST(JointAction, FindAndCanonicalKey) {
    JointAction j;
    j.entries.emplace_back("a", ActionValue::discrete("x"));
    j.entries.emplace_back("b", ActionValue::discrete("y"));
    ASSERT_NE(j.find("a"), nullptr);
    EXPECT_EQ(j.find("a")->label, "x");
    EXPECT_EQ(j.find("missing"), nullptr);
    JointAction k = j;
    EXPECT_EQ(j.canonical_key(), k.canonical_key());
    k.entries[1].second = ActionValue::discrete("z");
    EXPECT_NE(j.canonical_key(), k.canonical_key());
}

} // namespace
} // namespace camco
