// Smallest end-to-end use of the library: a hand-built two-agent roster with
// one ordering rule, negotiated under a joint risk budget. Prints the audit
// trail so the dual-ascent rounds are visible.

#include <cstdio>

#include "camco/negotiation.hpp"

using namespace camco;

namespace {

ActionValue act(const char* label, double u, double r) {
    return ActionValue::discrete(label, {{"u", u}, {"r", r}});
}

AgentSpec agent(std::string id, std::vector<ActionValue> menu, const char* safe) {
    AgentSpec ag;
    ag.agent_id = std::move(id);
    ag.action_space.kind = ActionKind::Discrete;
    ag.action_space.actions = std::move(menu);
    ag.utility_fn = "attr:u";
    ag.safe_default = act(safe, 0.0, 0.0);
    ag.action_space.actions.push_back(ag.safe_default);
    return ag;
}

} // namespace

int main() {
    FunctionRegistry reg;
    FunctionRegistry::add_builtins(reg); // attr:u / attr:r read action attributes

    std::vector<AgentSpec> roster = {
        agent("deployer", {act("ship", 5.0, 0.9), act("stage", 4.0, 0.2)}, "hold"),
        agent("approver", {act("approve", 3.0, 0.6), act("review", 2.5, 0.1)}, "skip"),
    };

    PolicyBundle bundle;
    for (const auto& ag : roster) {
        FeasibilityRule grant;
        grant.rule_id = ag.agent_id + "-lane";
        grant.agent_id = ag.agent_id;
        for (const auto& a : ag.action_space.actions) grant.perm.push_back(a.label);
        bundle.feasibility.push_back(std::move(grant));
    }
    // Shipping requires a standing approval in the same joint tuple.
    TemporalOrderParams order;
    order.prerequisite_agent = "approver";
    order.prerequisite_labels = {"approve"};
    order.dependent_agent = "deployer";
    order.dependent_labels = {"ship"};
    bundle.predicates.push_back({"ship-needs-approval", order});

    RiskProfile profile;
    profile.dimensions = {"ops"};
    profile.weights["ops"] = 1.0;
    for (const auto& ag : roster) profile.indicators[ag.agent_id]["ops"] = {"attr:r", 2.0};

    CoordinationConfig cfg;
    cfg.tau = 1.0;  // ship+approve carries 1.5, so the budget forces a retreat
    cfg.delta = 0.5;
    cfg.validate();

    EnterpriseState state;
    EpisodeContext ctx;
    ctx.episode_id = "quickstart:0";

    NegotiationOutcome out = negotiate(reg, roster, state, bundle, profile, cfg, &ctx);

    for (const auto& ev : out.audit)
        std::printf("round %d  %-22s %s\n", ev.iteration, to_string(ev.kind).c_str(),
                    ev.payload.dump().c_str());

    if (out.joint) {
        std::printf("\naccepted after %d rounds at joint risk %.3f:\n", out.iterations_used,
                    out.final_risk.total);
        for (const auto& [id, action] : out.joint->entries)
            std::printf("  %-10s -> %s\n", id.c_str(), action.label.c_str());
    } else {
        std::printf("\nno compliant tuple within the round cap; fallback ships\n");
    }
    return 0;
}
