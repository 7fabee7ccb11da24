// Reproduces the evaluation table in miniature: every bundled scenario run
// under every coordinator, 200 episodes each, printed as the standard table.

#include <cstdio>
#include <vector>

#include "camco/harness.hpp"

using namespace camco;

int main() {
    FunctionRegistry reg = evaluation_registry();

    std::vector<BatchResult> rows;
    for (const auto& id : evaluation_scenarios()) {
        ScenarioDefinition def = build_scenario(id, /*seed=*/7);
        for (CoordinatorKind kind : all_coordinators())
            rows.push_back(run_batch(reg, def, kind, /*episodes=*/200, /*run_seed=*/7));
    }

    std::fputs(emit_table(rows).c_str(), stdout);
    return 0;
}
