// Command-line workbench: runs evaluation batches, tau sweeps, audit
// verification, exhaustive-solver comparisons, and config validation over
// the bundled scenarios or serialized definition files.

#include <cmath>
#include <iostream>

#include "CLI11.hpp"

#include "camco/harness.hpp"

namespace {

using camco::json;

std::vector<double> parse_grid(const std::string& spec) {
    const auto bad = [&]() -> std::vector<double> {
        throw camco::ConfigInvalid("tau grid '" + spec + "' (expected lo:hi:step with step > 0)");
    };
    const std::size_t c1 = spec.find(':');
    const std::size_t c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) return bad();
    double lo = 0, hi = 0, step = 0;
    try {
        lo = std::stod(spec.substr(0, c1));
        hi = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
        step = std::stod(spec.substr(c2 + 1));
    } catch (const std::exception&) {
        return bad();
    }
    if (step <= 0 || hi < lo) return bad();
    std::vector<double> grid;
    const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
    for (int k = 0; k <= n; ++k)
        // Snap accumulated points back to tidy decimals so artifact names
        // stay stable ("0.6", not "0.6000000000000001").
        grid.push_back(std::round((lo + k * step) * 1e9) / 1e9);
    return grid;
}

json parse_overrides(const std::vector<std::string>& pairs) {
    json out = json::object();
    for (const auto& kv : pairs) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw camco::ConfigInvalid("override '" + kv + "' (expected key=value)");
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        json parsed = json::parse(value, nullptr, /*allow_exceptions=*/false);
        // Bare words (rule names) arrive as strings; numbers as numbers.
        out[key] = parsed.is_discarded() ? json(value) : parsed;
    }
    return out;
}

int do_run(const camco::RunManifest& manifest) {
    camco::FunctionRegistry reg = camco::evaluation_registry();
    camco::RunArtifacts arts = camco::execute_manifest(reg, manifest);
    std::cout << camco::emit(arts.results, arts.manifest.emit_format);
    std::cerr << "wrote " << arts.manifest.files.size() << " artifacts and manifest.json to "
              << arts.manifest.output_dir << "\n";
    return 0;
}

int do_verify(const std::string& audit_path, const std::string& results_path) {
    camco::FunctionRegistry reg = camco::evaluation_registry();
    camco::VerifyReport rep = camco::verify_audit_file(reg, audit_path, results_path);
    if (rep.truncated_tail_discarded)
        std::cerr << "warning: torn final record discarded (interrupted append)\n";
    std::cout << "episodes checked: " << rep.episodes_checked << "\n"
              << "events checked:   " << rep.events_checked << "\n";
    if (rep.ok()) {
        std::cout << "verdict: clean replay, no divergence\n";
        return 0;
    }
    std::size_t shown = 0;
    for (const auto& d : rep.divergences) {
        if (++shown > 10) {
            std::cout << "... " << rep.divergences.size() - 10 << " more\n";
            break;
        }
        std::cout << "divergence at record " << d.record_index << " (" << d.episode_id
                  << "): " << d.what << "\n";
    }
    for (const auto& m : rep.result_mismatches) std::cout << "results mismatch: " << m << "\n";
    std::cout << "verdict: log does not replay\n";
    return 1;
}

int do_oracle(const std::string& scenario, const std::string& coordinator, std::size_t episodes,
              std::uint64_t seed, const std::vector<std::string>& overrides) {
    camco::FunctionRegistry reg = camco::evaluation_registry();
    camco::ScenarioDefinition def = camco::load_or_build_scenario(scenario, seed);
    camco::CoordinationConfig cfg =
        camco::apply_config_overrides(def.defaults, parse_overrides(overrides));
    camco::OracleComparison cmp = camco::oracle_compare(
        reg, def, camco::coordinator_from_string(coordinator), episodes, seed, cfg);
    std::cout << camco::to_json(cmp).dump(2) << "\n";
    return 0;
}

int do_validate(const std::string& scenario, std::uint64_t seed) {
    camco::FunctionRegistry reg = camco::evaluation_registry();
    camco::ScenarioDefinition def = camco::load_or_build_scenario(scenario, seed);
    def.defaults.validate();
    camco::EnterpriseState probe = camco::sample_episode_state(def, 0);
    camco::ValidationReport rep =
        camco::validate_roster(def.roster, probe, &def.bundle, &def.risk_profile, &reg);
    for (const auto& f : rep.findings) {
        const char* sev = f.severity == camco::FindingSeverity::Error ? "error" : "warning";
        std::cout << sev << " [" << f.code << "] " << f.subject << ": " << f.detail << "\n";
    }
    std::cout << (rep.ok() ? "config ok" : "config has errors") << " (" << rep.errors()
              << " errors, " << rep.findings.size() << " findings)\n";
    return rep.ok() ? 0 : 1;
}

int do_emit_scenarios(const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (camco::ScenarioId id : camco::evaluation_scenarios()) {
        camco::ScenarioDefinition def = camco::build_scenario(id, 0);
        const std::string path = dir + "/" + def.name + ".json";
        camco::write_text_file(path, camco::to_json(def).dump(2) + "\n");
        std::cout << "wrote " << path << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"policy-aware multi-agent coordination workbench"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "execute a scenario x coordinator evaluation matrix");
    std::vector<std::string> scenarios = {"s1", "s2", "s3"};
    std::vector<std::string> coordinators = {"camco", "b1", "b2", "b3", "b4"};
    std::size_t episodes = 500;
    std::uint64_t seed = 0;
    std::string out_dir, emit_name = "table", sweep_spec, manifest_file;
    std::vector<std::string> overrides;
    run->add_option("--scenario", scenarios, "scenario names or definition files");
    run->add_option("--coordinator", coordinators, "coordinators to evaluate");
    run->add_option("--episodes", episodes, "episodes per batch");
    run->add_option("--seed", seed, "run seed");
    run->add_option("--out", out_dir, "output directory (default: $CAMCO_OUT, then .)");
    run->add_option("--emit", emit_name, "summary format: csv, table, json-lines");
    run->add_option("--sweep-tau", sweep_spec, "risk budget grid lo:hi:step");
    run->add_option("--override", overrides, "config override key=value (repeatable)");
    run->add_option("--manifest", manifest_file, "execute a stored manifest instead of flags");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "tau sensitivity sweep (camco by default)");
    std::vector<std::string> sw_scenarios = {"s1", "s2", "s3"};
    std::vector<std::string> sw_coordinators = {"camco"};
    std::size_t sw_episodes = 500;
    std::uint64_t sw_seed = 0;
    std::string sw_out, sw_emit = "table", sw_grid = "0.4:1.4:0.2";
    std::vector<std::string> sw_overrides;
    sweep->add_option("--scenario", sw_scenarios, "scenario names or definition files");
    sweep->add_option("--coordinator", sw_coordinators, "coordinators to sweep");
    sweep->add_option("--episodes", sw_episodes, "episodes per grid point");
    sweep->add_option("--seed", sw_seed, "run seed");
    sweep->add_option("--out", sw_out, "output directory (default: $CAMCO_OUT, then .)");
    sweep->add_option("--emit", sw_emit, "summary format: csv, table, json-lines");
    sweep->add_option("--grid", sw_grid, "risk budget grid lo:hi:step");
    sweep->add_option("--override", sw_overrides, "config override key=value (repeatable)");

    // verify-audit
    auto* verify = app.add_subcommand("verify-audit", "replay an audit log and flag divergence");
    std::string audit_path, results_path;
    verify->add_option("audit", audit_path, "audit log to replay")->required();
    verify->add_option("--results", results_path, "stored results file to cross-check");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "compare a coordinator to exhaustive search");
    std::string or_scenario = "s1", or_coordinator = "camco";
    std::size_t or_episodes = 100;
    std::uint64_t or_seed = 0;
    std::vector<std::string> or_overrides;
    oracle->add_option("--scenario", or_scenario, "scenario name or definition file");
    oracle->add_option("--coordinator", or_coordinator, "coordinator to score");
    oracle->add_option("--episodes", or_episodes, "episodes to compare");
    oracle->add_option("--seed", or_seed, "run seed");
    oracle->add_option("--override", or_overrides, "config override key=value (repeatable)");

    // validate-config
    auto* validate = app.add_subcommand("validate-config", "structural checks on a scenario");
    std::string val_scenario;
    std::uint64_t val_seed = 0;
    validate->add_option("scenario", val_scenario, "scenario name or definition file")
        ->required();
    validate->add_option("--seed", val_seed, "seed for the probe state");

    // emit-scenarios
    auto* emit_scn = app.add_subcommand("emit-scenarios", "write bundled scenario definitions");
    std::string scn_dir = "scenarios";
    emit_scn->add_option("--dir", scn_dir, "target directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            camco::RunManifest m;
            if (!manifest_file.empty()) {
                m = camco::manifest_from_json(json::parse(camco::read_text_file(manifest_file)));
                if (!out_dir.empty()) m.output_dir = out_dir;
            } else {
                m.scenarios = scenarios;
                m.coordinators = coordinators;
                m.episodes = episodes;
                m.seed = seed;
                m.output_dir = out_dir;
                m.emit_format = camco::emit_format_from_string(emit_name);
                m.config_overrides = parse_overrides(overrides);
                if (!sweep_spec.empty()) m.sweep_grid = parse_grid(sweep_spec);
            }
            return do_run(m);
        }
        if (*sweep) {
            camco::RunManifest m;
            m.scenarios = sw_scenarios;
            m.coordinators = sw_coordinators;
            m.episodes = sw_episodes;
            m.seed = sw_seed;
            m.output_dir = sw_out;
            m.emit_format = camco::emit_format_from_string(sw_emit);
            m.config_overrides = parse_overrides(sw_overrides);
            m.sweep_grid = parse_grid(sw_grid);
            return do_run(m);
        }
        if (*verify) return do_verify(audit_path, results_path);
        if (*oracle)
            return do_oracle(or_scenario, or_coordinator, or_episodes, or_seed, or_overrides);
        if (*validate) return do_validate(val_scenario, val_seed);
        if (*emit_scn) return do_emit_scenarios(scn_dir);
    } catch (const camco::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
