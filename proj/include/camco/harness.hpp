#pragma once

/**
 * Experiment orchestration: a manifest names scenarios, coordinators,
 * episode count, seed, and knob overrides; executing it writes audit
 * logs, per-combination results, a summary in the chosen format, and the
 * manifest itself with a content hash per artifact. Outputs are a pure
 * function of the manifest, so two executions produce identical bytes.
 *
 * Episodes are evaluated independently and merged in index order; the
 * merge is what the reproducibility contract rests on, not the schedule.
 */

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "camco/audit.hpp"
#include "camco/oracle.hpp"
#include "camco/validate.hpp"

namespace camco {

inline constexpr const char* kOutputDirEnvVar = "CAMCO_OUT";

/// Registry with every function the bundled scenarios reference.
inline FunctionRegistry evaluation_registry() {
    FunctionRegistry reg;
    FunctionRegistry::add_builtins(reg);
    register_scenario_functions(reg);
    return reg;
}

/// Precedence: explicit flag, then the environment, then the working dir.
inline std::string resolve_output_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv(kOutputDirEnvVar); env && *env) return env;
    return ".";
}

/// Partial override: unknown keys are rejected rather than ignored so a
/// typo cannot silently run the defaults.
inline CoordinationConfig apply_config_overrides(const CoordinationConfig& base,
                                                 const json& overrides) {
    if (overrides.is_null() || (overrides.is_object() && overrides.empty())) return base;
    if (!overrides.is_object()) throw ConfigInvalid("config overrides must be an object");
    json merged = to_json(base);
    for (const auto& [key, value] : overrides.items()) {
        if (!merged.contains(key)) throw ConfigInvalid("unknown config key '" + key + "'");
        merged[key] = value;
    }
    CoordinationConfig out = config_from_json(merged);
    out.validate();
    return out;
}

/// Accepts a bundled scenario name or a path to a serialized definition.
inline ScenarioDefinition load_or_build_scenario(const std::string& name_or_path,
                                                 std::uint64_t seed) {
    if (name_or_path == "s1" || name_or_path == "s2" || name_or_path == "s3")
        return build_scenario(scenario_from_string(name_or_path), seed);
    std::ifstream in(name_or_path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file '" + name_or_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    ScenarioDefinition def = scenario_from_json(json::parse(buf.str()));
    def.seed = seed;
    return def;
}

struct RunManifest {
    std::vector<std::string> scenarios;    // names or file paths
    std::vector<std::string> coordinators; // "camco", "b1", ..., "b4"
    std::size_t episodes = 500;
    std::uint64_t seed = 0;
    json config_overrides = json::object();
    std::string output_dir; // resolved before execution
    std::vector<double> sweep_grid; // empty means a plain run
    EmitFormat emit_format = EmitFormat::Table;
    std::vector<std::pair<std::string, std::string>> files; // name, fnv1a hex
};

inline std::string fnv1a_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(Rng::fnv1a(bytes)));
    return buf;
}

inline std::string emit_extension(EmitFormat f) {
    switch (f) {
        case EmitFormat::Csv: return "csv";
        case EmitFormat::Table: return "txt";
        case EmitFormat::JsonLines: return "jsonl";
    }
    return "txt";
}

inline std::string emit_format_name(EmitFormat f) {
    switch (f) {
        case EmitFormat::Csv: return "csv";
        case EmitFormat::Table: return "table";
        case EmitFormat::JsonLines: return "json-lines";
    }
    return "table";
}

inline json to_json(const RunManifest& m) {
    json files = json::array();
    for (const auto& [name, hash] : m.files) files.push_back(json{{"path", name}, {"fnv1a", hash}});
    return json{{"schema", kManifestSchema},
                {"scenarios", m.scenarios},
                {"coordinators", m.coordinators},
                {"episodes", m.episodes},
                {"seed", m.seed},
                {"config_overrides", m.config_overrides},
                {"output_dir", m.output_dir},
                {"sweep_grid", m.sweep_grid},
                {"emit", emit_format_name(m.emit_format)},
                {"files", std::move(files)}};
}

inline RunManifest manifest_from_json(const json& j) {
    if (j.value("schema", "") != kManifestSchema)
        throw SchemaMismatch("manifest schema '" + j.value("schema", "") + "'");
    RunManifest m;
    m.scenarios = j.at("scenarios").get<std::vector<std::string>>();
    m.coordinators = j.at("coordinators").get<std::vector<std::string>>();
    m.episodes = j.at("episodes").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.config_overrides = j.at("config_overrides");
    m.output_dir = j.at("output_dir").get<std::string>();
    m.sweep_grid = j.at("sweep_grid").get<std::vector<double>>();
    m.emit_format = emit_format_from_string(j.at("emit").get<std::string>());
    for (const auto& f : j.at("files"))
        m.files.emplace_back(f.at("path").get<std::string>(), f.at("fnv1a").get<std::string>());
    return m;
}

// --- file helpers ------------------------------------------------------------

inline void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write to '" + path + "' failed");
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_results_file(const std::string& path, const BatchResult& batch) {
    json j{{"schema", kResultsSchema}, {"batch", to_json(batch)}};
    write_text_file(path, j.dump(2) + "\n");
}

inline BatchResult read_results_file(const std::string& path) {
    json j = json::parse(read_text_file(path));
    if (j.value("schema", "") != kResultsSchema)
        throw SchemaMismatch("results schema '" + j.value("schema", "") + "'");
    return batch_from_json(j.at("batch"));
}

// --- manifest execution ------------------------------------------------------

struct RunArtifacts {
    std::vector<BatchResult> results; // scenario-major, coordinator-minor, grid inner
    RunManifest manifest;             // with the file inventory filled in
    std::string manifest_path;
    std::string summary_path;
};

/// A name like "audit_s1_camco.jsonl" or, under a sweep,
/// "audit_s1_camco_tau0.6.jsonl".
inline std::string artifact_stem(const std::string& scenario, const std::string& coordinator,
                                 const double* tau) {
    std::string stem = scenario + "_" + coordinator;
    if (tau) stem += "_tau" + canonical_double(*tau);
    return stem;
}

inline RunArtifacts execute_manifest(const FunctionRegistry& reg, RunManifest manifest) {
    if (manifest.scenarios.empty()) throw ConfigInvalid("manifest names no scenarios");
    if (manifest.coordinators.empty()) throw ConfigInvalid("manifest names no coordinators");
    if (manifest.episodes == 0) throw ConfigInvalid("manifest asks for zero episodes");
    manifest.output_dir = resolve_output_dir(manifest.output_dir);
    std::filesystem::create_directories(manifest.output_dir);

    RunArtifacts arts;
    auto emit_file = [&](const std::string& name, std::string_view content) {
        write_text_file(manifest.output_dir + "/" + name, content);
        manifest.files.emplace_back(name, fnv1a_hex(content));
    };

    for (const auto& scenario : manifest.scenarios) {
        ScenarioDefinition def = load_or_build_scenario(scenario, manifest.seed);
        for (const auto& coordinator : manifest.coordinators) {
            const CoordinatorKind kind = coordinator_from_string(coordinator);
            const CoordinationConfig base =
                apply_config_overrides(def.defaults, manifest.config_overrides);

            std::vector<std::optional<double>> taus;
            if (manifest.sweep_grid.empty()) {
                taus.push_back(std::nullopt);
            } else {
                for (double t : manifest.sweep_grid) taus.push_back(t);
            }
            for (const auto& tau : taus) {
                CoordinationConfig cfg = base;
                if (tau) cfg.tau = *tau;
                const std::string stem = artifact_stem(def.name, coordinator, tau ? &*tau : nullptr);

                AuditHeader hdr;
                hdr.scenario = def.name;
                hdr.coordinator = coordinator;
                hdr.run_seed = manifest.seed;
                hdr.episodes = manifest.episodes;
                hdr.config = cfg;
                const std::string audit_name = "audit_" + stem + ".jsonl";
                const std::string audit_path = manifest.output_dir + "/" + audit_name;
                AuditWriter writer(audit_path, hdr);

                BatchResult batch =
                    run_batch(reg, def, kind, manifest.episodes, manifest.seed, cfg,
                              [&](const EpisodeRecord& r, const EnterpriseState& s,
                                  const NegotiationOutcome& o) { writer.episode(r, s, o); });
                manifest.files.emplace_back(audit_name, fnv1a_hex(read_text_file(audit_path)));

                json results{{"schema", kResultsSchema}, {"batch", to_json(batch)}};
                emit_file("results_" + stem + ".json", results.dump(2) + "\n");
                arts.results.push_back(std::move(batch));
            }
        }
    }

    const std::string summary_name = "summary." + emit_extension(manifest.emit_format);
    emit_file(summary_name, emit(arts.results, manifest.emit_format));
    arts.summary_path = manifest.output_dir + "/" + summary_name;

    arts.manifest_path = manifest.output_dir + "/manifest.json";
    write_text_file(arts.manifest_path, to_json(manifest).dump(2) + "\n");
    arts.manifest = std::move(manifest);
    return arts;
}

/// Checks every hashed artifact in a written manifest against the bytes
/// on disk; names whichever files changed.
inline std::vector<std::string> check_manifest_inventory(const std::string& manifest_path) {
    json j = json::parse(read_text_file(manifest_path));
    RunManifest m = manifest_from_json(j);
    const std::string dir = std::filesystem::path(manifest_path).parent_path().string();
    std::vector<std::string> stale;
    for (const auto& [name, hash] : m.files) {
        const std::string path = dir.empty() ? name : dir + "/" + name;
        if (!std::filesystem::exists(path)) {
            stale.push_back(name + ": missing");
            continue;
        }
        const std::string actual = fnv1a_hex(read_text_file(path));
        if (actual != hash) stale.push_back(name + ": hash " + actual + " != recorded " + hash);
    }
    return stale;
}

// --- audit verification entry point -----------------------------------------

inline VerifyReport verify_audit_file(const FunctionRegistry& reg, const std::string& audit_path,
                                      const std::string& results_path = "") {
    AuditLog log = read_audit_log(audit_path);
    if (results_path.empty()) return verify_audit_log(reg, log);
    BatchResult stored = read_results_file(results_path);
    return verify_audit_log(reg, log, &stored);
}

// --- exhaustive-solver comparison --------------------------------------------

struct OracleComparison {
    std::string scenario;
    std::string coordinator;
    std::size_t episodes = 0;
    std::size_t accepted = 0;
    std::size_t failed = 0;
    std::size_t feasibility_agreements = 0; // accepted & solvable, or failed & unsolvable
    std::size_t failed_with_feasible_point = 0; // joint-gate interactions worth reading
    double mean_optimality_gap_pct = 0.0;       // over accepted episodes
    double max_optimality_gap_pct = 0.0;
};

inline json to_json(const OracleComparison& c) {
    return json{{"scenario", c.scenario},
                {"coordinator", c.coordinator},
                {"episodes", c.episodes},
                {"accepted", c.accepted},
                {"failed", c.failed},
                {"feasibility_agreements", c.feasibility_agreements},
                {"failed_with_feasible_point", c.failed_with_feasible_point},
                {"mean_optimality_gap_pct", c.mean_optimality_gap_pct},
                {"max_optimality_gap_pct", c.max_optimality_gap_pct}};
}

/// Runs the coordinator episode by episode next to the exhaustive solver
/// and scores agreement: accepted tuples against the true constrained
/// optimum, failures against actual unsolvability.
inline OracleComparison oracle_compare(const FunctionRegistry& reg, const ScenarioDefinition& def,
                                       CoordinatorKind kind, std::size_t episodes,
                                       std::uint64_t run_seed,
                                       std::optional<CoordinationConfig> config_override =
                                           std::nullopt) {
    ScenarioDefinition local = def;
    local.seed = run_seed;
    CoordinationConfig cfg = config_override ? *config_override : def.defaults;
    cfg.validate();

    OracleComparison cmp;
    cmp.scenario = def.name;
    cmp.coordinator = to_string(kind);
    cmp.episodes = episodes;
    double gap_sum = 0.0;
    for (std::size_t i = 0; i < episodes; ++i) {
        EnterpriseState state = sample_episode_state(local, i);
        EpisodeContext ctx;
        ctx.episode_id = local.name + ":" + cmp.coordinator + ":" + std::to_string(run_seed) +
                         ":" + std::to_string(i);
        NegotiationOutcome out = run_coordinator(kind, reg, local.roster, state, local.bundle,
                                                 local.risk_profile, cfg, &ctx);
        OracleReport rep =
            oracle_solve(reg, local.roster, state, local.bundle, local.risk_profile, cfg.tau);
        if (out.status == NegotiationStatus::Accepted) {
            ++cmp.accepted;
            if (rep.feasible) ++cmp.feasibility_agreements;
            double achieved = joint_utility(reg, local.roster, state, *out.joint);
            double gap = rep.best_utility > 1e-12
                             ? 100.0 * (rep.best_utility - achieved) / rep.best_utility
                             : 0.0;
            if (gap < 0.0) gap = 0.0; // equal-value tie-break jitter
            gap_sum += gap;
            if (gap > cmp.max_optimality_gap_pct) cmp.max_optimality_gap_pct = gap;
        } else {
            ++cmp.failed;
            if (!rep.feasible)
                ++cmp.feasibility_agreements;
            else
                ++cmp.failed_with_feasible_point;
        }
    }
    cmp.mean_optimality_gap_pct = cmp.accepted ? gap_sum / cmp.accepted : 0.0;
    return cmp;
}

} // namespace camco
