#pragma once

/**
 * Batch evaluation. Runs a coordinator over sampled episodes and folds
 * the outcomes into summary metrics; the fold is an ordered reduction
 * over the episode index, so a batch is a pure function of (definition,
 * coordinator, episode count, seed, config).
 *
 * Rate conventions, since the denominators differ:
 *   violation_rate          gate failures among executed tuples / executed
 *   episode_violation_rate  gate failures among executed tuples / episodes
 * A tuple counts as executed only when the episode was accepted; an
 * episode that ends in a failure ships its fallback, which is scored for
 * utility retention but is a revert, not an executed decision.
 */

#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "camco/baselines.hpp"
#include "camco/oracle.hpp"
#include "camco/scenarios.hpp"

namespace camco {

struct EpisodeRecord {
    std::string episode_id;
    std::size_t episode_index = 0;
    NegotiationStatus status = NegotiationStatus::Failed;
    int iterations_used = 0;
    int phi_value = 0;         // gate verdict of the shipped tuple
    double risk_total = 0.0;   // joint risk of the shipped tuple
    double risk_ratio = 0.0;   // risk_total / tau
    double utility = 0.0;      // raw utility of the shipped tuple
    double raw_optimum = 0.0;  // unconstrained per-agent argmax sum
    double retention_pct = 0.0;
    JointAction shipped;       // accepted tuple, or the fallback on a failure
};

struct BatchResult {
    std::string scenario_id;
    std::string coordinator;
    std::uint64_t seed = 0;
    std::size_t episodes = 0;
    double tau = 0.0;
    double violation_rate = 0.0;
    double episode_violation_rate = 0.0;
    double mean_risk_ratio = 0.0;              // over executed tuples
    double deadlock_rate = 0.0;                // failed episodes / episodes
    double mean_convergence_iterations = 0.0;  // over accepted episodes
    double utility_retention_pct = 0.0;        // over all episodes, fallbacks included
    std::vector<EpisodeRecord> per_episode;
};

/// Deterministic ordered fold; exposed separately so the arithmetic is
/// testable on hand-built records.
inline BatchResult fold_records(std::string scenario_id, std::string coordinator,
                                std::uint64_t seed, double tau,
                                std::vector<EpisodeRecord> records) {
    BatchResult out;
    out.scenario_id = std::move(scenario_id);
    out.coordinator = std::move(coordinator);
    out.seed = seed;
    out.tau = tau;
    out.episodes = records.size();

    std::size_t executed = 0, violations = 0, failed = 0;
    double ratio_sum = 0.0, iter_sum = 0.0, retention_sum = 0.0;
    for (const auto& r : records) {
        if (r.status == NegotiationStatus::Accepted) {
            ++executed;
            if (r.phi_value == 0) ++violations;
            ratio_sum += r.risk_ratio;
            iter_sum += r.iterations_used;
        } else {
            ++failed;
        }
        retention_sum += r.retention_pct;
    }
    const auto n = static_cast<double>(records.size());
    out.violation_rate = executed ? static_cast<double>(violations) / executed : 0.0;
    out.episode_violation_rate = records.empty() ? 0.0 : static_cast<double>(violations) / n;
    out.mean_risk_ratio = executed ? ratio_sum / executed : 0.0;
    out.deadlock_rate = records.empty() ? 0.0 : static_cast<double>(failed) / n;
    out.mean_convergence_iterations = executed ? iter_sum / executed : 0.0;
    out.utility_retention_pct = records.empty() ? 0.0 : retention_sum / n;
    out.per_episode = std::move(records);
    return out;
}

/// Scores one finished episode. Shared between the live batch runner and
/// the audit replay so both derive records through the same arithmetic.
inline EpisodeRecord build_episode_record(const FunctionRegistry& reg,
                                          const ScenarioDefinition& def,
                                          const CoordinationConfig& cfg,
                                          const EpisodeContext& ctx, std::size_t index,
                                          const EnterpriseState& state,
                                          const NegotiationOutcome& res) {
    EpisodeRecord rec;
    rec.episode_id = ctx.episode_id;
    rec.episode_index = index;
    rec.status = res.status;
    rec.iterations_used = res.iterations_used;
    rec.shipped = res.joint ? *res.joint : fallback_joint(def.roster, &ctx);
    rec.phi_value = eval_phi(def.bundle, state, rec.shipped).value;
    RiskReport rr = res.joint ? res.final_risk
                              : joint_risk(def.risk_profile, reg, def.roster, state, rec.shipped,
                                           cfg.tau);
    rec.risk_total = rr.total;
    rec.risk_ratio = rr.ratio;
    rec.utility = joint_utility(reg, def.roster, state, rec.shipped);
    rec.raw_optimum = raw_joint_optimum(reg, def.roster, state);
    // Degenerate rosters can have a zero unconstrained optimum; score them
    // as fully retained rather than dividing by zero.
    rec.retention_pct = rec.raw_optimum > 1e-12 ? 100.0 * rec.utility / rec.raw_optimum : 100.0;
    return rec;
}

/// Called once per episode, in index order, before the fold.
using EpisodeObserver = std::function<void(const EpisodeRecord&, const EnterpriseState&,
                                           const NegotiationOutcome&)>;

inline BatchResult run_batch(const FunctionRegistry& reg, const ScenarioDefinition& def,
                             CoordinatorKind kind, std::size_t episodes, std::uint64_t run_seed,
                             std::optional<CoordinationConfig> config_override = std::nullopt,
                             const EpisodeObserver& observer = {}) {
    ScenarioDefinition local = def;
    local.seed = run_seed;
    CoordinationConfig cfg = config_override ? *config_override : def.defaults;
    cfg.validate();
    const std::string coordinator = to_string(kind);

    std::vector<EpisodeRecord> records;
    records.reserve(episodes);
    for (std::size_t i = 0; i < episodes; ++i) {
        EnterpriseState state = sample_episode_state(local, i);
        EpisodeContext ctx;
        ctx.episode_id = local.name + ":" + coordinator + ":" + std::to_string(run_seed) + ":" +
                         std::to_string(i);
        NegotiationOutcome res = run_coordinator(kind, reg, local.roster, state, local.bundle,
                                                 local.risk_profile, cfg, &ctx);
        EpisodeRecord rec = build_episode_record(reg, local, cfg, ctx, i, state, res);
        if (observer) observer(rec, state, res);
        records.push_back(std::move(rec));
    }
    return fold_records(local.name, coordinator, run_seed, cfg.tau, std::move(records));
}

inline std::vector<double> default_tau_grid() { return {0.4, 0.6, 0.8, 1.0, 1.2, 1.4}; }

/// One batch per grid point; every other knob stays at the scenario's
/// defaults.
inline std::vector<BatchResult> tau_sensitivity_sweep(
    const FunctionRegistry& reg, const ScenarioDefinition& def, CoordinatorKind kind,
    std::size_t episodes, std::uint64_t run_seed, std::vector<double> grid = default_tau_grid(),
    const EpisodeObserver& observer = {}) {
    std::vector<BatchResult> out;
    out.reserve(grid.size());
    for (double tau : grid) {
        CoordinationConfig cfg = def.defaults;
        cfg.tau = tau;
        out.push_back(run_batch(reg, def, kind, episodes, run_seed, cfg, observer));
    }
    return out;
}

// --- serialization ---------------------------------------------------------

inline json to_json(const EpisodeRecord& r) {
    return json{{"episode_id", r.episode_id},
                {"index", r.episode_index},
                {"status", to_string(r.status)},
                {"iterations", r.iterations_used},
                {"phi", r.phi_value},
                {"risk_total", r.risk_total},
                {"risk_ratio", r.risk_ratio},
                {"utility", r.utility},
                {"raw_optimum", r.raw_optimum},
                {"retention_pct", r.retention_pct},
                {"shipped", to_json(r.shipped)}};
}

inline EpisodeRecord episode_record_from_json(const json& j) {
    EpisodeRecord r;
    r.episode_id = j.at("episode_id").get<std::string>();
    r.episode_index = j.at("index").get<std::size_t>();
    r.status = status_from_string(j.at("status").get<std::string>());
    r.iterations_used = j.at("iterations").get<int>();
    r.phi_value = j.at("phi").get<int>();
    r.risk_total = j.at("risk_total").get<double>();
    r.risk_ratio = j.at("risk_ratio").get<double>();
    r.utility = j.at("utility").get<double>();
    r.raw_optimum = j.at("raw_optimum").get<double>();
    r.retention_pct = j.at("retention_pct").get<double>();
    r.shipped = joint_from_json(j.at("shipped"));
    return r;
}

inline json summary_json(const BatchResult& b) {
    return json{{"scenario", b.scenario_id},
                {"coordinator", b.coordinator},
                {"seed", b.seed},
                {"tau", b.tau},
                {"episodes", b.episodes},
                {"violation_rate", b.violation_rate},
                {"episode_violation_rate", b.episode_violation_rate},
                {"mean_risk_ratio", b.mean_risk_ratio},
                {"deadlock_rate", b.deadlock_rate},
                {"mean_convergence_iterations", b.mean_convergence_iterations},
                {"utility_retention_pct", b.utility_retention_pct}};
}

inline json to_json(const BatchResult& b) {
    json j = summary_json(b);
    json eps = json::array();
    for (const auto& r : b.per_episode) eps.push_back(to_json(r));
    j["per_episode"] = std::move(eps);
    return j;
}

inline BatchResult batch_from_json(const json& j) {
    BatchResult b;
    b.scenario_id = j.at("scenario").get<std::string>();
    b.coordinator = j.at("coordinator").get<std::string>();
    b.seed = j.at("seed").get<std::uint64_t>();
    b.tau = j.at("tau").get<double>();
    b.episodes = j.at("episodes").get<std::size_t>();
    b.violation_rate = j.at("violation_rate").get<double>();
    b.episode_violation_rate = j.at("episode_violation_rate").get<double>();
    b.mean_risk_ratio = j.at("mean_risk_ratio").get<double>();
    b.deadlock_rate = j.at("deadlock_rate").get<double>();
    b.mean_convergence_iterations = j.at("mean_convergence_iterations").get<double>();
    b.utility_retention_pct = j.at("utility_retention_pct").get<double>();
    for (const auto& e : j.at("per_episode")) b.per_episode.push_back(episode_record_from_json(e));
    return b;
}

// --- emitters ---------------------------------------------------------------

enum class EmitFormat { Csv, Table, JsonLines };

inline EmitFormat emit_format_from_string(std::string_view s) {
    if (s == "csv") return EmitFormat::Csv;
    if (s == "table") return EmitFormat::Table;
    if (s == "json-lines") return EmitFormat::JsonLines;
    throw ConfigInvalid("emit format '" + std::string(s) +
                        "' (expected csv, table, or json-lines)");
}

inline std::string emit_csv(const std::vector<BatchResult>& rows) {
    std::string out =
        "scenario,coordinator,seed,tau,episodes,violation_pct,episode_violation_pct,"
        "mean_risk_ratio,deadlock_pct,mean_convergence_iterations,utility_retention_pct\n";
    for (const auto& b : rows) {
        out += b.scenario_id + "," + b.coordinator + "," + std::to_string(b.seed) + "," +
               canonical_double(b.tau) + "," + std::to_string(b.episodes) + "," +
               canonical_double(100.0 * b.violation_rate) + "," +
               canonical_double(100.0 * b.episode_violation_rate) + "," +
               canonical_double(b.mean_risk_ratio) + "," +
               canonical_double(100.0 * b.deadlock_rate) + "," +
               canonical_double(b.mean_convergence_iterations) + "," +
               canonical_double(b.utility_retention_pct) + "\n";
    }
    return out;
}

inline std::string emit_table(const std::vector<BatchResult>& rows) {
    char line[160];
    std::string out;
    std::snprintf(line, sizeof line, "%-6s %-7s %8s %11s %8s %7s %8s\n", "Scen.", "Method",
                  "Viol.%", "Risk ratio", "Dead.%", "Conv.", "Util.%");
    out += line;
    for (const auto& b : rows) {
        std::snprintf(line, sizeof line, "%-6s %-7s %8.2f %11.3f %8.2f %7.2f %8.2f\n",
                      b.scenario_id.c_str(), b.coordinator.c_str(), 100.0 * b.violation_rate,
                      b.mean_risk_ratio, 100.0 * b.deadlock_rate, b.mean_convergence_iterations,
                      b.utility_retention_pct);
        out += line;
    }
    return out;
}

inline std::string emit_json_lines(const std::vector<BatchResult>& rows) {
    std::string out;
    for (const auto& b : rows) out += summary_json(b).dump() + "\n";
    return out;
}

inline std::string emit(const std::vector<BatchResult>& rows, EmitFormat format) {
    switch (format) {
        case EmitFormat::Csv: return emit_csv(rows);
        case EmitFormat::Table: return emit_table(rows);
        case EmitFormat::JsonLines: return emit_json_lines(rows);
    }
    throw ConfigInvalid("unknown emit format");
}

} // namespace camco
