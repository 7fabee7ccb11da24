#pragma once

/**
 * Audit log persistence and replay. Logs are newline-delimited JSON,
 * append-only: one header record, then for each episode a state record
 * followed by its decision events. A reader tolerates a crash-torn final
 * line (discarded, flagged) but treats any other malformed record as
 * corruption and says which record.
 *
 * Replay re-runs every logged episode from its recorded state and
 * compares each recomputed event against the log byte for byte, so a
 * tampered risk total, multiplier step, or verdict is pinned to the
 * exact record index.
 */

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "camco/metrics.hpp"

namespace camco {

struct AuditHeader {
    std::string scenario;    // "s1" | "s2" | "s3"
    std::string coordinator; // "camco" | "b1" | ... | "b4"
    std::uint64_t run_seed = 0;
    std::size_t episodes = 0;
    CoordinationConfig config;
};

inline json to_json(const AuditHeader& h) {
    return json{{"schema", kAuditSchema}, {"kind", "header"},
                {"scenario", h.scenario},  {"coordinator", h.coordinator},
                {"run_seed", h.run_seed},  {"episodes", h.episodes},
                {"config", to_json(h.config)}};
}

inline AuditHeader audit_header_from_json(const json& j) {
    if (j.value("schema", "") != kAuditSchema)
        throw SchemaMismatch("audit header schema '" + j.value("schema", "") + "'");
    AuditHeader h;
    h.scenario = j.at("scenario").get<std::string>();
    h.coordinator = j.at("coordinator").get<std::string>();
    h.run_seed = j.at("run_seed").get<std::uint64_t>();
    h.episodes = j.at("episodes").get<std::size_t>();
    h.config = config_from_json(j.at("config"));
    return h;
}

inline json to_json(const AuditEvent& ev) {
    return json{{"kind", "event"},
                {"episode_id", ev.episode_id},
                {"iteration", ev.iteration},
                {"agent_id", ev.agent_id},
                {"event", to_string(ev.kind)},
                {"payload", ev.payload},
                {"timestamp", ev.timestamp}};
}

inline AuditEvent audit_event_from_json(const json& j) {
    AuditEvent ev;
    ev.episode_id = j.at("episode_id").get<std::string>();
    ev.iteration = j.at("iteration").get<int>();
    ev.agent_id = j.at("agent_id").get<std::string>();
    ev.kind = audit_kind_from_string(j.at("event").get<std::string>());
    ev.payload = j.at("payload");
    ev.timestamp = j.at("timestamp").get<std::uint64_t>();
    return ev;
}

struct AuditLog {
    struct Episode {
        std::string episode_id;
        std::size_t index = 0;
        EnterpriseState state;
        std::vector<AuditEvent> events;
        std::size_t record_index = 0;            // line of the state record
        std::vector<std::size_t> event_records;  // line of each event
    };
    AuditHeader header;
    std::vector<Episode> episodes;
    bool truncated_tail_discarded = false;
};

/// Streams a batch to disk as it runs; the episode method plugs straight
/// into the batch runner's observer slot.
class AuditWriter {
public:
    AuditWriter(std::string path, const AuditHeader& header) : out_(path, std::ios::trunc) {
        if (!out_) throw IoError("cannot open audit log '" + path + "' for writing");
        path_ = std::move(path);
        line(to_json(header));
    }

    void episode(const EpisodeRecord& rec, const EnterpriseState& state,
                 const NegotiationOutcome& outcome) {
        line(json{{"kind", "episode"},
                  {"episode_id", rec.episode_id},
                  {"index", rec.episode_index},
                  {"state", to_json(state)}});
        for (const auto& ev : outcome.audit) line(to_json(ev));
        out_.flush(); // bound tail loss to the episode being written
        if (!out_) throw IoError("write to audit log '" + path_ + "' failed");
    }

private:
    void line(const json& j) { out_ << j.dump() << '\n'; }

    std::ofstream out_;
    std::string path_;
};

inline AuditLog parse_audit_log(std::string_view content) {
    AuditLog log;
    std::size_t pos = 0, index = 0;
    bool saw_header = false;
    while (pos < content.size()) {
        std::size_t nl = content.find('\n', pos);
        const bool terminated = nl != std::string_view::npos;
        std::string_view text = content.substr(pos, terminated ? nl - pos : std::string_view::npos);
        pos = terminated ? nl + 1 : content.size();

        json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded()) {
            if (!terminated) {
                // Torn tail from an interrupted append; drop it and say so.
                log.truncated_tail_discarded = true;
                break;
            }
            throw AuditParseError(index, "record is not valid JSON");
        }

        const std::string kind = j.value("kind", "");
        if (!saw_header) {
            if (kind != "header") throw AuditParseError(index, "first record must be the header");
            log.header = audit_header_from_json(j);
            saw_header = true;
        } else if (kind == "episode") {
            AuditLog::Episode ep;
            ep.episode_id = j.at("episode_id").get<std::string>();
            ep.index = j.at("index").get<std::size_t>();
            ep.state = state_from_json(j.at("state"));
            ep.record_index = index;
            if (ep.index != log.episodes.size())
                throw AuditParseError(index, "episode index " + std::to_string(ep.index) +
                                                 " out of order");
            log.episodes.push_back(std::move(ep));
        } else if (kind == "event") {
            if (log.episodes.empty())
                throw AuditParseError(index, "event record before any episode record");
            AuditEvent ev = audit_event_from_json(j);
            if (ev.episode_id != log.episodes.back().episode_id)
                throw AuditParseError(index, "event for '" + ev.episode_id +
                                                 "' inside episode '" +
                                                 log.episodes.back().episode_id + "'");
            log.episodes.back().events.push_back(std::move(ev));
            log.episodes.back().event_records.push_back(index);
        } else {
            throw AuditParseError(index, "unknown record kind '" + kind + "'");
        }
        ++index;
    }
    if (!saw_header) throw AuditParseError(0, "log has no header record");
    return log;
}

inline AuditLog read_audit_log(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open audit log '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_audit_log(buf.str());
}

// --- replay verification ----------------------------------------------------

struct Divergence {
    std::size_t record_index = 0;
    std::string episode_id;
    std::string what; // one line: what differs at that record
};

struct VerifyReport {
    std::vector<Divergence> divergences;
    std::vector<std::string> result_mismatches; // stored vs recomputed summary fields
    bool truncated_tail_discarded = false;
    std::size_t episodes_checked = 0;
    std::size_t events_checked = 0;
    BatchResult recomputed;

    bool ok() const { return divergences.empty() && result_mismatches.empty(); }
};

namespace detail {

inline void compare_summary_field(std::vector<std::string>& out, const char* name, double stored,
                                  double recomputed) {
    if (stored != recomputed)
        out.push_back(std::string(name) + ": stored " + canonical_double(stored) +
                      " != replayed " + canonical_double(recomputed));
}

} // namespace detail

/// Re-runs every logged episode from its recorded state and compares the
/// recomputed decision stream against the log. When a stored summary is
/// supplied its metrics are held to the replayed fold as well.
inline VerifyReport verify_audit_log(const FunctionRegistry& reg, const AuditLog& log,
                                     const BatchResult* stored = nullptr) {
    VerifyReport rep;
    rep.truncated_tail_discarded = log.truncated_tail_discarded;

    ScenarioDefinition def =
        build_scenario(scenario_from_string(log.header.scenario), log.header.run_seed);
    const CoordinatorKind kind = coordinator_from_string(log.header.coordinator);
    const CoordinationConfig& cfg = log.header.config;
    cfg.validate();

    std::vector<EpisodeRecord> records;
    records.reserve(log.episodes.size());
    for (const auto& ep : log.episodes) {
        EpisodeContext ctx;
        ctx.episode_id = ep.episode_id;
        NegotiationOutcome out = run_coordinator(kind, reg, def.roster, ep.state, def.bundle,
                                                 def.risk_profile, cfg, &ctx);
        const std::size_t n = std::min(ep.events.size(), out.audit.size());
        for (std::size_t i = 0; i < n; ++i) {
            ++rep.events_checked;
            std::string logged = to_json(ep.events[i]).dump();
            std::string replayed = to_json(out.audit[i]).dump();
            if (logged != replayed)
                rep.divergences.push_back(
                    {ep.event_records[i], ep.episode_id,
                     "logged " + logged + " != replayed " + replayed});
        }
        for (std::size_t i = n; i < ep.events.size(); ++i)
            rep.divergences.push_back({ep.event_records[i], ep.episode_id,
                                       "logged event has no replayed counterpart"});
        if (out.audit.size() > n)
            rep.divergences.push_back({ep.event_records.empty() ? ep.record_index
                                                                : ep.event_records.back(),
                                       ep.episode_id,
                                       std::to_string(out.audit.size() - n) +
                                           " replayed events missing from the log"});
        records.push_back(build_episode_record(reg, def, cfg, ctx, ep.index, ep.state, out));
        ++rep.episodes_checked;
    }

    rep.recomputed = fold_records(log.header.scenario, log.header.coordinator,
                                  log.header.run_seed, cfg.tau, std::move(records));
    if (stored) {
        auto& out = rep.result_mismatches;
        if (stored->episodes != rep.recomputed.episodes)
            out.push_back("episodes: stored " + std::to_string(stored->episodes) +
                          " != replayed " + std::to_string(rep.recomputed.episodes));
        detail::compare_summary_field(out, "violation_rate", stored->violation_rate,
                                      rep.recomputed.violation_rate);
        detail::compare_summary_field(out, "episode_violation_rate",
                                      stored->episode_violation_rate,
                                      rep.recomputed.episode_violation_rate);
        detail::compare_summary_field(out, "mean_risk_ratio", stored->mean_risk_ratio,
                                      rep.recomputed.mean_risk_ratio);
        detail::compare_summary_field(out, "deadlock_rate", stored->deadlock_rate,
                                      rep.recomputed.deadlock_rate);
        detail::compare_summary_field(out, "mean_convergence_iterations",
                                      stored->mean_convergence_iterations,
                                      rep.recomputed.mean_convergence_iterations);
        detail::compare_summary_field(out, "utility_retention_pct",
                                      stored->utility_retention_pct,
                                      rep.recomputed.utility_retention_pct);
    }
    return rep;
}

} // namespace camco
