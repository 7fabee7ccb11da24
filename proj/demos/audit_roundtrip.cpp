// Writes an audit log for a short run, replays it through the verifier, then
// corrupts one byte and shows the verifier pinning the divergent record.

#include <cstdio>
#include <filesystem>
#include <string>

#include "camco/harness.hpp"

using namespace camco;

int main() {
    FunctionRegistry reg = evaluation_registry();
    ScenarioDefinition def = build_scenario(ScenarioId::S1, /*seed=*/3);

    const std::string dir =
        (std::filesystem::temp_directory_path() / "camco_audit_roundtrip").string();
    std::filesystem::create_directories(dir);
    const std::string audit_path = dir + "/audit_s1_camco.jsonl";

    AuditHeader hdr;
    hdr.scenario = def.name;
    hdr.coordinator = to_string(CoordinatorKind::CAMCO);
    hdr.run_seed = def.seed;
    hdr.episodes = 40;
    hdr.config = def.defaults;
    {
        AuditWriter writer(audit_path, hdr);
        run_batch(reg, def, CoordinatorKind::CAMCO, hdr.episodes, hdr.run_seed, std::nullopt,
                  [&](const EpisodeRecord& r, const EnterpriseState& s,
                      const NegotiationOutcome& o) { writer.episode(r, s, o); });
    }

    VerifyReport clean = verify_audit_file(reg, audit_path);
    std::printf("clean log:    %zu episodes, %zu events, %zu divergences\n", clean.episodes_checked,
                clean.events_checked, clean.divergences.size());

    // Flip one digit inside a recorded risk figure and re-verify.
    std::string bytes = read_text_file(audit_path);
    auto pos = bytes.find("\"risk\":0.");
    if (pos == std::string::npos) {
        std::fprintf(stderr, "no risk figure found to tamper with\n");
        return 1;
    }
    bytes[pos + 9] = bytes[pos + 9] == '9' ? '1' : '9';
    write_text_file(audit_path, bytes);

    VerifyReport tampered = verify_audit_file(reg, audit_path);
    std::printf("tampered log: %zu divergences\n", tampered.divergences.size());
    for (const auto& d : tampered.divergences)
        std::printf("  record %zu (%s): %s\n", d.record_index, d.episode_id.c_str(),
                    d.what.c_str());

    std::filesystem::remove_all(dir);
    return tampered.divergences.empty() ? 1 : 0;
}
