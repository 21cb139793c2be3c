// End-to-end orchestration shared by the command-line tool and the test
// suites: effective configuration, single runs, v1/v2 comparisons and the
// enumeration-oracle check.
#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "apb/matching.hpp"
#include "apb/report.hpp"
#include "apb/rounds.hpp"
#include "apb/scenario.hpp"

namespace apb {

enum class RunMode { run, compare, oracle_check };

// A resolved invocation: scenario path plus command-line overrides, which
// supersede the scenario's [CONFIG] values.
struct RunSpec {
    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    std::optional<Variant> variant;
    std::optional<int> num_rounds;
    std::optional<bool> foreign_bac_first;
    std::optional<int> max_disj;
    RunMode mode = RunMode::run;
};

inline RunConfig effective_config(const Scenario& sc, const RunSpec& spec) {
    RunConfig cfg = RunConfig::from_scenario(sc.config);
    if (spec.seed) cfg.seed = *spec.seed;
    if (spec.variant) cfg.variant = *spec.variant;
    if (spec.num_rounds) cfg.num_rounds = *spec.num_rounds;
    if (spec.foreign_bac_first) cfg.foreign_bac_first = *spec.foreign_bac_first;
    if (spec.max_disj) cfg.max_disj = *spec.max_disj;
    return cfg;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io, "cannot read scenario file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

inline std::string run_report(const Scenario& sc, const RunConfig& cfg) {
    RunResult result = run_rounds(sc, cfg);
    return serialize_report(result.ledger, result.metrics, {cfg.seed, cfg.variant, cfg.num_rounds});
}

// Runs v1 (tied relations forced into seed-determined strict orders) and v2
// on the same scenario and seed, then reports both metric sets side by side
// together with the tie-exposure comparison.
inline std::string compare_report(const Scenario& sc, RunConfig cfg) {
    RunConfig cfg_v1 = cfg;
    cfg_v1.variant = Variant::v1;
    RunConfig cfg_v2 = cfg;
    cfg_v2.variant = Variant::v2;
    RunResult r1 = run_rounds(sc, cfg_v1);
    RunResult r2 = run_rounds(sc, cfg_v2);

    std::ostringstream out;
    out << "[COMPARE]\n";
    out << "seed = " << cfg.seed << "\n";
    out << "rounds = " << cfg.num_rounds << "\n";
    out << "=== v1 ===\n";
    out << serialize_report(r1.ledger, r1.metrics, {cfg.seed, Variant::v1, cfg.num_rounds});
    out << "=== v2 ===\n";
    out << serialize_report(r2.ledger, r2.metrics, {cfg.seed, Variant::v2, cfg.num_rounds});
    out << "=== CHECK ===\n";
    const bool ok = r2.metrics.tie_exposed_applicants <= r1.metrics.tie_exposed_applicants;
    out << "refinement_tie_exposed = " << (ok ? "pass" : "fail") << " (v2 "
        << r2.metrics.tie_exposed_applicants << " <= v1 " << r1.metrics.tie_exposed_applicants
        << ")\n";
    return out.str();
}

inline std::string format_matching(const Matching& m) {
    std::string out;
    for (std::size_t i = 0; i < m.pairs.size(); ++i) {
        if (i) out += ",";
        out += m.pairs[i].first + ":" + m.pairs[i].second;
    }
    return out.empty() ? "-" : out;
}

struct OracleOutcome {
    std::string report;
    bool passed = false;
};

// Builds the round-1 instance, enumerates every stable matching exhaustively,
// and checks that the engine's result is a member and proposer-optimal within
// the enumerated set.
inline OracleOutcome oracle_check_report(const Scenario& sc, const RunConfig& cfg,
                                         double search_limit = 1e6) {
    MatchInstance inst = first_round_instance(sc, cfg);
    auto stable = enumerate_stable_matchings(inst, search_limit);
    Matching engine = deferred_acceptance(inst);

    const bool member = std::find(stable.begin(), stable.end(), engine) != stable.end();

    // Proposer-optimality against the enumerated set: per proposer, the
    // sorted vector of partner ranks (padded with "unmatched" slots) must be
    // elementwise at least as good as in every other stable matching. With
    // unit capacities this is the classic partner-by-partner statement.
    bool optimal = true;
    for (const auto& p : inst.proposers) {
        const auto& list = inst.proposer_prefs.at(p);
        const std::size_t cap = static_cast<std::size_t>(inst.capacity_of_proposer(p));
        auto rank_vector = [&](const Matching& m) {
            std::vector<long> ranks;
            for (const auto& r : m.receivers_of(p))
                ranks.push_back(std::find(list.begin(), list.end(), r) - list.begin());
            std::sort(ranks.begin(), ranks.end());
            ranks.resize(cap, static_cast<long>(list.size()));
            return ranks;
        };
        const auto mine = rank_vector(engine);
        for (const auto& other : stable) {
            const auto theirs = rank_vector(other);
            for (std::size_t k = 0; k < cap; ++k)
                if (theirs[k] < mine[k]) optimal = false;
        }
    }

    std::ostringstream out;
    out << "[ORACLE_CHECK]\n";
    out << "seed = " << cfg.seed << "\n";
    out << "variant = " << variant_name(cfg.variant) << "\n";
    out << "stable_matchings = " << stable.size() << "\n";
    for (const auto& m : stable) out << "matching | " << format_matching(m) << "\n";
    out << "engine = " << format_matching(engine) << "\n";
    out << "membership = " << (member ? "pass" : "fail") << "\n";
    out << "proposer_optimality = " << (optimal ? "pass" : "fail") << "\n";
    return {out.str(), member && optimal};
}

}  // namespace apb
