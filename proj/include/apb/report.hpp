// Canonical text reports: fixed section and key order, integer counts and
// reduced fractions only, so identical runs serialize to identical bytes.
#pragma once

#include <numeric>
#include <sstream>
#include <string>

#include "apb/rounds.hpp"
#include "apb/scenario.hpp"

namespace apb {

struct Provenance {
    std::uint64_t seed = 0;
    Variant variant = Variant::v2;
    int rounds = 0;
};

inline std::string variant_name(Variant v) { return v == Variant::v1 ? "v1" : "v2"; }

inline std::string serialize_report(const RoundLedger& ledger, const MetricsReport& metrics,
                                    const Provenance& prov) {
    std::ostringstream out;
    out << "[REPORT]\n";
    out << "seed = " << prov.seed << "\n";
    out << "variant = " << variant_name(prov.variant) << "\n";
    out << "rounds = " << prov.rounds << "\n";
    for (std::size_t r = 0; r < ledger.rounds.size(); ++r) {
        const auto& round = ledger.rounds[r];
        out << "[ROUND " << r + 1 << "]\n";
        for (const auto& [id, entry] : round.entries) {
            out << id << " | " << (entry.proposal ? *entry.proposal : "-") << " | "
                << (entry.answer ? answer_name(*entry.answer) : "-") << "\n";
        }
        out << "[TIEBREAKS " << r + 1 << "]\n";
        for (const auto& tb : round.tiebreaks)
            out << tb.study << " | " << tb.event.cell << " | " << tb.event.size << "\n";
    }
    out << "[FINAL]\n";
    for (const auto& [id, assignment] : ledger.final_assignment)
        out << id << " | " << (assignment ? *assignment : "-") << "\n";
    out << "[DELAYED_CHOICE]\n";
    for (const auto& [id, options] : ledger.delayed_choices)
        out << id << " | " << detail::join(options, ",") << "\n";
    out << "[METRICS]\n";
    out << "random_cells = " << metrics.random_cells << "\n";
    out << "tie_exposed_applicants = " << metrics.tie_exposed_applicants << "\n";
    out << "assigned = " << metrics.assigned << "\n";
    out << "unassigned = " << metrics.unassigned << "\n";
    out << "forced_linear_applicants = " << metrics.forced_linear_applicants << "\n";
    out << "wish_rank_counts =";
    for (const auto& [cls, count] : metrics.wish_rank_counts) out << " " << cls << ":" << count;
    out << "\n";
    out << "wish_rank_fractions =";
    for (const auto& [cls, count] : metrics.wish_rank_counts) {
        const long g = std::gcd(count, metrics.assigned);
        out << " " << cls << ":" << count / g << "/" << metrics.assigned / g;
    }
    out << "\n";
    return out.str();
}

}  // namespace apb
