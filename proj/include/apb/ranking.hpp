// Institution-side candidate ranking. Two builders produce a study's strict
// total order over applicants from the applicants' wish partitions: v1 splits
// candidates by (local, relative rank, absolute rank) and shuffles each cell;
// v2 additionally splits by disjunction size so that applicants with more
// specific wishes come first and fewer cells need a random order.
#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "apb/core.hpp"
#include "apb/preference.hpp"

namespace apb {

// Wish-list placement of one study inside one applicant's preferences, under
// class-index semantics: absolute = index of the study's equivalence class,
// relative = index among classes containing a study of the same family,
// disjunction = size of the study's class.
struct WishRank {
    int relative = 0;
    int absolute = 0;
    int disjunction = 0;
    bool operator==(const WishRank&) const = default;
};

inline constexpr int kMaxWishRank = 24;  // the platform caps wish lists at 24

// Ranks of every study in a linearized wish partition.
//
// Throws Error(unknown_id) if a ranked study has no family tag.
inline std::map<ObjectId, WishRank> compute_wish_ranks(
    const OrderedPartition& prefs, const std::map<ObjectId, std::string>& family_of) {
    std::map<ObjectId, WishRank> out;
    std::map<std::string, int> classes_seen_of_family;
    for (std::size_t i = 0; i < prefs.classes.size(); ++i) {
        const auto& cls = prefs.classes[i];
        std::vector<std::string> families_here;
        for (const auto& study : cls) {
            auto fit = family_of.find(study);
            if (fit == family_of.end())
                throw Error(Errc::unknown_id, "ranked study '" + study + "' has no family tag");
            families_here.push_back(fit->second);
        }
        std::sort(families_here.begin(), families_here.end());
        families_here.erase(std::unique(families_here.begin(), families_here.end()),
                            families_here.end());
        for (const auto& fam : families_here) ++classes_seen_of_family[fam];
        for (const auto& study : cls) {
            WishRank r;
            r.absolute = static_cast<int>(i) + 1;
            r.relative = classes_seen_of_family.at(family_of.at(study));
            r.disjunction = static_cast<int>(cls.size());
            out.emplace(study, r);
        }
    }
    return out;
}

struct RankingConfig {
    bool foreign_bac_first = false;
    int max_disj = kMaxWishRank;
};

// One applicant as a study sees it when building its list.
struct CandidateSnapshot {
    std::string id;
    std::string academy;
    bool bac_abroad = false;
    OrderedPartition wishes;   // linearized (optimistic) active preferences
    bool strict_total = true;  // the underlying relation is a strict total order
};

// One seeded shuffle of a cell holding two or more equivalent candidates.
struct TiebreakEvent {
    std::string cell;
    int size = 0;
    bool operator==(const TiebreakEvent&) const = default;
};

struct RankedCandidateList {
    std::string study;
    std::vector<std::string> entries;
    std::vector<TiebreakEvent> tiebreak_events;

    long tie_exposed() const {
        long n = 0;
        for (const auto& ev : tiebreak_events) n += ev.size;
        return n;
    }
};

namespace detail {

enum class CandidateBlock { abroad, local, nonlocal };

inline const char* block_name(CandidateBlock b) {
    switch (b) {
        case CandidateBlock::abroad: return "abroad";
        case CandidateBlock::local: return "local";
        case CandidateBlock::nonlocal: return "nonlocal";
    }
    return "?";
}

struct RankedCandidate {
    const CandidateSnapshot* snap;
    WishRank rank;
};

inline std::vector<RankedCandidate> rank_pool(const std::string& study_id,
                                              std::span<const CandidateSnapshot> pool,
                                              const std::map<ObjectId, std::string>& family_of) {
    std::vector<RankedCandidate> ranked;
    ranked.reserve(pool.size());
    for (const auto& snap : pool) {
        auto ranks = compute_wish_ranks(snap.wishes, family_of);
        auto it = ranks.find(study_id);
        if (it == ranks.end())
            throw Error(Errc::invalid_scenario, "candidate '" + snap.id +
                                                    "' did not rank study '" + study_id + "'");
        if (it->second.absolute > kMaxWishRank)
            throw Error(Errc::rank_overflow, "candidate '" + snap.id + "' ranks study '" +
                                                 study_id + "' beyond class " +
                                                 std::to_string(kMaxWishRank));
        ranked.push_back({&snap, it->second});
    }
    return ranked;
}

inline CandidateBlock block_of(const CandidateSnapshot& snap, const std::string& study_academy,
                               const RankingConfig& cfg) {
    if (cfg.foreign_bac_first && snap.bac_abroad) return CandidateBlock::abroad;
    return snap.academy == study_academy ? CandidateBlock::local : CandidateBlock::nonlocal;
}

// Appends one cell: canonical pre-shuffle order, one shuffle when two or more
// candidates are equivalent, one recorded event per such shuffle.
inline void emit_cell(std::vector<const CandidateSnapshot*>& cell, const std::string& label,
                      Rng& rng, RankedCandidateList& out) {
    if (cell.empty()) return;
    std::sort(cell.begin(), cell.end(),
              [](const CandidateSnapshot* a, const CandidateSnapshot* b) { return a->id < b->id; });
    if (cell.size() > 1) {
        rng.shuffle(cell);
        out.tiebreak_events.push_back({label, static_cast<int>(cell.size())});
    }
    for (const auto* snap : cell) out.entries.push_back(snap->id);
    cell.clear();
}

// Shared cell machinery. Cells are visited in the loop order of the two
// builders: block, then relative, then absolute, then (for v2) disjunction
// with an overflow cell after max_disj. Grouping first and walking the sorted
// keys produces the same order and the same draw sequence as the literal
// loops, since empty cells consume no randomness.
inline RankedCandidateList build_by_cells(const std::string& study_id,
                                          const std::string& study_academy,
                                          std::span<const CandidateSnapshot> pool,
                                          const std::map<ObjectId, std::string>& family_of,
                                          std::uint64_t global_seed, const RankingConfig& cfg,
                                          bool split_disjunction) {
    auto ranked = rank_pool(study_id, pool, family_of);
    Rng rng = seeded_rng(global_seed, study_id);
    RankedCandidateList out;
    out.study = study_id;

    using CellKey = std::tuple<int, int, int, int>;  // block, relative, absolute, disjunction
    std::map<CellKey, std::vector<const CandidateSnapshot*>> cells;
    for (const auto& rc : ranked) {
        const auto block = block_of(*rc.snap, study_academy, cfg);
        int d = 0;
        if (split_disjunction)
            d = rc.rank.disjunction <= cfg.max_disj ? rc.rank.disjunction : cfg.max_disj + 1;
        cells[{static_cast<int>(block), rc.rank.relative, rc.rank.absolute, d}].push_back(rc.snap);
    }
    for (auto& [key, cell] : cells) {
        const auto& [block, r, a, d] = key;
        std::string label = std::string(block_name(static_cast<CandidateBlock>(block))) +
                            " r=" + std::to_string(r) + " a=" + std::to_string(a);
        if (split_disjunction)
            label += d > cfg.max_disj ? " d>" + std::to_string(cfg.max_disj)
                                      : " d=" + std::to_string(d);
        emit_cell(cell, label, rng, out);
    }
    return out;
}

}  // namespace detail

// Original builder. Candidates must hold strict total orders; the cells are
// (block, relative, absolute) and every cell with two or more candidates is
// randomly ordered. Blocks run abroad (only when foreign_bac_first is set),
// then locals, then non-locals; within a block the relative loop dominates
// the absolute loop.
//
// Throws Error(ties_present) if any candidate's relation is not a strict
// total order.
inline RankedCandidateList build_preferences_v1(const std::string& study_id,
                                                const std::string& study_academy,
                                                std::span<const CandidateSnapshot> pool,
                                                const std::map<ObjectId, std::string>& family_of,
                                                std::uint64_t global_seed,
                                                const RankingConfig& cfg = {}) {
    for (const auto& snap : pool)
        if (!snap.strict_total)
            throw Error(Errc::ties_present,
                        "candidate '" + snap.id + "' does not hold a strict total order");
    return detail::build_by_cells(study_id, study_academy, pool, family_of, global_seed, cfg,
                                  /*split_disjunction=*/false);
}

// Indifference-aware builder. Candidates may hold any valid preorder,
// linearized upstream; cells gain an innermost disjunction-size loop, so two
// candidates compete on disjunction only when tied on (block, relative,
// absolute). Candidates whose disjunction exceeds max_disj land in one
// overflow cell placed after the d <= max_disj cells of the same (block, r, a).
inline RankedCandidateList build_preferences_v2(const std::string& study_id,
                                                const std::string& study_academy,
                                                std::span<const CandidateSnapshot> pool,
                                                const std::map<ObjectId, std::string>& family_of,
                                                std::uint64_t global_seed,
                                                const RankingConfig& cfg = {}) {
    return detail::build_by_cells(study_id, study_academy, pool, family_of, global_seed, cfg,
                                  /*split_disjunction=*/true);
}

}  // namespace apb
