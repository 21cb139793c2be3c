// The multi-round proposal/answer process. Each round rebuilds institution
// lists over the still-active applicants and their still-active wishes, runs
// one capacitated institution-proposing deferred acceptance, hands every
// matched applicant her single proposal, and applies her policy answer. Seats
// released by an answer become available at the next round's capacity
// snapshot, never within the same round.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "apb/core.hpp"
#include "apb/matching.hpp"
#include "apb/preference.hpp"
#include "apb/ranking.hpp"
#include "apb/scenario.hpp"

namespace apb {

struct RunConfig {
    std::uint64_t seed = 0;
    Variant variant = Variant::v2;
    int num_rounds = 3;
    bool foreign_bac_first = false;
    int max_disj = kMaxWishRank;

    static RunConfig from_scenario(const ScenarioConfig& c) {
        return {c.seed, c.variant, c.num_rounds, c.foreign_bac_first, c.max_disj};
    }
};

struct RoundEntry {
    std::optional<std::string> proposal;  // study id, absent = no proposal this round
    std::optional<AnswerKind> answer;     // absent when there was no proposal

    bool operator==(const RoundEntry&) const = default;
};

struct StudyTiebreak {
    std::string study;
    TiebreakEvent event;
    bool operator==(const StudyTiebreak&) const = default;
};

struct RoundRecord {
    std::map<std::string, RoundEntry> entries;  // applicants still in the process
    std::vector<StudyTiebreak> tiebreaks;
    std::map<std::string, int> seats_held_after;  // commits + held seats per study

    bool operator==(const RoundRecord&) const = default;
};

struct RoundLedger {
    std::vector<RoundRecord> rounds;
    std::map<std::string, std::optional<std::string>> final_assignment;
    // Applicants whose assigned study shares its preference class with other
    // still-open studies, and those alternatives.
    std::map<std::string, std::vector<std::string>> delayed_choices;

    bool operator==(const RoundLedger&) const = default;
};

// Counters quantifying exposure to random tie-breaking plus outcome quality.
// tie_exposed_applicants sums the sizes of all shuffled cells of size >= 2,
// so one applicant shuffled at two studies counts twice.
struct MetricsReport {
    long random_cells = 0;
    long tie_exposed_applicants = 0;
    long assigned = 0;
    long unassigned = 0;
    long forced_linear_applicants = 0;       // v1 only: tied relations forced strict
    std::map<int, long> wish_rank_counts;    // assignment class index -> count

    bool operator==(const MetricsReport&) const = default;
};

struct RunResult {
    RoundLedger ledger;
    MetricsReport metrics;
};

// Seed-determined strict total order refining a partition: every class of two
// or more studies is shuffled with the applicant's generator stream and split
// into singletons. This models a platform that only accepts strict lists.
inline OrderedPartition forced_linear_partition(const OrderedPartition& base,
                                                const std::string& applicant_id,
                                                std::uint64_t global_seed) {
    Rng rng = seeded_rng(global_seed, applicant_id);
    OrderedPartition out;
    for (const auto& cls : base.classes) {
        std::vector<ObjectId> order = cls;
        rng.shuffle(order);
        for (auto& id : order) out.classes.push_back({id});
    }
    return out;
}

namespace detail {

struct ApplicantState {
    const Applicant* app = nullptr;
    OrderedPartition base;               // run-view wish partition
    std::map<ObjectId, int> base_index;  // study -> 1-based class index
    bool strict_total = true;
    bool was_forced = false;

    enum class Status { active, committed, resigned } status = Status::active;
    std::optional<ObjectId> held;  // yes_but seat, or the committed study

    // Studies deleted by no_but answers.
    std::set<ObjectId> deleted;

    // Active wishes: base partition minus deleted studies; a seat holder only
    // keeps classes strictly better than the held one.
    OrderedPartition active_wishes() const {
        OrderedPartition out;
        const int held_class = held ? base_index.at(*held) : 0;
        for (std::size_t i = 0; i < base.classes.size(); ++i) {
            if (held && static_cast<int>(i) + 1 >= held_class) break;
            std::vector<ObjectId> cls;
            for (const auto& id : base.classes[i])
                if (!deleted.count(id)) cls.push_back(id);
            if (!cls.empty()) out.classes.push_back(std::move(cls));
        }
        return out;
    }
};

class RoundEngine {
  public:
    RoundEngine(const Scenario& sc, const RunConfig& cfg) : sc_(sc), cfg_(cfg) {
        for (const auto& app : sc.applicants) {
            ApplicantState st;
            st.app = &app;
            st.base = linearize_optimistic(app.prefs);
            st.strict_total = true;
            for (const auto& cls : st.base.classes)
                if (cls.size() > 1) st.strict_total = false;
            if (cfg.variant == Variant::v1 && !st.strict_total) {
                st.base = forced_linear_partition(st.base, app.id, cfg.seed);
                st.strict_total = true;
                st.was_forced = true;
                ++metrics_.forced_linear_applicants;
            }
            st.base_index = st.base.class_index();
            states_.emplace(app.id, std::move(st));
        }
    }

    MatchInstance build_instance(RoundRecord* record) {
        MatchInstance inst;
        const auto families = sc_.family_map();

        // Receivers: applicants that can still take a proposal this round.
        std::map<std::string, OrderedPartition> active;
        for (auto& [id, st] : states_) {
            if (st.status != ApplicantState::Status::active) continue;
            auto wishes = st.active_wishes();
            if (wishes.classes.empty()) continue;
            active.emplace(id, std::move(wishes));
        }
        for (const auto& [id, wishes] : active) {
            inst.receivers.push_back(id);
            std::vector<AgentId> flat;
            for (const auto& cls : wishes.classes)
                flat.insert(flat.end(), cls.begin(), cls.end());
            inst.receiver_prefs.emplace(id, std::move(flat));
        }

        // Proposers: studies with spare seats and a nonempty candidate pool.
        for (const auto& study : sc_.studies) {
            const int remaining = remaining_capacity(study);
            if (remaining == 0) continue;

            std::vector<CandidateSnapshot> pool;
            for (const auto& [id, wishes] : active) {
                if (!wishes.contains(study.id)) continue;
                const auto& st = states_.at(id);
                pool.push_back({id, st.app->academy, st.app->bac == BacOrigin::abroad, wishes,
                                st.strict_total});
            }
            if (pool.empty()) continue;

            std::vector<AgentId> list;
            if (study.kind == AdmissionKind::selective) {
                std::set<std::string> in_pool;
                for (const auto& c : pool) in_pool.insert(c.id);
                for (const auto& id : study.selective_list)
                    if (in_pool.count(id)) list.push_back(id);
            } else if (study.kind == AdmissionKind::unlimited) {
                for (const auto& c : pool) list.push_back(c.id);
                std::sort(list.begin(), list.end());
            } else {
                RankingConfig rcfg{cfg_.foreign_bac_first, cfg_.max_disj};
                RankedCandidateList ranked =
                    cfg_.variant == Variant::v1
                        ? build_preferences_v1(study.id, study.academy, pool, families, cfg_.seed,
                                               rcfg)
                        : build_preferences_v2(study.id, study.academy, pool, families, cfg_.seed,
                                               rcfg);
                list = ranked.entries;
                metrics_.random_cells += static_cast<long>(ranked.tiebreak_events.size());
                metrics_.tie_exposed_applicants += ranked.tie_exposed();
                if (record)
                    for (const auto& ev : ranked.tiebreak_events)
                        record->tiebreaks.push_back({study.id, ev});
            }
            if (list.empty()) continue;
            inst.proposers.push_back(study.id);
            inst.proposer_prefs.emplace(study.id, std::move(list));
            inst.proposer_capacity.emplace(study.id, remaining);
        }
        return inst;
    }

    void play_round(int round_number) {
        RoundRecord record;
        MatchInstance inst = build_instance(&record);
        Matching match = deferred_acceptance(inst);

        std::map<std::string, std::string> proposal_of;  // applicant -> study
        for (const auto& [study, applicant] : match.pairs) proposal_of[applicant] = study;

        for (auto& [id, st] : states_) {
            if (st.status != ApplicantState::Status::active) continue;
            RoundEntry entry;
            auto it = proposal_of.find(id);
            if (it != proposal_of.end()) {
                const std::string& study = it->second;
                const AnswerKind answer = decide(st, study, round_number);
                entry.proposal = study;
                entry.answer = answer;
                apply_answer(st, study, answer);
            }
            record.entries.emplace(id, std::move(entry));
        }
        record.seats_held_after = seats_held();
        ledger_.rounds.push_back(std::move(record));
    }

    RunResult finish() {
        for (auto& [id, st] : states_) {
            std::optional<std::string> final;
            if (st.status != ApplicantState::Status::resigned && st.held) final = *st.held;
            ledger_.final_assignment.emplace(id, final);
            if (final) {
                ++metrics_.assigned;
                ++metrics_.wish_rank_counts[st.base_index.at(*final)];
            } else {
                ++metrics_.unassigned;
            }
        }
        compute_delayed_choices();
        return {std::move(ledger_), metrics_};
    }

  private:
    int remaining_capacity(const StudyProgram& study) const {
        if (study.kind == AdmissionKind::unlimited) return MatchInstance::kUnlimited;
        int used = 0;
        for (const auto& [id, st] : states_)
            if (st.held && *st.held == study.id) ++used;
        return std::max(0, study.capacity - used);
    }

    std::map<std::string, int> seats_held() const {
        std::map<std::string, int> out;
        for (const auto& [id, st] : states_)
            if (st.held) ++out[*st.held];
        return out;
    }

    AnswerKind decide(const ApplicantState& st, const std::string& study, int round) const {
        switch (st.app->policy.kind) {
            case PolicyKind::always_definitely_yes:
                return AnswerKind::definitely_yes;
            case PolicyKind::yes_but_until_first_choice:
                return st.base_index.at(study) == 1 ? AnswerKind::definitely_yes
                                                    : AnswerKind::yes_but;
            case PolicyKind::scripted: {
                auto it = st.app->policy.script.find(round);
                if (it == st.app->policy.script.end())
                    throw Error(Errc::policy_gap, "applicant '" + st.app->id +
                                                      "' has no scripted answer for round " +
                                                      std::to_string(round));
                return it->second;
            }
        }
        throw Error(Errc::policy_gap, "unhandled policy kind");
    }

    void apply_answer(ApplicantState& st, const std::string& study, AnswerKind answer) {
        switch (answer) {
            case AnswerKind::definitely_yes:
                st.held = study;
                st.status = ApplicantState::Status::committed;
                break;
            case AnswerKind::yes_but:
                st.held = study;  // a previously held seat is released hereby
                break;
            case AnswerKind::no_but:
                st.deleted.insert(study);
                break;
            case AnswerKind::resign:
                st.held.reset();
                st.status = ApplicantState::Status::resigned;
                break;
        }
    }

    void compute_delayed_choices() {
        std::map<std::string, int> load;
        for (const auto& [id, assignment] : ledger_.final_assignment)
            if (assignment) ++load[*assignment];
        for (const auto& [id, assignment] : ledger_.final_assignment) {
            if (!assignment) continue;
            const auto& st = states_.at(id);
            const int cls = st.base_index.at(*assignment) - 1;
            std::vector<std::string> options;
            for (const auto& other : st.base.classes[cls]) {
                if (other == *assignment || st.deleted.count(other)) continue;
                const StudyProgram* sp = sc_.find_study(other);
                if (!sp) continue;
                const bool open = sp->kind == AdmissionKind::unlimited ||
                                  load[other] < sp->capacity;
                if (open) options.push_back(other);
            }
            if (!options.empty()) ledger_.delayed_choices.emplace(id, std::move(options));
        }
    }

    const Scenario& sc_;
    RunConfig cfg_;
    std::map<std::string, ApplicantState> states_;
    RoundLedger ledger_;
    MetricsReport metrics_;
};

}  // namespace detail

// Runs the whole process: num_rounds rounds of list building, matching and
// policy answers, then the final assignment, metrics and delayed-choice
// report.
inline RunResult run_rounds(const Scenario& sc, const RunConfig& cfg) {
    if (cfg.num_rounds < 1)
        throw Error(Errc::invalid_scenario, "num_rounds must be >= 1");
    detail::RoundEngine engine(sc, cfg);
    for (int round = 1; round <= cfg.num_rounds; ++round) engine.play_round(round);
    return engine.finish();
}

// The matching instance of round 1, before any answer is applied. This is
// what the enumeration oracle inspects.
inline MatchInstance first_round_instance(const Scenario& sc, const RunConfig& cfg) {
    detail::RoundEngine engine(sc, cfg);
    return engine.build_instance(nullptr);
}

}  // namespace apb
