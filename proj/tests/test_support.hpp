// Randomized generators and independent oracles shared by the property and
// acceptance suites. Everything is driven by the library's own deterministic
// Rng so failures reproduce from the master seed.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "apb/apb.hpp"

namespace testgen {

using namespace apb;

class Gen {
  public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    int range(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(rng_.bounded(static_cast<std::uint64_t>(hi - lo + 1)));
    }
    bool chance(int percent) { return range(1, 100) <= percent; }
    template <typename T>
    void shuffle(std::vector<T>& v) {
        rng_.shuffle(v);
    }
    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(range(0, static_cast<int>(v.size()) - 1))];
    }
    std::uint64_t u64() { return rng_.next(); }

  private:
    Rng rng_;
};

// ---------------------------------------------------------------------------
// Preference relations

inline std::vector<ObjectId> object_names(int n, const std::string& prefix = "o") {
    std::vector<ObjectId> ids;
    for (int i = 0; i < n; ++i) ids.push_back(prefix + std::to_string(i));
    return ids;
}

// A valid partial preorder built from a hidden block structure: objects are
// split into blocks, blocks get a random DAG, and only a random subset of the
// implied statements is emitted, so construction-time closure has real work.
inline PreferenceRelation random_relation(Gen& gen, const std::vector<ObjectId>& ids,
                                          bool force_total = false) {
    const int n = static_cast<int>(ids.size());
    std::vector<ObjectId> order = ids;
    gen.shuffle(order);
    const int blocks = gen.range(1, n);
    std::vector<std::vector<ObjectId>> block_members(blocks);
    for (int i = 0; i < n; ++i)
        block_members[static_cast<std::size_t>(gen.range(0, blocks - 1))].push_back(order[i]);
    block_members.erase(std::remove_if(block_members.begin(), block_members.end(),
                                       [](const auto& b) { return b.empty(); }),
                        block_members.end());

    std::vector<Statement> statements;
    for (const auto& block : block_members)
        for (std::size_t i = 0; i + 1 < block.size(); ++i)
            statements.push_back(indiff(block[i], block[i + 1]));

    const int m = static_cast<int>(block_members.size());
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            const bool consecutive = j == i + 1;
            if (force_total ? consecutive : gen.chance(50)) {
                statements.push_back(
                    strict(gen.pick(block_members[i]), gen.pick(block_members[j])));
            }
        }
    return PreferenceRelation::build(ids, statements);
}

inline PreferenceRelation random_total_preorder(Gen& gen, const std::vector<ObjectId>& ids) {
    return random_relation(gen, ids, /*force_total=*/true);
}

inline PreferenceRelation random_strict_order(Gen& gen, const std::vector<ObjectId>& ids) {
    std::vector<ObjectId> order = ids;
    gen.shuffle(order);
    std::vector<Statement> statements;
    for (std::size_t i = 0; i + 1 < order.size(); ++i)
        statements.push_back(strict(order[i], order[i + 1]));
    return PreferenceRelation::build(ids, statements);
}

// ---------------------------------------------------------------------------
// Exhaustive linearization oracle

// Visits every ordered partition of ids exactly once (ordered Bell numbers;
// fine up to |ids| ~ 7).
inline void for_each_ordered_partition(
    const std::vector<ObjectId>& ids,
    const std::function<void(const std::vector<std::vector<ObjectId>>&)>& visit) {
    std::vector<std::vector<ObjectId>> blocks;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == ids.size()) {
            visit(blocks);
            return;
        }
        for (auto& block : blocks) {
            block.push_back(ids[k]);
            rec(k + 1);
            block.pop_back();
        }
        for (std::size_t pos = 0; pos <= blocks.size(); ++pos) {
            blocks.insert(blocks.begin() + static_cast<long>(pos), {ids[k]});
            rec(k + 1);
            blocks.erase(blocks.begin() + static_cast<long>(pos));
        }
    };
    rec(0);
}

// Does the total preorder given by the partition preserve every strict and
// indifference statement of rel? (This implies the paper's extension
// condition and is what the linearizers guarantee.)
inline bool preserves_relation(const PreferenceRelation& rel,
                               const std::map<ObjectId, int>& class_of) {
    for (const auto& a : rel.domain())
        for (const auto& b : rel.domain()) {
            if (a == b) continue;
            if (rel.strictly_prefers(a, b) && !(class_of.at(a) < class_of.at(b))) return false;
            if (rel.indifferent(a, b) && class_of.at(a) != class_of.at(b)) return false;
        }
    return true;
}

struct OracleLinearization {
    OrderedPartition partition;
    bool unique_minimum = false;
};

// Brute force: enumerate all total preorders preserving rel, take the
// pointwise-minimal class-index assignment, and demand that exactly one
// extension realizes it. That extension is what optimistic reasoning must
// return.
inline OracleLinearization oracle_optimistic(const PreferenceRelation& rel) {
    const auto& ids = rel.domain();
    std::map<ObjectId, int> best;
    for (const auto& id : ids) best[id] = static_cast<int>(ids.size()) + 1;

    std::vector<std::pair<std::vector<std::vector<ObjectId>>, std::map<ObjectId, int>>> survivors;
    for_each_ordered_partition(ids, [&](const std::vector<std::vector<ObjectId>>& blocks) {
        std::map<ObjectId, int> class_of;
        for (std::size_t i = 0; i < blocks.size(); ++i)
            for (const auto& id : blocks[i]) class_of[id] = static_cast<int>(i) + 1;
        if (!preserves_relation(rel, class_of)) return;
        for (const auto& id : ids) best[id] = std::min(best[id], class_of.at(id));
        survivors.emplace_back(blocks, std::move(class_of));
    });

    OracleLinearization out;
    int hits = 0;
    for (const auto& [blocks, class_of] : survivors) {
        if (class_of == best) {
            ++hits;
            out.partition.classes = blocks;
            for (auto& cls : out.partition.classes) std::sort(cls.begin(), cls.end());
        }
    }
    out.unique_minimum = hits == 1;
    return out;
}

// ---------------------------------------------------------------------------
// Matching instances

struct InstanceOptions {
    int max_side = 6;
    int max_receiver_capacity = 1;
    int max_proposer_capacity = 1;
    bool complete_lists = false;
    double oracle_bound = 0;  // when > 0, regenerate until within the bound
};

inline MatchInstance random_instance(Gen& gen, const InstanceOptions& opt) {
    for (;;) {
        MatchInstance inst;
        const int np = gen.range(1, opt.max_side);
        const int nr = gen.range(1, opt.max_side);
        for (int i = 0; i < np; ++i) inst.proposers.push_back("p" + std::to_string(i));
        for (int i = 0; i < nr; ++i) inst.receivers.push_back("r" + std::to_string(i));
        for (const auto& p : inst.proposers) {
            std::vector<AgentId> list = inst.receivers;
            gen.shuffle(list);
            if (!opt.complete_lists) list.resize(static_cast<std::size_t>(gen.range(0, nr)));
            inst.proposer_prefs[p] = std::move(list);
            if (opt.max_proposer_capacity > 1)
                inst.proposer_capacity[p] = gen.range(1, opt.max_proposer_capacity);
        }
        for (const auto& r : inst.receivers) {
            std::vector<AgentId> list = inst.proposers;
            gen.shuffle(list);
            if (!opt.complete_lists) list.resize(static_cast<std::size_t>(gen.range(0, np)));
            inst.receiver_prefs[r] = std::move(list);
            if (opt.max_receiver_capacity > 1)
                inst.receiver_capacity[r] = gen.range(1, opt.max_receiver_capacity);
        }
        if (opt.oracle_bound > 0) {
            double space = 1.0;
            for (const auto& p : inst.proposers) {
                const int cap = inst.capacity_of_proposer(p);
                for (int c = 0; c < cap; ++c)
                    space *= static_cast<double>(inst.proposer_prefs[p].size() + 1);
            }
            if (space > opt.oracle_bound) continue;
        }
        return inst;
    }
}

// ---------------------------------------------------------------------------
// Candidate pools for the two list builders

struct RandomPool {
    std::string study_id;
    std::string study_academy;
    std::vector<CandidateSnapshot> pool;
    std::map<ObjectId, std::string> families;
    bool foreign_bac_first = false;
};

inline RandomPool random_pool(Gen& gen, bool allow_ties) {
    RandomPool rp;
    const int ns = gen.range(1, 5);
    std::vector<ObjectId> studies;
    for (int i = 0; i < ns; ++i) {
        studies.push_back("S" + std::to_string(i));
        rp.families[studies.back()] = gen.chance(50) ? "F" : "G";
    }
    rp.study_id = studies.front();
    rp.study_academy = "A";
    rp.foreign_bac_first = gen.chance(30);

    const int nc = gen.range(1, 10);
    for (int i = 0; i < nc; ++i) {
        std::vector<ObjectId> wished = studies;
        gen.shuffle(wished);
        wished.resize(static_cast<std::size_t>(gen.range(1, ns)));
        if (std::find(wished.begin(), wished.end(), rp.study_id) == wished.end())
            wished.back() = rp.study_id;  // every pool member ranks the study
        std::sort(wished.begin(), wished.end());
        PreferenceRelation rel =
            allow_ties ? random_relation(gen, wished) : random_strict_order(gen, wished);
        CandidateSnapshot snap;
        snap.id = "C" + std::to_string(i);
        snap.academy = gen.chance(60) ? "A" : "B";
        snap.bac_abroad = gen.chance(15);
        snap.wishes = linearize_optimistic(rel);
        snap.strict_total = classify(rel) == PrefStructure::strict_total_order;
        rp.pool.push_back(std::move(snap));
    }
    return rp;
}

// Tie exposure of the coarser (block, relative, absolute) cell structure over
// exactly the ranks v2 sees: the baseline that the disjunction split refines.
inline long coarse_cell_exposure(const RandomPool& rp) {
    std::map<std::tuple<int, int, int>, int> groups;
    for (const auto& c : rp.pool) {
        const auto ranks = compute_wish_ranks(c.wishes, rp.families);
        const WishRank& r = ranks.at(rp.study_id);
        const int block = (rp.foreign_bac_first && c.bac_abroad) ? 0
                          : (c.academy == rp.study_academy ? 1 : 2);
        ++groups[{block, r.relative, r.absolute}];
    }
    long exposed = 0;
    for (const auto& [key, n] : groups)
        if (n >= 2) exposed += n;
    return exposed;
}

// ---------------------------------------------------------------------------
// Scenarios

struct ScenarioOptions {
    int max_studies = 5;
    int max_applicants = 8;
    int max_rounds = 4;
    bool allow_ties = true;
};

inline Scenario random_scenario(Gen& gen, const ScenarioOptions& opt) {
    Scenario sc;
    sc.config.seed = gen.u64();
    sc.config.num_rounds = gen.range(1, opt.max_rounds);
    sc.config.foreign_bac_first = gen.chance(20);
    sc.config.max_disj = gen.chance(80) ? kMaxWishRank : gen.range(1, 3);

    const int ns = gen.range(1, opt.max_studies);
    const std::vector<std::string> academies = {"A", "B"};
    const std::vector<std::string> families = {"F", "G"};
    for (int i = 0; i < ns; ++i) {
        StudyProgram s;
        s.id = "S" + std::to_string(i);
        s.academy = gen.pick(academies);
        s.family = gen.pick(families);
        const int kind = gen.range(1, 10);
        if (kind <= 6) {
            s.kind = AdmissionKind::limited;
            s.capacity = gen.range(1, 3);
        } else if (kind <= 8) {
            s.kind = AdmissionKind::selective;
            s.capacity = gen.range(1, 3);
        } else {
            s.kind = AdmissionKind::unlimited;
        }
        sc.studies.push_back(std::move(s));
    }

    std::vector<ObjectId> study_ids;
    for (const auto& s : sc.studies) study_ids.push_back(s.id);

    const int na = gen.range(1, opt.max_applicants);
    for (int i = 0; i < na; ++i) {
        Applicant a;
        a.id = "C" + std::to_string(i);
        a.academy = gen.pick(academies);
        a.bac = gen.chance(10) ? BacOrigin::abroad : BacOrigin::local;

        std::vector<ObjectId> wished = study_ids;
        gen.shuffle(wished);
        wished.resize(static_cast<std::size_t>(gen.range(1, static_cast<int>(wished.size()))));
        std::sort(wished.begin(), wished.end());
        a.prefs =
            opt.allow_ties ? random_relation(gen, wished) : random_strict_order(gen, wished);

        const int policy = gen.range(1, 10);
        if (policy <= 4) {
            a.policy.kind = PolicyKind::always_definitely_yes;
        } else if (policy <= 7) {
            a.policy.kind = PolicyKind::yes_but_until_first_choice;
        } else {
            a.policy.kind = PolicyKind::scripted;
            for (int round = 1; round <= sc.config.num_rounds; ++round) {
                static const AnswerKind answers[] = {AnswerKind::definitely_yes,
                                                     AnswerKind::yes_but, AnswerKind::no_but,
                                                     AnswerKind::resign};
                a.policy.script[round] = answers[gen.range(0, 3)];
            }
        }
        sc.applicants.push_back(std::move(a));
    }

    for (auto& s : sc.studies) {
        if (s.kind != AdmissionKind::selective) continue;
        for (const auto& a : sc.applicants) s.selective_list.push_back(a.id);
        gen.shuffle(s.selective_list);
    }
    return sc;
}

}  // namespace testgen
