// Capacitated deferred acceptance over two agent sides with strict incomplete
// preference lists, blocking-pair audit, and an exhaustive enumeration oracle
// for small instances.
#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "apb/core.hpp"

namespace apb {

using AgentId = std::string;

// A matching instance. Proposers court receivers down their lists; an agent
// absent from a counterpart's list is mutually unacceptable to it. Capacities
// default to 1 on both sides; kUnlimited resolves to "enough for everyone".
// Proposer-side capacities cover the institution-proposing case where one
// program fills several seats.
struct MatchInstance {
    static constexpr int kUnlimited = -1;

    std::vector<AgentId> proposers;
    std::vector<AgentId> receivers;
    std::map<AgentId, std::vector<AgentId>> proposer_prefs;  // best first
    std::map<AgentId, std::vector<AgentId>> receiver_prefs;  // best first
    std::map<AgentId, int> proposer_capacity;  // absent key = 1
    std::map<AgentId, int> receiver_capacity;  // absent key = 1

    int capacity_of_proposer(const AgentId& p) const {
        auto it = proposer_capacity.find(p);
        if (it == proposer_capacity.end()) return 1;
        return it->second == kUnlimited ? static_cast<int>(receivers.size()) : it->second;
    }
    int capacity_of_receiver(const AgentId& r) const {
        auto it = receiver_capacity.find(r);
        if (it == receiver_capacity.end()) return 1;
        return it->second == kUnlimited ? static_cast<int>(proposers.size()) : it->second;
    }
};

// Pairs are kept sorted so equal matchings compare equal and serialize
// identically.
struct Matching {
    std::vector<std::pair<AgentId, AgentId>> pairs;  // (proposer, receiver)

    void normalize() { std::sort(pairs.begin(), pairs.end()); }
    bool operator==(const Matching&) const = default;
    auto operator<=>(const Matching&) const = default;

    std::optional<AgentId> receiver_of(const AgentId& proposer) const {
        for (const auto& [p, r] : pairs)
            if (p == proposer) return r;
        return std::nullopt;
    }
    std::vector<AgentId> receivers_of(const AgentId& proposer) const {
        std::vector<AgentId> out;
        for (const auto& [p, r] : pairs)
            if (p == proposer) out.push_back(r);
        return out;
    }
    std::vector<AgentId> proposers_of(const AgentId& receiver) const {
        std::vector<AgentId> out;
        for (const auto& [p, r] : pairs)
            if (r == receiver) out.push_back(p);
        return out;
    }
};

struct BlockingPair {
    AgentId proposer;
    AgentId receiver;
    bool operator==(const BlockingPair&) const = default;
    auto operator<=>(const BlockingPair&) const = default;
};

enum class ProposalOrder { fifo, lifo };

// Execution counters for the instrumented invariants: total proposals made
// and whether any receiver ever held more than its capacity.
struct DaStats {
    long proposals = 0;
    bool capacity_respected = true;
};

namespace detail {

struct Indexed {
    std::vector<AgentId> p_names, r_names;
    std::map<AgentId, int> p_index, r_index;
    std::vector<std::vector<int>> p_lists, r_lists;  // index lists, best first
    std::vector<std::vector<int>> r_rank_of;  // r_rank_of[r][p] = rank or -1
    std::vector<std::vector<int>> p_rank_of;  // p_rank_of[p][r] = rank or -1
    std::vector<int> p_cap, r_cap;
};

inline void check_list(const std::vector<AgentId>& list, const std::map<AgentId, int>& counterpart,
                       const AgentId& owner) {
    std::set<AgentId> seen;
    for (const auto& id : list) {
        if (!counterpart.count(id))
            throw Error(Errc::unknown_id,
                        "preference list of '" + owner + "' references unknown agent '" + id + "'");
        if (!seen.insert(id).second)
            throw Error(Errc::unknown_id,
                        "preference list of '" + owner + "' repeats agent '" + id + "'");
    }
}

inline Indexed index_instance(const MatchInstance& inst) {
    Indexed ix;
    ix.p_names = inst.proposers;
    ix.r_names = inst.receivers;
    for (std::size_t i = 0; i < ix.p_names.size(); ++i) {
        if (!ix.p_index.emplace(ix.p_names[i], static_cast<int>(i)).second)
            throw Error(Errc::unknown_id, "duplicate proposer '" + ix.p_names[i] + "'");
    }
    for (std::size_t i = 0; i < ix.r_names.size(); ++i) {
        if (!ix.r_index.emplace(ix.r_names[i], static_cast<int>(i)).second)
            throw Error(Errc::unknown_id, "duplicate receiver '" + ix.r_names[i] + "'");
    }
    const int np = static_cast<int>(ix.p_names.size());
    const int nr = static_cast<int>(ix.r_names.size());
    ix.p_lists.resize(np);
    ix.r_lists.resize(nr);
    ix.p_rank_of.assign(np, std::vector<int>(nr, -1));
    ix.r_rank_of.assign(nr, std::vector<int>(np, -1));
    for (int p = 0; p < np; ++p) {
        auto it = inst.proposer_prefs.find(ix.p_names[p]);
        if (it == inst.proposer_prefs.end()) continue;
        check_list(it->second, ix.r_index, ix.p_names[p]);
        for (const auto& r_name : it->second) {
            int r = ix.r_index.at(r_name);
            ix.p_rank_of[p][r] = static_cast<int>(ix.p_lists[p].size());
            ix.p_lists[p].push_back(r);
        }
    }
    for (int r = 0; r < nr; ++r) {
        auto it = inst.receiver_prefs.find(ix.r_names[r]);
        if (it == inst.receiver_prefs.end()) continue;
        check_list(it->second, ix.p_index, ix.r_names[r]);
        for (const auto& p_name : it->second) {
            int p = ix.p_index.at(p_name);
            ix.r_rank_of[r][p] = static_cast<int>(ix.r_lists[r].size());
            ix.r_lists[r].push_back(p);
        }
    }
    ix.p_cap.resize(np);
    ix.r_cap.resize(nr);
    for (int p = 0; p < np; ++p) ix.p_cap[p] = inst.capacity_of_proposer(ix.p_names[p]);
    for (int r = 0; r < nr; ++r) ix.r_cap[r] = inst.capacity_of_receiver(ix.r_names[r]);
    for (int p = 0; p < np; ++p)
        if (ix.p_cap[p] < 0)
            throw Error(Errc::invalid_scenario, "negative capacity for '" + ix.p_names[p] + "'");
    for (int r = 0; r < nr; ++r)
        if (ix.r_cap[r] < 0)
            throw Error(Errc::invalid_scenario, "negative capacity for '" + ix.r_names[r] + "'");
    return ix;
}

}  // namespace detail

// Deferred acceptance. Free proposers with spare capacity propose down their
// lists; a receiver holds its best proposers up to capacity and evicts the
// worst held one when someone better arrives. The result is the unique
// proposer-optimal stable matching, independent of the scheduling order (the
// order parameter exists so tests can demonstrate exactly that).
inline Matching deferred_acceptance(const MatchInstance& inst,
                                    ProposalOrder order = ProposalOrder::fifo,
                                    DaStats* stats = nullptr) {
    auto ix = detail::index_instance(inst);
    const int np = static_cast<int>(ix.p_names.size());

    std::vector<int> next_choice(np, 0);
    std::vector<int> quota = ix.p_cap;
    // held[r]: proposers currently held, kept worst-last by receiver rank.
    std::vector<std::vector<int>> held(ix.r_names.size());
    DaStats local;

    std::deque<int> agenda;
    for (int p = 0; p < np; ++p)
        if (quota[p] > 0 && !ix.p_lists[p].empty()) agenda.push_back(p);

    auto reschedule = [&](int p) {
        if (order == ProposalOrder::fifo)
            agenda.push_back(p);
        else
            agenda.push_front(p);
    };

    while (!agenda.empty()) {
        int p = agenda.front();
        agenda.pop_front();
        while (quota[p] > 0 && next_choice[p] < static_cast<int>(ix.p_lists[p].size())) {
            const int r = ix.p_lists[p][next_choice[p]++];
            ++local.proposals;
            const int rank_p = ix.r_rank_of[r][p];
            if (rank_p < 0) continue;  // p is unacceptable to r
            auto& holders = held[r];
            if (static_cast<int>(holders.size()) < ix.r_cap[r]) {
                holders.push_back(p);
                std::sort(holders.begin(), holders.end(),
                          [&](int a, int b) { return ix.r_rank_of[r][a] < ix.r_rank_of[r][b]; });
                --quota[p];
                if (static_cast<int>(holders.size()) > ix.r_cap[r]) local.capacity_respected = false;
                break;
            }
            if (ix.r_cap[r] == 0) continue;
            const int worst = holders.back();
            if (rank_p < ix.r_rank_of[r][worst]) {
                holders.back() = p;
                std::sort(holders.begin(), holders.end(),
                          [&](int a, int b) { return ix.r_rank_of[r][a] < ix.r_rank_of[r][b]; });
                --quota[p];
                ++quota[worst];
                if (next_choice[worst] < static_cast<int>(ix.p_lists[worst].size()))
                    reschedule(worst);
                break;
            }
            // rejected; try the next receiver on the list
        }
        if (quota[p] > 0 && next_choice[p] < static_cast<int>(ix.p_lists[p].size())) reschedule(p);
    }

    Matching m;
    for (std::size_t r = 0; r < held.size(); ++r)
        for (int p : held[r]) m.pairs.emplace_back(ix.p_names[p], ix.r_names[r]);
    m.normalize();
    if (stats) *stats = local;
    return m;
}

// All blocking pairs of a matching: mutually acceptable non-pairs where each
// side either has spare capacity or strictly prefers the other to its worst
// current partner (being unmatched counts as worst).
//
// Throws Error(foreign_agent) if the matching mentions agents not in the
// instance, and Error(invalid_scenario) if it violates capacities or pairs
// agents that do not list each other.
inline std::vector<BlockingPair> find_blocking_pairs(const MatchInstance& inst,
                                                     const Matching& matching) {
    auto ix = detail::index_instance(inst);
    const int np = static_cast<int>(ix.p_names.size());
    const int nr = static_cast<int>(ix.r_names.size());

    std::vector<std::vector<int>> p_holds(np), r_holds(nr);
    for (const auto& [p_name, r_name] : matching.pairs) {
        auto pit = ix.p_index.find(p_name);
        auto rit = ix.r_index.find(r_name);
        if (pit == ix.p_index.end())
            throw Error(Errc::foreign_agent, "matching mentions unknown proposer '" + p_name + "'");
        if (rit == ix.r_index.end())
            throw Error(Errc::foreign_agent, "matching mentions unknown receiver '" + r_name + "'");
        const int p = pit->second, r = rit->second;
        if (ix.p_rank_of[p][r] < 0 || ix.r_rank_of[r][p] < 0)
            throw Error(Errc::invalid_scenario,
                        "matched pair ('" + p_name + "', '" + r_name + "') is not mutually acceptable");
        p_holds[p].push_back(r);
        r_holds[r].push_back(p);
    }
    for (int p = 0; p < np; ++p)
        if (static_cast<int>(p_holds[p].size()) > ix.p_cap[p])
            throw Error(Errc::invalid_scenario, "proposer '" + ix.p_names[p] + "' is over capacity");
    for (int r = 0; r < nr; ++r)
        if (static_cast<int>(r_holds[r].size()) > ix.r_cap[r])
            throw Error(Errc::invalid_scenario, "receiver '" + ix.r_names[r] + "' is over capacity");

    auto p_worst = [&](int p) {  // rank of p's worst partner, or INT_MAX-like if spare
        int w = -1;
        for (int r : p_holds[p]) w = std::max(w, ix.p_rank_of[p][r]);
        return w;
    };
    auto r_worst = [&](int r) {
        int w = -1;
        for (int p : r_holds[r]) w = std::max(w, ix.r_rank_of[r][p]);
        return w;
    };

    std::vector<BlockingPair> blocking;
    for (int p = 0; p < np; ++p) {
        const bool p_spare = static_cast<int>(p_holds[p].size()) < ix.p_cap[p];
        const int pw = p_worst(p);
        for (int r : ix.p_lists[p]) {
            if (ix.r_rank_of[r][p] < 0) continue;
            if (std::find(p_holds[p].begin(), p_holds[p].end(), r) != p_holds[p].end()) continue;
            const bool p_gains = p_spare || ix.p_rank_of[p][r] < pw;
            if (!p_gains) continue;
            const bool r_spare = static_cast<int>(r_holds[r].size()) < ix.r_cap[r];
            const bool r_gains = r_spare || ix.r_rank_of[r][p] < r_worst(r);
            if (r_gains) blocking.push_back({ix.p_names[p], ix.r_names[r]});
        }
    }
    std::sort(blocking.begin(), blocking.end());
    return blocking;
}

inline bool is_stable(const MatchInstance& inst, const Matching& matching) {
    return find_blocking_pairs(inst, matching).empty();
}

// Exhaustive test oracle: every capacity-respecting, mutually acceptable
// matching is generated and filtered through find_blocking_pairs. Proposer
// capacities are expanded into unit clones with a canonical increasing-choice
// rule so each matching is generated once. The search space is bounded by the
// product of (list length + 1) over all clones.
//
// Throws Error(too_large) above the limit.
inline std::vector<Matching> enumerate_stable_matchings(const MatchInstance& inst,
                                                        double search_limit = 1e6) {
    auto ix = detail::index_instance(inst);
    const int nr = static_cast<int>(ix.r_names.size());

    struct Clone {
        int p;  // original proposer index
        bool first_of_proposer;
    };
    std::vector<Clone> clones;
    for (int p = 0; p < static_cast<int>(ix.p_names.size()); ++p)
        for (int c = 0; c < ix.p_cap[p]; ++c) clones.push_back({p, c == 0});

    double space = 1.0;
    for (const auto& cl : clones) {
        space *= static_cast<double>(ix.p_lists[cl.p].size() + 1);
        if (space > search_limit)
            throw Error(Errc::too_large, "stable-matching enumeration space exceeds the limit");
    }

    std::vector<int> r_load(nr, 0);
    std::vector<Matching> stable;
    Matching current;

    // choice per clone: -1 = unmatched, otherwise index into the proposer's
    // list; clones of one proposer must pick strictly increasing indices and
    // an unmatched clone ends that proposer's sequence.
    auto rec = [&](auto&& self, std::size_t k, int prev_choice) -> void {
        if (k == clones.size()) {
            Matching m = current;
            m.normalize();
            if (find_blocking_pairs(inst, m).empty()) stable.push_back(std::move(m));
            return;
        }
        const auto& cl = clones[k];
        const int lo = cl.first_of_proposer ? 0 : prev_choice + 1;
        const bool prev_unmatched = !cl.first_of_proposer && prev_choice < 0;
        self(self, k + 1, -1);  // this clone stays unmatched
        if (!prev_unmatched) {
            const auto& list = ix.p_lists[cl.p];
            for (int c = lo; c < static_cast<int>(list.size()); ++c) {
                const int r = list[c];
                if (ix.r_rank_of[r][cl.p] < 0) continue;
                if (r_load[r] >= ix.r_cap[r]) continue;
                ++r_load[r];
                current.pairs.emplace_back(ix.p_names[cl.p], ix.r_names[r]);
                self(self, k + 1, c);
                current.pairs.pop_back();
                --r_load[r];
            }
        }
    };
    rec(rec, 0, -1);

    std::sort(stable.begin(), stable.end());
    stable.erase(std::unique(stable.begin(), stable.end()), stable.end());
    return stable;
}

}  // namespace apb
