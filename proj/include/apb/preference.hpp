// Preference relations over a finite object domain: construction with eager
// transitive closure and validation, structure classification, ordered
// partitions, extension tests, and linearization of partial preorders by
// optimistic or pessimistic reasoning.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apb/core.hpp"

namespace apb {

using ObjectId = std::string;

enum class StatementKind { strict, indiff };

// One raw preference statement: left > right or left = right.
struct Statement {
    StatementKind kind;
    ObjectId left;
    ObjectId right;
};

inline Statement strict(ObjectId left, ObjectId right) {
    return {StatementKind::strict, std::move(left), std::move(right)};
}
inline Statement indiff(ObjectId left, ObjectId right) {
    return {StatementKind::indiff, std::move(left), std::move(right)};
}

enum class PrefStructure { strict_total_order, total_preorder, partial_preorder };

// Equivalence classes of a total preorder, best class first. Objects within a
// class are kept sorted by id token so serialization is canonical.
struct OrderedPartition {
    std::vector<std::vector<ObjectId>> classes;

    bool operator==(const OrderedPartition&) const = default;

    std::size_t size() const {
        std::size_t n = 0;
        for (const auto& c : classes) n += c.size();
        return n;
    }

    bool contains(const ObjectId& id) const {
        for (const auto& c : classes)
            if (std::find(c.begin(), c.end(), id) != c.end()) return true;
        return false;
    }

    // 1-based class index per object.
    std::map<ObjectId, int> class_index() const {
        std::map<ObjectId, int> out;
        for (std::size_t i = 0; i < classes.size(); ++i)
            for (const auto& id : classes[i]) out[id] = static_cast<int>(i) + 1;
        return out;
    }
};

// A preference relation stored as closed strict / indifference pair sets over
// a fixed domain. Incomparability is the absence of both. Instances built
// through build() are transitively closed and validated; raw() skips both so
// that data deserialized from untrusted sources can still be linearized (the
// linearizers re-detect inconsistency at run time).
class PreferenceRelation {
  public:
    // Empty relation over the empty domain.
    PreferenceRelation() : PreferenceRelation(std::vector<ObjectId>{}) {}

    // Validating constructor: closes strict/indifference chains, including
    // mixed ones (o = o' and o' > o'' gives o > o''), and rejects invalid
    // statement sets.
    //
    // Throws Error:
    //   unknown_id  - a statement references an id outside the domain
    //   cycle       - the strict statements close to some o > o
    //   conflict    - closure derives both o > o' and (o' > o or o = o')
    static PreferenceRelation build(std::vector<ObjectId> domain,
                                    const std::vector<Statement>& statements) {
        PreferenceRelation rel(std::move(domain));
        for (const auto& st : statements) {
            int l = rel.index_of(st.left);
            int r = rel.index_of(st.right);
            if (l < 0)
                throw Error(Errc::unknown_id, "statement references '" + st.left +
                                                  "' outside the relation domain");
            if (r < 0)
                throw Error(Errc::unknown_id, "statement references '" + st.right +
                                                  "' outside the relation domain");
            if (st.kind == StatementKind::strict) {
                rel.set_strict(l, r);
            } else if (l != r) {
                rel.set_indiff(l, r);
            }
        }
        rel.close_and_validate();
        return rel;
    }

    // Unchecked constructor for pre-closed or externally sourced pair sets.
    // Operations other than the linearizers assume the data is closed and
    // consistent.
    static PreferenceRelation raw(std::vector<ObjectId> domain,
                                  const std::vector<Statement>& statements) {
        PreferenceRelation rel(std::move(domain));
        for (const auto& st : statements) {
            int l = rel.index_of(st.left);
            int r = rel.index_of(st.right);
            if (l < 0 || r < 0)
                throw Error(Errc::unknown_id, "statement references an id outside the domain");
            if (st.kind == StatementKind::strict)
                rel.set_strict(l, r);
            else if (l != r)
                rel.set_indiff(l, r);
        }
        return rel;
    }

    // The relation induced by a total preorder given as an ordered partition.
    static PreferenceRelation from_partition(const OrderedPartition& p) {
        std::vector<ObjectId> domain;
        for (const auto& c : p.classes) domain.insert(domain.end(), c.begin(), c.end());
        PreferenceRelation rel(std::move(domain));
        for (std::size_t i = 0; i < p.classes.size(); ++i) {
            for (const auto& a : p.classes[i]) {
                int ia = rel.index_of(a);
                for (const auto& b : p.classes[i])
                    if (a != b) rel.set_indiff(ia, rel.index_of(b));
                for (std::size_t j = i + 1; j < p.classes.size(); ++j)
                    for (const auto& b : p.classes[j]) rel.set_strict(ia, rel.index_of(b));
            }
        }
        return rel;
    }

    const std::vector<ObjectId>& domain() const { return domain_; }
    std::size_t domain_size() const { return domain_.size(); }
    bool in_domain(const ObjectId& id) const { return index_of(id) >= 0; }

    bool strictly_prefers(const ObjectId& a, const ObjectId& b) const {
        return strict_.at(checked_index(a) * n() + checked_index(b)) != 0;
    }
    bool indifferent(const ObjectId& a, const ObjectId& b) const {
        if (a == b) return false;
        return indiff_.at(checked_index(a) * n() + checked_index(b)) != 0;
    }
    // a is at least as preferred as b.
    bool at_least_as_preferred(const ObjectId& a, const ObjectId& b) const {
        return a == b || strictly_prefers(a, b) || indifferent(a, b);
    }
    bool comparable(const ObjectId& a, const ObjectId& b) const {
        return a == b || strictly_prefers(a, b) || strictly_prefers(b, a) || indifferent(a, b);
    }

    std::vector<Statement> statements() const {
        std::vector<Statement> out;
        for (int i = 0; i < n(); ++i)
            for (int j = 0; j < n(); ++j) {
                if (strict_[idx(i, j)]) out.push_back(strict(domain_[i], domain_[j]));
                if (j > i && indiff_[idx(i, j)]) out.push_back(indiff(domain_[i], domain_[j]));
            }
        return out;
    }

    bool operator==(const PreferenceRelation& other) const {
        return domain_ == other.domain_ && strict_ == other.strict_ && indiff_ == other.indiff_;
    }

    friend PrefStructure classify(const PreferenceRelation&);
    friend OrderedPartition ordered_partition(const PreferenceRelation&);
    friend bool extends(const PreferenceRelation&, const PreferenceRelation&);
    friend OrderedPartition linearize_optimistic(const PreferenceRelation&);
    friend OrderedPartition linearize_pessimistic(const PreferenceRelation&);
    friend PreferenceRelation reverse_strict(const PreferenceRelation&);

  private:
    explicit PreferenceRelation(std::vector<ObjectId> domain) : domain_(std::move(domain)) {
        std::sort(domain_.begin(), domain_.end());
        for (std::size_t i = 0; i + 1 < domain_.size(); ++i)
            if (domain_[i] == domain_[i + 1])
                throw Error(Errc::unknown_id, "duplicate id '" + domain_[i] + "' in domain");
        for (const auto& id : domain_)
            if (id.empty()) throw Error(Errc::unknown_id, "empty id token in domain");
        strict_.assign(domain_.size() * domain_.size(), 0);
        indiff_.assign(domain_.size() * domain_.size(), 0);
    }

    int n() const { return static_cast<int>(domain_.size()); }
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n() + j; }

    int index_of(const ObjectId& id) const {
        auto it = std::lower_bound(domain_.begin(), domain_.end(), id);
        if (it == domain_.end() || *it != id) return -1;
        return static_cast<int>(it - domain_.begin());
    }
    int checked_index(const ObjectId& id) const {
        int i = index_of(id);
        if (i < 0) throw Error(Errc::unknown_id, "id '" + id + "' is not in the relation domain");
        return i;
    }

    void set_strict(int i, int j) { strict_[idx(i, j)] = 1; }
    void set_indiff(int i, int j) {
        indiff_[idx(i, j)] = 1;
        indiff_[idx(j, i)] = 1;
    }

    // Eager closure. Cycles are diagnosed on the strict statements alone
    // first; after mixed chains are folded in, any remaining contradiction is
    // a conflict. Checking in that order keeps both error classes reachable:
    // a > b, b > a is a cycle, while a > b together with a = b is a conflict.
    void close_and_validate() {
        const int m = n();
        // Strict-only transitive closure.
        for (int k = 0; k < m; ++k)
            for (int i = 0; i < m; ++i) {
                if (!strict_[idx(i, k)]) continue;
                for (int j = 0; j < m; ++j)
                    if (strict_[idx(k, j)]) strict_[idx(i, j)] = 1;
            }
        for (int i = 0; i < m; ++i)
            if (strict_[idx(i, i)])
                throw Error(Errc::cycle,
                            "strict statements close to '" + domain_[i] + "' > '" + domain_[i] + "'");

        // Mixed chains, to a fixed point. Diagonal compositions are skipped;
        // any inconsistency they would signal shows up as a contradictory
        // pair in the scan below.
        bool changed = true;
        while (changed) {
            changed = false;
            for (int k = 0; k < m; ++k)
                for (int i = 0; i < m; ++i) {
                    const bool s_ik = strict_[idx(i, k)] != 0;
                    const bool d_ik = indiff_[idx(i, k)] != 0;
                    if (!s_ik && !d_ik) continue;
                    for (int j = 0; j < m; ++j) {
                        if (i == j) continue;
                        const bool s_kj = strict_[idx(k, j)] != 0;
                        const bool d_kj = indiff_[idx(k, j)] != 0;
                        if ((s_ik && (s_kj || d_kj)) || (d_ik && s_kj)) {
                            if (!strict_[idx(i, j)]) {
                                strict_[idx(i, j)] = 1;
                                changed = true;
                            }
                        } else if (d_ik && d_kj && !indiff_[idx(i, j)]) {
                            indiff_[idx(i, j)] = 1;
                            indiff_[idx(j, i)] = 1;
                            changed = true;
                        }
                    }
                }
        }
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                if (i != j && strict_[idx(i, j)] && (strict_[idx(j, i)] || indiff_[idx(i, j)]))
                    report_conflict(i, j);
            }
    }

    [[noreturn]] void report_conflict(int i, int j) const {
        throw Error(Errc::conflict, "closure derives both '" + domain_[i] + "' > '" + domain_[j] +
                                        "' and its contrary");
    }

    std::vector<ObjectId> domain_;
    std::vector<std::uint8_t> strict_;  // row-major: strict_[i*n+j] means i > j
    std::vector<std::uint8_t> indiff_;  // symmetric, zero diagonal
};

// Structure of a valid relation. Every distinct pair strictly comparable:
// strict total order. Every distinct pair comparable with at least one
// indifference: total preorder. Anything else leaves incomparable pairs.
inline PrefStructure classify(const PreferenceRelation& rel) {
    const int m = rel.n();
    bool any_indiff = false;
    bool all_comparable = true;
    bool all_strict = true;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            const bool s = rel.strict_[rel.idx(i, j)] || rel.strict_[rel.idx(j, i)];
            const bool d = rel.indiff_[rel.idx(i, j)] != 0;
            any_indiff = any_indiff || d;
            all_comparable = all_comparable && (s || d);
            all_strict = all_strict && s;
        }
    if (all_strict) return PrefStructure::strict_total_order;
    if (all_comparable && any_indiff) return PrefStructure::total_preorder;
    return PrefStructure::partial_preorder;
}

// Unique ordered partition of a total preorder: earlier class iff strictly
// preferred, same class iff indifferent.
//
// Throws Error(not_total) when some pair is incomparable.
inline OrderedPartition ordered_partition(const PreferenceRelation& rel) {
    const int m = rel.n();
    std::vector<int> klass(m, -1);
    std::vector<int> reps;
    for (int i = 0; i < m; ++i) {
        if (klass[i] >= 0) continue;
        for (int r = 0; r < static_cast<int>(reps.size()); ++r) {
            if (rel.indiff_[rel.idx(i, reps[r])]) {
                klass[i] = r;
                break;
            }
        }
        if (klass[i] < 0) {
            klass[i] = static_cast<int>(reps.size());
            reps.push_back(i);
        }
    }
    // Order class representatives by the strict relation.
    std::vector<int> order(reps.size());
    for (std::size_t i = 0; i < reps.size(); ++i) order[i] = static_cast<int>(i);
    for (std::size_t a = 0; a < reps.size(); ++a)
        for (std::size_t b = a + 1; b < reps.size(); ++b) {
            const int ra = reps[order[a]];
            const int rb = reps[order[b]];
            if (rel.strict_[rel.idx(rb, ra)]) {
                std::swap(order[a], order[b]);
            } else if (!rel.strict_[rel.idx(ra, rb)]) {
                throw Error(Errc::not_total, "'" + rel.domain_[ra] + "' and '" + rel.domain_[rb] +
                                                 "' are incomparable");
            }
        }
    std::vector<int> rank_of_class(reps.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) rank_of_class[order[pos]] = static_cast<int>(pos);

    OrderedPartition part;
    part.classes.resize(reps.size());
    for (int i = 0; i < m; ++i) part.classes[rank_of_class[klass[i]]].push_back(rel.domain_[i]);
    for (auto& c : part.classes) std::sort(c.begin(), c.end());
    return part;
}

// outer extends inner iff every at-least-as-preferred pair of inner also
// holds in outer. Domains must coincide.
inline bool extends(const PreferenceRelation& outer, const PreferenceRelation& inner) {
    if (outer.domain_ != inner.domain_)
        throw Error(Errc::domain_mismatch, "extension test over different domains");
    const int m = outer.n();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            const bool inner_geq = inner.strict_[inner.idx(i, j)] || inner.indiff_[inner.idx(i, j)];
            const bool outer_geq = outer.strict_[outer.idx(i, j)] || outer.indiff_[outer.idx(i, j)];
            if (inner_geq && !outer_geq) return false;
        }
    return true;
}

namespace detail {

// Level extraction shared by both linearizers. `dominated(o)` must answer
// "is o strictly dominated among the still-alive objects" for the chosen
// direction; indifference deferral is iterated to a fixed point within each
// level so that removing one object can re-defer its partners.
template <typename DominatedFn>
std::vector<std::vector<int>> peel_levels(int m, DominatedFn dominated,
                                          std::vector<std::vector<std::uint8_t>>& indiff_alive) {
    std::vector<char> alive(m, 1);
    int remaining = m;
    std::vector<std::vector<int>> levels;
    while (remaining > 0) {
        std::vector<char> in_level(m, 0);
        std::vector<int> level;
        for (int i = 0; i < m; ++i)
            if (alive[i] && !dominated(i, alive)) {
                in_level[i] = 1;
                level.push_back(i);
            }
        // Deferral: an object indifferent to something outside the level
        // waits for its partner. Iterate until stable.
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto it = level.begin(); it != level.end();) {
                const int i = *it;
                bool defer = false;
                for (int j = 0; j < m && !defer; ++j)
                    if (indiff_alive[i][j] && !in_level[j]) defer = true;
                if (defer) {
                    in_level[i] = 0;
                    it = level.erase(it);
                    changed = true;
                } else {
                    ++it;
                }
            }
        }
        if (level.empty())
            throw Error(Errc::inconsistent,
                        "no object can be placed at level " + std::to_string(levels.size() + 1) +
                            " of " + std::to_string(m) + " objects");
        for (int i : level) {
            alive[i] = 0;
            --remaining;
            for (int j : level)
                if (i != j) indiff_alive[i][j] = 0;
        }
        levels.push_back(std::move(level));
    }
    return levels;
}

inline OrderedPartition levels_to_partition(const std::vector<std::vector<int>>& levels,
                                            const std::vector<ObjectId>& names, bool reversed) {
    OrderedPartition part;
    part.classes.reserve(levels.size());
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const auto& lvl = levels[reversed ? levels.size() - 1 - k : k];
        std::vector<ObjectId> cls;
        cls.reserve(lvl.size());
        for (int i : lvl) cls.push_back(names[i]);
        std::sort(cls.begin(), cls.end());
        part.classes.push_back(std::move(cls));
    }
    return part;
}

inline std::vector<std::vector<std::uint8_t>> square(const std::vector<std::uint8_t>& flat, int m) {
    std::vector<std::vector<std::uint8_t>> sq(m, std::vector<std::uint8_t>(m, 0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) sq[i][j] = flat[static_cast<std::size_t>(i) * m + j];
    return sq;
}

}  // namespace detail

// Total preorder extending rel by optimistic reasoning: each level takes the
// objects not strictly dominated by any remaining object, then defers objects
// whose indifference partners are not in the level. Each object ends up in
// the best class the relation allows.
//
// Throws Error(inconsistent) if some level comes out empty, which cannot
// happen for relations built through build() but can for raw() data.
inline OrderedPartition linearize_optimistic(const PreferenceRelation& rel) {
    const int m = rel.n();
    auto strict = detail::square(rel.strict_, m);
    auto indiff = detail::square(rel.indiff_, m);
    auto dominated = [&](int o, const std::vector<char>& alive) {
        for (int j = 0; j < m; ++j)
            if (alive[j] && strict[j][o]) return true;
        return false;
    };
    auto levels = detail::peel_levels(m, dominated, indiff);
    return detail::levels_to_partition(levels, rel.domain_, false);
}

// Dual construction: each raw level takes the objects not strictly preferred
// to any remaining object (so objects sink as low as possible), with the same
// indifference deferral; the level sequence is emitted reversed.
inline OrderedPartition linearize_pessimistic(const PreferenceRelation& rel) {
    const int m = rel.n();
    auto strict = detail::square(rel.strict_, m);
    auto indiff = detail::square(rel.indiff_, m);
    auto dominates_someone = [&](int o, const std::vector<char>& alive) {
        for (int j = 0; j < m; ++j)
            if (alive[j] && strict[o][j]) return true;
        return false;
    };
    auto levels = detail::peel_levels(m, dominates_someone, indiff);
    return detail::levels_to_partition(levels, rel.domain_, true);
}

// Same domain and indifference pairs, all strict pairs flipped. Useful for
// checking the duality between the two linearizations.
inline PreferenceRelation reverse_strict(const PreferenceRelation& rel) {
    PreferenceRelation out(rel.domain_);
    const int m = rel.n();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (rel.strict_[rel.idx(i, j)]) out.strict_[out.idx(j, i)] = 1;
            if (rel.indiff_[rel.idx(i, j)]) out.indiff_[out.idx(i, j)] = 1;
        }
    return out;
}

}  // namespace apb
