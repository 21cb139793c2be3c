// Error codes and deterministic randomness shared by the whole library.
#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace apb {

enum class Errc {
    cycle,
    conflict,
    unknown_id,
    domain_mismatch,
    not_total,
    inconsistent,
    ties_present,
    rank_overflow,
    foreign_agent,
    too_large,
    policy_gap,
    syntax,
    relation_invalid,
    invalid_scenario,
    io,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::cycle: return "CYCLE";
        case Errc::conflict: return "CONFLICT";
        case Errc::unknown_id: return "UNKNOWN_ID";
        case Errc::domain_mismatch: return "DOMAIN_MISMATCH";
        case Errc::not_total: return "NOT_TOTAL";
        case Errc::inconsistent: return "INCONSISTENT";
        case Errc::ties_present: return "TIES_PRESENT";
        case Errc::rank_overflow: return "RANK_OVERFLOW";
        case Errc::foreign_agent: return "FOREIGN_AGENT";
        case Errc::too_large: return "TOO_LARGE";
        case Errc::policy_gap: return "POLICY_GAP";
        case Errc::syntax: return "SYNTAX";
        case Errc::relation_invalid: return "RELATION_INVALID";
        case Errc::invalid_scenario: return "INVALID_SCENARIO";
        case Errc::io: return "IO";
    }
    return "UNKNOWN";
}

// Single exception type for all documented error classes; `line` is set for
// scenario-file diagnostics, 0 elsewhere.
class Error : public std::runtime_error {
  public:
    Error(Errc code, std::string message, int line = 0)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message +
                             (line > 0 ? " (line " + std::to_string(line) + ")" : "")),
          code_(code),
          line_(line) {}

    Errc code() const { return code_; }
    int line() const { return line_; }

  private:
    Errc code_;
    int line_;
};

// 64-bit FNV-1a of a token. Combined with the global seed this derives the
// per-entity generator streams, so every build is reproducible independently
// of iteration order.
inline std::uint64_t fnv1a64(std::string_view token) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : token) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// splitmix64 stream. Fixed across platforms; std::shuffle and the standard
// engines are not guaranteed to produce identical sequences everywhere, so
// the simulator rolls its own draws.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform draw in [0, n) by 128-bit multiply-shift.
    std::uint64_t bounded(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // Fisher-Yates. A vector of size <= 1 consumes no draws, which keeps the
    // v1/v2 draw sequences aligned on pools without ties.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::uint64_t state_;
};

// Generator stream for one entity: FNV-1a of the id token XOR the global seed.
inline Rng seeded_rng(std::uint64_t global_seed, std::string_view token) {
    return Rng(fnv1a64(token) ^ global_seed);
}

}  // namespace apb
