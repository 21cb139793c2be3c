// Scenario files: a line-oriented sectioned text format describing studies,
// applicants, preference statements, answer policies and run configuration.
// Parsing validates everything up front and reports line numbers; the
// serializer emits a canonical form so identical scenarios are identical
// bytes.
#pragma once

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "apb/core.hpp"
#include "apb/preference.hpp"
#include "apb/ranking.hpp"

namespace apb {

enum class AdmissionKind { selective, limited, unlimited };
enum class BacOrigin { local, abroad };
enum class Variant { v1, v2 };

enum class AnswerKind { definitely_yes, yes_but, no_but, resign };

inline const char* answer_name(AnswerKind a) {
    switch (a) {
        case AnswerKind::definitely_yes: return "definitely_yes";
        case AnswerKind::yes_but: return "yes_but";
        case AnswerKind::no_but: return "no_but";
        case AnswerKind::resign: return "resign";
    }
    return "?";
}

enum class PolicyKind { always_definitely_yes, yes_but_until_first_choice, scripted };

// Deterministic stand-in for the human answer in each round.
struct AnswerPolicy {
    PolicyKind kind = PolicyKind::always_definitely_yes;
    std::map<int, AnswerKind> script;  // round number -> answer, for scripted

    bool operator==(const AnswerPolicy&) const = default;
};

struct StudyProgram {
    std::string id;
    std::string academy;
    AdmissionKind kind = AdmissionKind::limited;
    int capacity = 0;  // meaningful for selective and limited studies
    std::string family;
    std::vector<std::string> selective_list;  // exogenous ranking, selective only

    bool operator==(const StudyProgram&) const = default;
};

struct Applicant {
    std::string id;
    std::string academy;
    BacOrigin bac = BacOrigin::local;
    PreferenceRelation prefs;
    AnswerPolicy policy;

    bool operator==(const Applicant&) const = default;
};

struct ScenarioConfig {
    std::uint64_t seed = 0;
    Variant variant = Variant::v2;
    int num_rounds = 3;
    bool foreign_bac_first = false;
    int max_disj = kMaxWishRank;

    bool operator==(const ScenarioConfig&) const = default;
};

struct Scenario {
    ScenarioConfig config;
    std::vector<StudyProgram> studies;    // sorted by id after parse
    std::vector<Applicant> applicants;    // sorted by id after parse

    bool operator==(const Scenario&) const = default;

    const StudyProgram* find_study(const std::string& id) const {
        for (const auto& s : studies)
            if (s.id == id) return &s;
        return nullptr;
    }
    const Applicant* find_applicant(const std::string& id) const {
        for (const auto& a : applicants)
            if (a.id == id) return &a;
        return nullptr;
    }
    std::map<ObjectId, std::string> family_map() const {
        std::map<ObjectId, std::string> out;
        for (const auto& s : studies) out.emplace(s.id, s.family);
        return out;
    }
};

namespace detail {

inline std::string trim(std::string_view sv) {
    const char* ws = " \t\r\n";
    auto b = sv.find_first_not_of(ws);
    if (b == std::string_view::npos) return "";
    auto e = sv.find_last_not_of(ws);
    return std::string(sv.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view sv, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = sv.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(sv.substr(start)));
            break;
        }
        out.push_back(trim(sv.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

inline long parse_int(const std::string& text, int line, const char* what) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw Error(Errc::syntax, std::string("expected an integer for ") + what + ", got '" +
                                      text + "'", line);
    return value;
}

inline std::uint64_t parse_u64(const std::string& text, int line, const char* what) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw Error(Errc::syntax, std::string("expected an unsigned integer for ") + what +
                                      ", got '" + text + "'", line);
    return value;
}

inline bool parse_bool(const std::string& text, int line, const char* what) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw Error(Errc::syntax, std::string("expected true/false for ") + what + ", got '" + text +
                                  "'", line);
}

// Preference field: comma-separated chain expressions. A chain alternates
// tiers joined by '>' where each tier is one or more ids joined by '='; the
// expansion emits the pairwise statements within a tier and between
// consecutive tiers ("S1=S2>S3" becomes S1=S2, S1>S3, S2>S3).
inline void parse_pref_field(const std::string& field, int line,
                             std::vector<ObjectId>& domain, std::vector<Statement>& statements) {
    std::set<ObjectId> seen;
    auto add_id = [&](const std::string& id) {
        if (id.empty()) throw Error(Errc::syntax, "empty study id in preference field", line);
        if (seen.insert(id).second) domain.push_back(id);
    };
    if (trim(field).empty()) return;
    for (const auto& chain : split(field, ',')) {
        if (chain.empty()) throw Error(Errc::syntax, "empty preference chain", line);
        std::vector<std::vector<std::string>> tiers;
        for (const auto& tier_text : split(chain, '>')) {
            std::vector<std::string> tier = split(tier_text, '=');
            for (const auto& id : tier) add_id(id);
            if (tier.empty() || std::any_of(tier.begin(), tier.end(),
                                            [](const std::string& s) { return s.empty(); }))
                throw Error(Errc::syntax, "malformed preference chain '" + chain + "'", line);
            tiers.push_back(std::move(tier));
        }
        for (std::size_t t = 0; t < tiers.size(); ++t) {
            const auto& tier = tiers[t];
            for (std::size_t i = 0; i < tier.size(); ++i)
                for (std::size_t j = i + 1; j < tier.size(); ++j)
                    statements.push_back(indiff(tier[i], tier[j]));
            if (t + 1 < tiers.size())
                for (const auto& hi : tier)
                    for (const auto& lo : tiers[t + 1]) statements.push_back(strict(hi, lo));
        }
    }
}

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace detail

inline AnswerKind parse_answer(const std::string& text, int line) {
    if (text == "definitely_yes") return AnswerKind::definitely_yes;
    if (text == "yes_but") return AnswerKind::yes_but;
    if (text == "no_but") return AnswerKind::no_but;
    if (text == "resign") return AnswerKind::resign;
    throw Error(Errc::syntax, "unknown answer '" + text + "'", line);
}

inline AnswerPolicy parse_policy(const std::string& text, int line) {
    AnswerPolicy p;
    if (text == "always_definitely_yes") {
        p.kind = PolicyKind::always_definitely_yes;
        return p;
    }
    if (text == "yes_but_until_first_choice") {
        p.kind = PolicyKind::yes_but_until_first_choice;
        return p;
    }
    if (text.rfind("scripted:", 0) == 0) {
        p.kind = PolicyKind::scripted;
        for (const auto& entry : detail::split(text.substr(9), ';')) {
            auto kv = detail::split(entry, '=');
            if (kv.size() != 2)
                throw Error(Errc::syntax, "malformed scripted entry '" + entry + "'", line);
            const long round = detail::parse_int(kv[0], line, "scripted round");
            if (round < 1) throw Error(Errc::syntax, "scripted round must be >= 1", line);
            if (!p.script.emplace(static_cast<int>(round), parse_answer(kv[1], line)).second)
                throw Error(Errc::syntax, "duplicate scripted round " + kv[0], line);
        }
        if (p.script.empty()) throw Error(Errc::syntax, "empty scripted policy", line);
        return p;
    }
    throw Error(Errc::syntax, "unknown policy '" + text + "'", line);
}

inline std::string policy_to_string(const AnswerPolicy& p) {
    switch (p.kind) {
        case PolicyKind::always_definitely_yes: return "always_definitely_yes";
        case PolicyKind::yes_but_until_first_choice: return "yes_but_until_first_choice";
        case PolicyKind::scripted: {
            std::vector<std::string> entries;
            for (const auto& [round, ans] : p.script)
                entries.push_back(std::to_string(round) + "=" + answer_name(ans));
            return "scripted:" + detail::join(entries, ";");
        }
    }
    return "?";
}

// Parses and fully validates a scenario. Sections may appear in any order;
// lines starting with '#' are comments. Everything the round engine assumes
// is checked here: known ids, valid relations, wish lists within the rank
// cap, selective lists present and well-formed.
inline Scenario parse_scenario(std::string_view text) {
    struct Line {
        int number;
        std::string text;
    };
    std::map<std::string, std::vector<Line>> sections;
    std::map<std::string, int> section_line;
    {
        static const std::set<std::string> known = {"CONFIG", "FAMILIES", "STUDIES",
                                                    "APPLICANTS", "SELECTIVE_LISTS", "POLICIES"};
        std::string current;
        int number = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            auto nl = text.find('\n', pos);
            std::string line = detail::trim(text.substr(
                pos, nl == std::string_view::npos ? text.size() - pos : nl - pos));
            ++number;
            pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
            if (line.empty() || line[0] == '#') continue;
            if (line.front() == '[' && line.back() == ']') {
                current = line.substr(1, line.size() - 2);
                if (!known.count(current))
                    throw Error(Errc::syntax, "unknown section [" + current + "]", number);
                if (!section_line.emplace(current, number).second)
                    throw Error(Errc::syntax, "duplicate section [" + current + "]", number);
                continue;
            }
            if (current.empty())
                throw Error(Errc::syntax, "content before any section header", number);
            sections[current].push_back({number, line});
        }
    }

    Scenario sc;

    for (const auto& ln : sections["CONFIG"]) {
        auto kv = detail::split(ln.text, '=');
        if (kv.size() != 2) throw Error(Errc::syntax, "expected 'key = value'", ln.number);
        const std::string& key = kv[0];
        const std::string& value = kv[1];
        if (key == "seed") {
            sc.config.seed = detail::parse_u64(value, ln.number, "seed");
        } else if (key == "variant") {
            if (value == "v1")
                sc.config.variant = Variant::v1;
            else if (value == "v2")
                sc.config.variant = Variant::v2;
            else
                throw Error(Errc::syntax, "variant must be v1 or v2", ln.number);
        } else if (key == "num_rounds") {
            const long v = detail::parse_int(value, ln.number, "num_rounds");
            if (v < 1) throw Error(Errc::syntax, "num_rounds must be >= 1", ln.number);
            sc.config.num_rounds = static_cast<int>(v);
        } else if (key == "foreign_bac_first") {
            sc.config.foreign_bac_first = detail::parse_bool(value, ln.number, "foreign_bac_first");
        } else if (key == "max_disj") {
            const long v = detail::parse_int(value, ln.number, "max_disj");
            if (v < 1) throw Error(Errc::syntax, "max_disj must be >= 1", ln.number);
            sc.config.max_disj = static_cast<int>(v);
        } else {
            throw Error(Errc::syntax, "unknown config key '" + key + "'", ln.number);
        }
    }

    std::map<std::string, int> study_line;
    for (const auto& ln : sections["STUDIES"]) {
        auto fields = detail::split(ln.text, '|');
        if (fields.size() != 4)
            throw Error(Errc::syntax, "expected 'id | academy | kind | capacity'", ln.number);
        StudyProgram s;
        s.id = fields[0];
        s.academy = fields[1];
        if (s.id.empty() || s.academy.empty())
            throw Error(Errc::syntax, "study id and academy must be nonempty", ln.number);
        if (fields[2] == "selective")
            s.kind = AdmissionKind::selective;
        else if (fields[2] == "limited")
            s.kind = AdmissionKind::limited;
        else if (fields[2] == "unlimited")
            s.kind = AdmissionKind::unlimited;
        else
            throw Error(Errc::syntax, "admission kind must be selective/limited/unlimited",
                        ln.number);
        if (s.kind == AdmissionKind::unlimited) {
            if (fields[3] != "-")
                throw Error(Errc::syntax, "capacity of an unlimited study must be '-'", ln.number);
        } else {
            const long cap = detail::parse_int(fields[3], ln.number, "capacity");
            if (cap < 1) throw Error(Errc::syntax, "capacity must be >= 1", ln.number);
            s.capacity = static_cast<int>(cap);
        }
        if (!study_line.emplace(s.id, ln.number).second)
            throw Error(Errc::syntax, "duplicate study id '" + s.id + "'", ln.number);
        sc.studies.push_back(std::move(s));
    }
    std::sort(sc.studies.begin(), sc.studies.end(),
              [](const StudyProgram& a, const StudyProgram& b) { return a.id < b.id; });

    auto study_of = [&sc](const std::string& id) -> StudyProgram* {
        for (auto& s : sc.studies)
            if (s.id == id) return &s;
        return nullptr;
    };

    for (const auto& ln : sections["FAMILIES"]) {
        auto fields = detail::split(ln.text, '|');
        if (fields.size() != 2)
            throw Error(Errc::syntax, "expected 'study | family'", ln.number);
        StudyProgram* s = study_of(fields[0]);
        if (!s) throw Error(Errc::unknown_id, "unknown study '" + fields[0] + "'", ln.number);
        if (fields[1].empty()) throw Error(Errc::syntax, "empty family tag", ln.number);
        if (!s->family.empty())
            throw Error(Errc::syntax, "duplicate family tag for study '" + s->id + "'", ln.number);
        s->family = fields[1];
    }
    for (const auto& s : sc.studies)
        if (s.family.empty())
            throw Error(Errc::invalid_scenario, "study '" + s.id + "' has no family tag",
                        study_line.at(s.id));

    std::map<std::string, int> applicant_line;
    for (const auto& ln : sections["APPLICANTS"]) {
        auto fields = detail::split(ln.text, '|');
        if (fields.size() != 4)
            throw Error(Errc::syntax, "expected 'id | academy | bac | preferences'", ln.number);
        Applicant app;
        app.id = fields[0];
        app.academy = fields[1];
        if (app.id.empty() || app.academy.empty())
            throw Error(Errc::syntax, "applicant id and academy must be nonempty", ln.number);
        if (fields[2] == "local")
            app.bac = BacOrigin::local;
        else if (fields[2] == "abroad")
            app.bac = BacOrigin::abroad;
        else
            throw Error(Errc::syntax, "bac origin must be local or abroad", ln.number);

        std::vector<ObjectId> domain;
        std::vector<Statement> statements;
        detail::parse_pref_field(fields[3], ln.number, domain, statements);
        for (const auto& id : domain)
            if (!study_of(id))
                throw Error(Errc::unknown_id, "applicant '" + app.id + "' ranks unknown study '" +
                                                  id + "'", ln.number);
        try {
            app.prefs = PreferenceRelation::build(std::move(domain), statements);
        } catch (const Error& e) {
            throw Error(Errc::relation_invalid,
                        "applicant '" + app.id + "': " + e.what(), ln.number);
        }
        const auto linearized = linearize_optimistic(app.prefs);
        if (static_cast<int>(linearized.classes.size()) > kMaxWishRank)
            throw Error(Errc::rank_overflow,
                        "applicant '" + app.id + "' has " +
                            std::to_string(linearized.classes.size()) +
                            " preference classes; the platform caps wish lists at " +
                            std::to_string(kMaxWishRank), ln.number);
        if (!applicant_line.emplace(app.id, ln.number).second)
            throw Error(Errc::syntax, "duplicate applicant id '" + app.id + "'", ln.number);
        sc.applicants.push_back(std::move(app));
    }
    std::sort(sc.applicants.begin(), sc.applicants.end(),
              [](const Applicant& a, const Applicant& b) { return a.id < b.id; });

    auto applicant_of = [&sc](const std::string& id) -> Applicant* {
        for (auto& a : sc.applicants)
            if (a.id == id) return &a;
        return nullptr;
    };

    for (const auto& ln : sections["SELECTIVE_LISTS"]) {
        auto fields = detail::split(ln.text, '|');
        if (fields.size() != 2)
            throw Error(Errc::syntax, "expected 'study | applicant,applicant,...'", ln.number);
        StudyProgram* s = study_of(fields[0]);
        if (!s) throw Error(Errc::unknown_id, "unknown study '" + fields[0] + "'", ln.number);
        if (s->kind != AdmissionKind::selective)
            throw Error(Errc::syntax, "study '" + s->id + "' is not selective", ln.number);
        if (!s->selective_list.empty())
            throw Error(Errc::syntax, "duplicate selective list for '" + s->id + "'", ln.number);
        std::set<std::string> seen;
        for (const auto& id : detail::split(fields[1], ',')) {
            if (id.empty()) continue;  // allows an explicitly empty list
            if (!applicant_of(id))
                throw Error(Errc::unknown_id, "unknown applicant '" + id + "'", ln.number);
            if (!seen.insert(id).second)
                throw Error(Errc::syntax, "applicant '" + id + "' repeated in selective list",
                            ln.number);
            s->selective_list.push_back(id);
        }
    }
    for (const auto& s : sc.studies)
        if (s.kind == AdmissionKind::selective && s.selective_list.empty() &&
            !sc.applicants.empty())
            throw Error(Errc::invalid_scenario,
                        "selective study '" + s.id + "' has no exogenous applicant list",
                        study_line.at(s.id));

    std::optional<AnswerPolicy> default_policy;
    std::map<std::string, AnswerPolicy> explicit_policies;
    for (const auto& ln : sections["POLICIES"]) {
        auto fields = detail::split(ln.text, '|');
        if (fields.size() != 2)
            throw Error(Errc::syntax, "expected 'applicant | policy'", ln.number);
        AnswerPolicy policy = parse_policy(fields[1], ln.number);
        if (fields[0] == "default") {
            if (default_policy)
                throw Error(Errc::syntax, "duplicate default policy", ln.number);
            default_policy = policy;
        } else {
            if (!applicant_of(fields[0]))
                throw Error(Errc::unknown_id, "unknown applicant '" + fields[0] + "'", ln.number);
            if (!explicit_policies.emplace(fields[0], policy).second)
                throw Error(Errc::syntax, "duplicate policy for '" + fields[0] + "'", ln.number);
        }
    }
    for (auto& app : sc.applicants) {
        auto it = explicit_policies.find(app.id);
        if (it != explicit_policies.end())
            app.policy = it->second;
        else if (default_policy)
            app.policy = *default_policy;
    }

    return sc;
}

// Canonical text for a scenario: fixed section and key order, records sorted
// by id, preference relations reduced to a minimal statement set (indifference
// chains per equivalence class plus the transitive reduction of the strict
// order between classes).
inline std::string serialize_relation(const PreferenceRelation& rel) {
    const auto& domain = rel.domain();
    // Equivalence classes under indifference, keyed by smallest member.
    std::map<ObjectId, std::vector<ObjectId>> classes;
    std::map<ObjectId, ObjectId> rep_of;
    for (const auto& id : domain) {
        if (rep_of.count(id)) continue;
        std::vector<ObjectId> cls{id};
        for (const auto& other : domain)
            if (other != id && rel.indifferent(id, other)) cls.push_back(other);
        std::sort(cls.begin(), cls.end());
        for (const auto& member : cls) rep_of[member] = cls.front();
        classes.emplace(cls.front(), std::move(cls));
    }
    std::vector<std::string> statements;
    std::set<ObjectId> covered;
    for (const auto& [rep, cls] : classes)
        if (cls.size() > 1) {
            statements.push_back(detail::join(cls, "="));
            covered.insert(cls.begin(), cls.end());
        }
    // Transitive reduction of the strict order between class representatives;
    // closure at parse time restores the full relation.
    for (const auto& [a, cls_a] : classes)
        for (const auto& [b, cls_b] : classes) {
            if (a == b || !rel.strictly_prefers(a, b)) continue;
            bool implied = false;
            for (const auto& [c, cls_c] : classes)
                if (c != a && c != b && rel.strictly_prefers(a, c) && rel.strictly_prefers(c, b)) {
                    implied = true;
                    break;
                }
            if (!implied) {
                statements.push_back(a + ">" + b);
                covered.insert(cls_a.begin(), cls_a.end());
                covered.insert(cls_b.begin(), cls_b.end());
            }
        }
    // Objects no statement mentions are emitted as bare tokens so the domain
    // survives the round trip.
    for (const auto& id : domain)
        if (!covered.count(id)) statements.push_back(id);
    std::sort(statements.begin(), statements.end());
    return detail::join(statements, ",");
}

inline std::string serialize_scenario(const Scenario& sc) {
    std::ostringstream out;
    out << "[CONFIG]\n";
    out << "seed = " << sc.config.seed << "\n";
    out << "variant = " << (sc.config.variant == Variant::v1 ? "v1" : "v2") << "\n";
    out << "num_rounds = " << sc.config.num_rounds << "\n";
    out << "foreign_bac_first = " << (sc.config.foreign_bac_first ? "true" : "false") << "\n";
    out << "max_disj = " << sc.config.max_disj << "\n";

    out << "[STUDIES]\n";
    for (const auto& s : sc.studies) {
        out << s.id << " | " << s.academy << " | ";
        switch (s.kind) {
            case AdmissionKind::selective: out << "selective | " << s.capacity; break;
            case AdmissionKind::limited: out << "limited | " << s.capacity; break;
            case AdmissionKind::unlimited: out << "unlimited | -"; break;
        }
        out << "\n";
    }

    out << "[FAMILIES]\n";
    for (const auto& s : sc.studies) out << s.id << " | " << s.family << "\n";

    out << "[APPLICANTS]\n";
    for (const auto& a : sc.applicants) {
        out << a.id << " | " << a.academy << " | "
            << (a.bac == BacOrigin::local ? "local" : "abroad") << " | "
            << serialize_relation(a.prefs) << "\n";
    }

    out << "[SELECTIVE_LISTS]\n";
    for (const auto& s : sc.studies)
        if (s.kind == AdmissionKind::selective)
            out << s.id << " | " << detail::join(s.selective_list, ",") << "\n";

    out << "[POLICIES]\n";
    for (const auto& a : sc.applicants) out << a.id << " | " << policy_to_string(a.policy) << "\n";

    return out.str();
}

}  // namespace apb
