// apbsim: batch simulator for admission matching scenarios.
//
// Modes: run (single variant), compare (v1 with forced linearization against
// v2, same seed), oracle-check (exhaustive stable-set enumeration of the
// round-1 instance). Every documented error class exits with its own code.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "apb/apb.hpp"

namespace {

int exit_code_for(apb::Errc code) {
    switch (code) {
        case apb::Errc::syntax: return 2;
        case apb::Errc::unknown_id: return 3;
        case apb::Errc::relation_invalid: return 4;
        case apb::Errc::rank_overflow: return 5;
        case apb::Errc::invalid_scenario: return 6;
        case apb::Errc::too_large: return 7;
        case apb::Errc::policy_gap: return 8;
        case apb::Errc::io: return 9;
        case apb::Errc::cycle: return 10;
        case apb::Errc::conflict: return 11;
        case apb::Errc::domain_mismatch: return 12;
        case apb::Errc::not_total: return 13;
        case apb::Errc::inconsistent: return 14;
        case apb::Errc::ties_present: return 15;
        case apb::Errc::foreign_agent: return 16;
    }
    return 1;
}

void write_output(const std::string& text, const std::optional<std::string>& out_path) {
    if (!out_path) {
        std::cout << text;
        return;
    }
    std::ofstream out(*out_path, std::ios::binary);
    if (!out) throw apb::Error(apb::Errc::io, "cannot write to '" + *out_path + "'");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"admission matching simulator"};

    apb::RunSpec spec;
    std::string mode = "run";
    std::string variant;
    std::string foreign_bac;
    std::optional<std::string> out_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> rounds;
    std::optional<int> max_disj;

    cli.add_option("--scenario", spec.scenario_path, "scenario file")->required();
    cli.add_option("--seed", seed, "global seed, overrides the scenario [CONFIG]")
        ->envname("APBSIM_SEED");
    cli.add_option("--variant", variant, "institution-list builder: v1 or v2")
        ->check(CLI::IsMember({"v1", "v2"}));
    cli.add_option("--rounds", rounds, "number of proposal rounds")->check(CLI::PositiveNumber);
    cli.add_option("--foreign-bac-first", foreign_bac,
                   "give absolute priority to applicants with a foreign baccalaureate")
        ->check(CLI::IsMember({"true", "false"}));
    cli.add_option("--max-disj", max_disj, "largest disjunction size ranked before the overflow cell")
        ->check(CLI::PositiveNumber);
    cli.add_option("--out", out_path, "write the report to a file instead of stdout");
    cli.add_option("--mode", mode, "run | compare | oracle-check")
        ->check(CLI::IsMember({"run", "compare", "oracle-check"}));

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return cli.exit(e);
    }

    spec.seed = seed;
    spec.num_rounds = rounds;
    spec.max_disj = max_disj;
    if (!variant.empty())
        spec.variant = variant == "v1" ? apb::Variant::v1 : apb::Variant::v2;
    if (!foreign_bac.empty()) spec.foreign_bac_first = foreign_bac == "true";
    if (mode == "compare")
        spec.mode = apb::RunMode::compare;
    else if (mode == "oracle-check")
        spec.mode = apb::RunMode::oracle_check;

    try {
        apb::Scenario scenario = apb::load_scenario(spec.scenario_path);
        apb::RunConfig cfg = apb::effective_config(scenario, spec);
        switch (spec.mode) {
            case apb::RunMode::run:
                write_output(apb::run_report(scenario, cfg), out_path);
                return 0;
            case apb::RunMode::compare:
                write_output(apb::compare_report(scenario, cfg), out_path);
                return 0;
            case apb::RunMode::oracle_check: {
                apb::OracleOutcome outcome = apb::oracle_check_report(scenario, cfg);
                write_output(outcome.report, out_path);
                return outcome.passed ? 0 : 17;
            }
        }
        return 1;
    } catch (const apb::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
