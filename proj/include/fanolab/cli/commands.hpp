#pragma once

#include "fanolab/cli/report.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fanolab::cli {

/// Identity suites: bochner, k1, prop6, theorem_e, complex_structure, linearization, coupled; "all" runs every one.
const std::vector<std::string>& identity_suites();

struct IdentitiesConfig {
    std::vector<std::string> suites{"all"};
    /// Empty: each suite's default dimensions.
    std::vector<int> m;
    std::vector<std::uint64_t> seeds = parse_seeds("50");
    bool control = false;
    /// <= 0 keeps each identity's default.
    double tolerance = 0;
    int jobs = 1;
};

CommandResult run_identities(const IdentitiesConfig& c);

struct SpectrumConfig {
    std::string manifold = "cp1";
    int basis = 12;
    std::string perturb;
    std::string normalization = "kahler_class";
    int compare = 15;
    int form_draws = 0;
    int pairing_draws = 0;
    std::uint64_t seed = 1;
    std::string csv;
    std::string forms_csv;
    std::string plot;
};

CommandResult run_spectrum(const SpectrumConfig& c);

struct KuranishiConfig {
    std::string builtin;
    std::string file;
    int order = 8;
    /// "order=2"; empty expects no obstruction.
    std::string expect_obstruction;
};

CommandResult run_kuranishi(const KuranishiConfig& c);

} // namespace fanolab::cli
