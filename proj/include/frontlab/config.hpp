#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "frontlab/geometry.hpp"
#include "frontlab/model.hpp"

namespace frontlab {

// Settings of a command-line run. Files use `key = value` lines grouped under
// `[section]` headers; see docs/config.md for the grammar and every key.
struct RunConfig {
    // [problem]: `recipe` plus the recipe's own parameters.
    ReactionRecipe recipe;

    // [grid]
    double h = 1.0 / 16.0;
    double tau = 1.0;
    double window_left = 30.0;
    double window_right = 30.0;
    Direction direction{1, 0};

    // [speed]
    double tol = 0.01;
    // Initializer level: ceiling - phi_fraction * (ceiling - floor).
    double phi_fraction = 0.15;
    double phi_width = 3.0;
    int n_max = 20000;
    bool cross_check = true;
    double spreading_t_max = 200.0;
    double spreading_sample_dt = 1.0;
    double datum_half_width = 40.0;

    // [steady]
    int n_constants = 30;
    int n_random = 10;
    std::uint64_t seed = 1;

    // [counterprop]
    double delta_fraction = 0.25;
    double counterprop_t_max = 120.0;

    // [refine]
    std::vector<double> taus{1.0, 0.5, 0.25};
    double refine_tol = 0.01;

    // [demo]
    double demo_L = 10.0;
    double demo_eps = 0.05;
    double demo_gap = 0.25;
    std::string demo_rule = "measured";
    std::string demo_preset = "full";

    // [output]
    std::string output_directory = "runs";

    // Every key present in the source, as "section.key" -> trimmed value.
    std::map<std::string, std::string> entries;
};

// Throws ConfigurationError on syntax errors, unknown sections or keys, keys
// outside a section and malformed values.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Sorted "section.key = value" lines; equal for configs with equal entries.
std::string canonical_text(const RunConfig& config);

// Lowercase hex SHA-256 of canonical_text.
std::string config_hash(const RunConfig& config);

// Keys accepted in each section ([problem] also takes the recipe's parameters).
const std::map<std::string, std::vector<std::string>>& config_schema();

}  // namespace frontlab
