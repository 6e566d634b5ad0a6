#pragma once

#include <string>
#include <vector>

#include "becgs/initial.hpp"
#include "becgs/pcg.hpp"

namespace becgs {

/// Validated run configuration (sectioned key-value text document).
struct RunSpec {
    // [grid]
    double half_width = 0.0;
    Vec3 xi = {1.0, 1.0, 1.0};
    Vec3i counts = {0, 0, 0};
    int levels = 3;

    // [model]
    ModelParams model;

    // [solver]
    StoppingCriterion stop;                // tolerance defaults to 1e-10
    std::vector<GuessKind> guesses;        // the sweep; defaults to all ten
    int threads = 1;

    // [atkm]
    double epsilon_sog = 1e-12;
    double delta = 0.0;                    // 0 = default (min h * sqrt(eps_sog))
    std::string kernel_cache_dir;          // empty = no disk cache

    // [output]
    std::string output_dir = "out";
    bool write_field = true;
    std::vector<std::string> slices;       // plane specs such as "z=0"

    GridPtr make_target_grid() const;
};

/// Parses and validates; violations are reported with section.key paths.
RunSpec parse_config(const std::string& text);
RunSpec load_config_file(const std::string& path);

}  // namespace becgs
