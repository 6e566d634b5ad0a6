#pragma once

#include <memory>
#include <string>
#include <vector>

#include "becgs/config.hpp"
#include "becgs/io.hpp"
#include "becgs/multigrid.hpp"

namespace becgs {

struct GuessOutcome {
    GuessKind kind;
    double energy = 0.0;
    bool converged = false;
    int finest_iterations = 0;
};

struct RunArtifacts {
    std::string directory;
    GuessKind chosen = GuessKind::a;
    CascadeResult result;  // cascade of the selected guess
    EnergyReport report;
    std::vector<GuessOutcome> outcomes;
    double vortex_probe = 0.0;  // z=0 density minimum near the origin / peak
    bool converged = false;
    std::vector<std::string> written_files;
};

/// min density over z=0-plane grid points within a few cells of the origin,
/// relative to the peak density
double central_vortex_probe(const ComplexField& phi);

/// Builds per-level kernel tables (optionally disk-cached), sweeps the
/// requested guesses through the cascade, keeps the lowest energy (ties to
/// the earliest kind), writes diagnostics/report/field/slices.
RunArtifacts run(const RunSpec& spec);

}  // namespace becgs
