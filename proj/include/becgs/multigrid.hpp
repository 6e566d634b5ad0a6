#pragma once

#include <vector>

#include "becgs/pcg.hpp"

namespace becgs {

/// One-way coarse-to-fine schedule: level i has counts N_alpha / 2^{levels-1-i}.
struct CascadeSchedule {
    std::vector<GridPtr> grids;                 // coarsest first, finest last
    std::vector<StoppingCriterion> criteria;    // per level

    int levels() const { return static_cast<int>(grids.size()); }
    const GridPtr& finest() const { return grids.back(); }
};

/// Builds a schedule ending at `target`. Coarse tolerances follow
/// eps_i = max(eps_finest, 1e-8 * 100^{levels-1-i}); the finest level uses the
/// requested criterion verbatim.
CascadeSchedule make_schedule(GridPtr target, int levels, const StoppingCriterion& finest);

/// Embed the coarse Fourier coefficients in the fine spectral array (zero
/// padding the new high modes), transform back, renormalize.
ComplexField spectral_prolong(const ComplexField& phi_coarse, GridPtr fine);

struct LevelSummary {
    int level = 0;
    Vec3i counts{};
    int iterations = 0;
    bool converged = false;
    double energy = 0.0;
    double seed_energy = 0.0;  // energy of the prolonged seed on this level
    std::vector<IterationRecord> trace;
};

struct CascadeResult {
    SolveResult final;
    std::vector<LevelSummary> levels;
    int finest_iterations = 0;
};

/// Algorithm: solve on each level, prolong the minimizer as the next seed.
/// tables[i] may be null when params.lambda == 0.
CascadeResult run_cascade(const CascadeSchedule& schedule, const ModelParams& params,
                          const ComplexField& phi0_coarsest,
                          const std::vector<const KernelTable*>& tables);

}  // namespace becgs
