#include "becgs/multigrid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace becgs {

CascadeSchedule make_schedule(GridPtr target, int levels, const StoppingCriterion& finest) {
    if (levels < 1) throw std::invalid_argument("make_schedule: need at least one level");
    const Vec3i n = target->counts();
    for (int a = 0; a < 3; ++a) {
        const int div = 1 << (levels - 1);
        if (n[a] % div != 0 || (n[a] / div) % 2 != 0 || n[a] / div < 4)
            throw std::invalid_argument(
                "make_schedule: counts not divisible into " + std::to_string(levels) +
                " even levels (axis count " + std::to_string(n[a]) + ")");
    }
    CascadeSchedule sched;
    for (int i = 0; i < levels; ++i) {
        const int div = 1 << (levels - 1 - i);
        if (i + 1 == levels) {
            sched.grids.push_back(target);
        } else {
            sched.grids.push_back(
                Grid::make(target->half_width(), target->anisotropy(),
                           {n[0] / div, n[1] / div, n[2] / div}));
        }
        StoppingCriterion c = finest;
        if (i + 1 < levels)
            c.tolerance = std::max(finest.tolerance, 1e-8 * std::pow(100.0, levels - 1 - i));
        sched.criteria.push_back(c);
    }
    return sched;
}

ComplexField spectral_prolong(const ComplexField& phi_coarse, GridPtr fine) {
    const Grid& cg = phi_coarse.grid();
    const Grid& fg = *fine;
    if (cg.half_width() != fg.half_width() || cg.anisotropy() != fg.anisotropy())
        throw std::invalid_argument("spectral_prolong: grids cover different domains");
    const Vec3i cn = cg.counts();
    const Vec3i fn = fg.counts();
    for (int a = 0; a < 3; ++a)
        if (fn[a] != 2 * cn[a])
            throw std::invalid_argument("spectral_prolong: fine grid must double each count");

    ComplexField spec = forward_transform(phi_coarse);
    ComplexField out(fine, Space::spectral);
    for (int bx = 0; bx < cn[0]; ++bx) {
        const int fx = fg.mode_to_bin(0, cg.bin_to_mode(0, bx));
        for (int by = 0; by < cn[1]; ++by) {
            const int fy = fg.mode_to_bin(1, cg.bin_to_mode(1, by));
            for (int bz = 0; bz < cn[2]; ++bz) {
                const int fz = fg.mode_to_bin(2, cg.bin_to_mode(2, bz));
                out[fg.index(fx, fy, fz)] = spec[cg.index(bx, by, bz)];
            }
        }
    }
    out.to_physical();
    normalize(out);
    return out;
}

CascadeResult run_cascade(const CascadeSchedule& schedule, const ModelParams& params,
                          const ComplexField& phi0_coarsest,
                          const std::vector<const KernelTable*>& tables) {
    const int levels = schedule.levels();
    if (levels == 0) throw std::invalid_argument("run_cascade: empty schedule");
    if (static_cast<int>(tables.size()) != levels)
        throw std::invalid_argument("run_cascade: one kernel table (or null) per level required");
    if (!phi0_coarsest.grid().same_layout(*schedule.grids.front()))
        throw std::invalid_argument("run_cascade: seed lives on the wrong grid");

    CascadeResult result;
    ComplexField seed = phi0_coarsest;
    for (int i = 0; i < levels; ++i) {
        double seed_energy = 0.0;
        SolveResult res;
        try {
            seed_energy = energy_value(seed, params, tables[i]);
            res = minimize(seed, params, tables[i], schedule.criteria[i]);
        } catch (const std::exception& e) {
            throw std::runtime_error("cascade level " + std::to_string(i) + ": " + e.what());
        }

        LevelSummary summary;
        summary.level = i;
        summary.counts = schedule.grids[i]->counts();
        summary.iterations = res.iterations;
        summary.converged = res.converged;
        summary.energy = res.report.total;
        summary.seed_energy = seed_energy;
        summary.trace = res.trace;
        result.levels.push_back(std::move(summary));

        if (i + 1 < levels) {
            seed = spectral_prolong(res.state, schedule.grids[i + 1]);
        } else {
            result.finest_iterations = res.iterations;
            result.final = std::move(res);
        }
    }
    return result;
}

}  // namespace becgs
