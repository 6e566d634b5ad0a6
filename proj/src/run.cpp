#include "becgs/run.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace becgs {

namespace fs = std::filesystem;
using nlohmann::json;

double central_vortex_probe(const ComplexField& phi) {
    const Grid& g = phi.grid();
    const Vec3i n = g.counts();
    const int kz = n[2] / 2;  // z = 0 plane
    double peak = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) peak = std::max(peak, std::norm(phi[i]));
    if (peak == 0.0) return 0.0;

    // 3x3 patch of z=0 grid points around the origin: a centered vortex core
    // zeroes the middle sample, a vortex-free cloud peaks there
    const int cx = n[0] / 2, cy = n[1] / 2;
    double lowest = std::numeric_limits<double>::infinity();
    for (int i = cx - 1; i <= cx + 1; ++i)
        for (int j = cy - 1; j <= cy + 1; ++j)
            lowest = std::min(lowest, std::norm(phi[g.index(i, j, kz)]));
    return lowest / peak;
}

namespace {

std::string cache_path(const RunSpec& spec, const Grid& grid, double delta) {
    std::ostringstream ss;
    ss.precision(17);
    ss << "kernel_L" << grid.half_width() << "_xi" << grid.anisotropy()[0] << "_"
       << grid.anisotropy()[1] << "_" << grid.anisotropy()[2] << "_n" << grid.counts()[0] << "x"
       << grid.counts()[1] << "x" << grid.counts()[2] << "_d" << delta << "_e" << spec.epsilon_sog
       << ".bin";
    return (fs::path(spec.kernel_cache_dir) / ss.str()).string();
}

std::shared_ptr<const KernelTable> table_for_level(const RunSpec& spec, const GridPtr& grid) {
    const double delta =
        spec.delta > 0.0 ? spec.delta : default_sog_delta(*grid, spec.epsilon_sog);
    if (!spec.kernel_cache_dir.empty()) {
        fs::create_directories(spec.kernel_cache_dir);
        const std::string path = cache_path(spec, *grid, delta);
        if (fs::exists(path)) {
            try {
                auto loaded = std::make_shared<KernelTable>(KernelTable::load(path));
                if (loaded->matches(*grid, delta, spec.epsilon_sog)) return loaded;
            } catch (const std::exception& e) {
                std::cerr << "[becgs] ignoring unreadable kernel cache " << path << ": "
                          << e.what() << "\n";
            }
        }
        auto table = std::make_shared<KernelTable>(
            build_kernel_table(grid, spec.epsilon_sog, delta));
        table->save(path);
        return table;
    }
    return std::make_shared<KernelTable>(build_kernel_table(grid, spec.epsilon_sog, delta));
}

json report_json(const RunSpec& spec, const RunArtifacts& art) {
    const EnergyReport& r = art.report;
    json j;
    j["grid"] = {{"half_width", spec.half_width},
                 {"xi", spec.xi},
                 {"n", spec.counts},
                 {"levels", spec.levels}};
    j["model"] = {{"beta", spec.model.beta},
                  {"lambda", spec.model.lambda},
                  {"omega", spec.model.omega},
                  {"gamma", spec.model.gamma},
                  {"dipole_axis", spec.model.dipole.vector()}};
    j["solver"] = {{"tolerance", spec.stop.tolerance},
                   {"max_iterations", spec.stop.max_iterations}};
    j["chosen_guess"] = to_string(art.chosen);
    j["converged"] = art.converged;
    j["energy"] = {{"total", r.total},        {"kinetic", r.kinetic},
                   {"potential", r.potential}, {"interaction", r.interaction},
                   {"dipolar", r.dipolar},     {"rotational", r.rotational}};
    j["chemical_potential"] = r.chemical_potential;
    j["virial"] = r.virial;
    j["virial_residual"] = virial_residual(r);
    j["final_residual_norm"] = art.result.final.final_residual_norm;
    j["vortex_probe"] = art.vortex_probe;
    json sweeps = json::array();
    for (const auto& o : art.outcomes)
        sweeps.push_back({{"guess", to_string(o.kind)},
                          {"energy", o.energy},
                          {"converged", o.converged},
                          {"finest_iterations", o.finest_iterations}});
    j["guesses"] = sweeps;
    json levels = json::array();
    for (const auto& lv : art.result.levels)
        levels.push_back({{"level", lv.level},
                          {"n", lv.counts},
                          {"iterations", lv.iterations},
                          {"converged", lv.converged},
                          {"seed_energy", lv.seed_energy},
                          {"energy", lv.energy}});
    j["levels"] = levels;
    return j;
}

}  // namespace

RunArtifacts run(const RunSpec& spec) {
    set_fft_threads(spec.threads);
    GridPtr target = spec.make_target_grid();
    CascadeSchedule schedule = make_schedule(target, spec.levels, spec.stop);

    std::vector<std::shared_ptr<const KernelTable>> owned(schedule.levels());
    std::vector<const KernelTable*> tables(schedule.levels(), nullptr);
    if (spec.model.lambda != 0.0) {
        for (int i = 0; i < schedule.levels(); ++i) {
            owned[i] = table_for_level(spec, schedule.grids[i]);
            tables[i] = owned[i].get();
        }
    }

    RunArtifacts art;
    bool have_best = false;
    std::vector<DiagnosticsRow> diag;
    for (GuessKind kind : spec.guesses) {
        const ComplexField seed = make_initial(kind, schedule.grids.front(), spec.model);
        CascadeResult res = run_cascade(schedule, spec.model, seed, tables);

        for (const auto& lv : res.levels)
            for (const auto& rec : lv.trace)
                diag.push_back({to_string(kind), lv.level, rec});

        GuessOutcome outcome{kind, res.final.report.total, res.final.converged,
                             res.finest_iterations};
        art.outcomes.push_back(outcome);
        // strict improvement beyond a 1e-12 window keeps ties deterministic
        if (!have_best || outcome.energy < art.report.total - 1e-12) {
            have_best = true;
            art.chosen = kind;
            art.report = res.final.report;
            art.result = std::move(res);
        }
    }

    art.converged = art.result.final.converged;
    art.vortex_probe = central_vortex_probe(art.result.final.state);

    fs::create_directories(spec.output_dir);
    art.directory = spec.output_dir;
    const fs::path dir(spec.output_dir);

    {
        const std::string path = (dir / "diagnostics.csv").string();
        write_diagnostics_csv(diag, path);
        art.written_files.push_back(path);
    }
    if (spec.write_field) {
        const std::string path = (dir / "phi_g.field").string();
        dump_field(art.result.final.state, spec.model, path);
        art.written_files.push_back(path);
    }
    for (const std::string& s : spec.slices) {
        const SliceSpec slice = parse_slice_spec(s);
        std::string name = s;
        for (char& c : name)
            if (c == '=' || c == ' ' || c == '.') c = '_';
        const std::string path = (dir / ("slice_" + name + ".csv")).string();
        write_slice_csv(art.result.final.state, slice, path);
        art.written_files.push_back(path);
    }
    {
        const std::string path = (dir / "report.json").string();
        std::ofstream os(path);
        if (!os) throw std::runtime_error("run: cannot open " + path);
        os << report_json(spec, art).dump(2) << "\n";
        art.written_files.push_back(path);
    }
    return art;
}

}  // namespace becgs
