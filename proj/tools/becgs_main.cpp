// Command-line front end: ground-state solves, nonlocal-potential accuracy
// reports, and density-slice extraction from saved states.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>

#include "becgs/io.hpp"
#include "becgs/oracle.hpp"
#include "becgs/run.hpp"

namespace {

int cmd_solve(const std::string& config_path, const std::string& out_dir,
              const std::string& guess, int levels, int threads) {
    becgs::RunSpec spec = becgs::load_config_file(config_path);
    if (!out_dir.empty()) spec.output_dir = out_dir;
    if (!guess.empty()) {
        if (guess == "all") {
            spec.guesses = becgs::all_guess_kinds();
        } else {
            spec.guesses = {becgs::guess_kind_from_string(guess)};
        }
    }
    if (levels > 0) spec.levels = levels;
    if (threads > 0) spec.threads = threads;

    const becgs::RunArtifacts art = becgs::run(spec);
    const becgs::EnergyReport& r = art.report;
    std::cout.precision(12);
    std::cout << "guess " << becgs::to_string(art.chosen) << (art.converged ? "" : " (NOT converged)")
              << "\n"
              << "  E      = " << r.total << "\n"
              << "  mu     = " << r.chemical_potential << "\n"
              << "  E_kin  = " << r.kinetic << "  E_pot = " << r.potential << "\n"
              << "  E_int  = " << r.interaction << "  E_dip = " << r.dipolar
              << "  E_rot = " << r.rotational << "\n"
              << "  |I^h|  = " << becgs::virial_residual(r) << "\n"
              << "  ||r||  = " << art.result.final.final_residual_norm << "\n"
              << "  vortex probe (min/peak on z=0 near 0) = " << art.vortex_probe << "\n";
    for (const std::string& f : art.written_files) std::cout << "wrote " << f << "\n";
    return art.converged ? 0 : 2;
}

int cmd_potential_test(const std::string& config_path) {
    const becgs::RunSpec spec = becgs::load_config_file(config_path);
    becgs::set_fft_threads(spec.threads);
    becgs::GridPtr grid = spec.make_target_grid();

    std::cout << "building kernel table (eps_sog = " << spec.epsilon_sog << ") ...\n";
    const becgs::KernelTable table =
        becgs::build_kernel_table(grid, spec.epsilon_sog, spec.delta);
    std::cout << "  coefficients: " << table.size() << " (8N), delta = " << table.delta() << "\n";

    // Gaussian density against the closed-form Coulomb potential
    const double sigma = 1.0;
    const becgs::RealField rho =
        becgs::RealField::sample(grid, [sigma](double x, double y, double z) {
            const double r2 = x * x + y * y + z * z;
            return std::pow(2.0 * M_PI * sigma * sigma, -1.5) *
                   std::exp(-r2 / (2.0 * sigma * sigma));
        });
    double imag_residue = 0.0;
    const becgs::RealField phi = becgs::coulomb_potential(rho, table, &imag_residue);
    double max_err = 0.0;
    const becgs::Grid& g = *grid;
    std::size_t idx = 0;
    for (int i = 0; i < g.counts()[0]; ++i)
        for (int j = 0; j < g.counts()[1]; ++j)
            for (int k = 0; k < g.counts()[2]; ++k, ++idx) {
                const double x = g.coord(0, i), y = g.coord(1, j), z = g.coord(2, k);
                const double r = std::sqrt(x * x + y * y + z * z);
                const double exact = r > 1e-12
                                         ? std::erf(r / (sigma * std::sqrt(2.0))) / (4.0 * M_PI * r)
                                         : 1.0 / (4.0 * M_PI) * std::sqrt(2.0 / M_PI) / sigma;
                max_err = std::max(max_err, std::abs(phi[idx] - exact));
            }
    std::cout << "coulomb vs closed form: max pointwise error = " << max_err
              << ", imag residue = " << imag_residue << "\n";

    // lowest kernel coefficients against direct quadrature
    for (const becgs::Vec3i k : {becgs::Vec3i{0, 0, 0}, becgs::Vec3i{1, 0, 0},
                                 becgs::Vec3i{0, 1, 1}}) {
        const double tabled = table.coefficient(k[0], k[1], k[2]);
        const double direct = becgs::oracle::kernel_coefficient_oracle(g, k);
        std::cout << "U_hat(" << k[0] << "," << k[1] << "," << k[2] << "): table = " << tabled
                  << ", quadrature = " << direct << ", diff = " << std::abs(tabled - direct)
                  << "\n";
    }

    // dipolar potential against the quadrature oracle at a few probe points
    const becgs::RealField phid = becgs::dipolar_potential(rho, table, spec.model.dipole);
    becgs::oracle::ConvolutionOptions opt;
    opt.tol = 1e-7;
    opt.outer_radius = 10.0 * sigma;
    auto gauss = [sigma](double x, double y, double z) {
        return std::pow(2.0 * M_PI * sigma * sigma, -1.5) *
               std::exp(-(x * x + y * y + z * z) / (2.0 * sigma * sigma));
    };
    const becgs::Vec3 n = spec.model.dipole.vector();
    auto dnn = [sigma, n, gauss](double x, double y, double z) {
        const double s2 = sigma * sigma;
        const double proj = (n[0] * x + n[1] * y + n[2] * z) / s2;
        return gauss(x, y, z) * (proj * proj - 1.0 / s2);
    };
    double max_dip_err = 0.0;
    for (int probe = 0; probe < 3; ++probe) {
        const int i = g.counts()[0] / 2 + probe, j = g.counts()[1] / 2 - probe,
                  k = g.counts()[2] / 2 + 2 * probe;
        const becgs::Vec3 x = {g.coord(0, i), g.coord(1, j), g.coord(2, k)};
        opt.outer_radius = 10.0 * sigma + std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        const double direct = becgs::oracle::dipolar_convolution_at(gauss, dnn, x, opt);
        const double err = std::abs(phid[g.index(i, j, k)] - direct);
        std::cout << "dipolar at (" << x[0] << "," << x[1] << "," << x[2] << "): atkm = "
                  << phid[g.index(i, j, k)] << ", quadrature = " << direct << ", diff = " << err
                  << "\n";
        max_dip_err = std::max(max_dip_err, err);
    }
    std::cout << "dipolar vs quadrature oracle: max diff = " << max_dip_err << "\n";
    return 0;
}

int cmd_slice(const std::string& dump_path, const std::string& plane, const std::string& out) {
    const becgs::FieldDump dump = becgs::load_field(dump_path);
    const becgs::SliceSpec spec = becgs::parse_slice_spec(plane);
    becgs::write_slice_csv(dump.field, spec, out);
    std::cout << "wrote " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ground states of rotating dipolar condensates (spectral PCG)"};
    app.require_subcommand(1);
    std::cout.setf(std::ios::scientific);

    std::string config_path, out_dir, guess, plane = "z=0", out_file = "slice.csv", dump_path;
    int levels = 0, threads = 0;

    CLI::App* solve = app.add_subcommand("solve", "compute a ground state from a config file");
    solve->add_option("config", config_path, "run configuration")->required();
    solve->add_option("--out", out_dir, "output directory (overrides config)");
    solve->add_option("--guess", guess, "initial guess kind or 'all'");
    solve->add_option("--levels", levels, "multigrid levels (overrides config)");
    solve->add_option("--threads", threads, "FFT threads (overrides config/env)");

    CLI::App* ptest = app.add_subcommand("potential-test",
                                         "nonlocal potential accuracy report (vs oracles)");
    ptest->add_option("config", config_path, "run configuration")->required();

    CLI::App* slice = app.add_subcommand("slice", "extract a density plane from a field dump");
    slice->add_option("dump", dump_path, "field dump path")->required();
    slice->add_option("--plane", plane, "plane spec, e.g. z=0");
    slice->add_option("--out", out_file, "output CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(config_path, out_dir, guess, levels, threads);
        if (ptest->parsed()) return cmd_potential_test(config_path);
        if (slice->parsed()) return cmd_slice(dump_path, plane, out_file);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
