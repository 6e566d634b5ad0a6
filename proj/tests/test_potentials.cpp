#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "becgs/oracle.hpp"
#include "becgs/potentials.hpp"

using namespace becgs;

namespace {

RealField unit_gaussian_density(GridPtr grid, double sigma, const Vec3& shift = {0, 0, 0}) {
    const double c = std::pow(2.0 * M_PI * sigma * sigma, -1.5);
    return RealField::sample(std::move(grid), [=](double x, double y, double z) {
        const double r2 = (x - shift[0]) * (x - shift[0]) + (y - shift[1]) * (y - shift[1]) +
                          (z - shift[2]) * (z - shift[2]);
        return c * std::exp(-r2 / (2.0 * sigma * sigma));
    });
}

double coulomb_closed_form(double r, double sigma) {
    if (r < 1e-12) return 1.0 / (4.0 * M_PI) * std::sqrt(2.0 / M_PI) / sigma;
    return std::erf(r / (sigma * std::sqrt(2.0))) / (4.0 * M_PI * r);
}

double max_coulomb_error(const RealField& phi, double sigma, const Vec3& shift = {0, 0, 0}) {
    const Grid& g = phi.grid();
    double worst = 0.0;
    std::size_t idx = 0;
    for (int i = 0; i < g.counts()[0]; ++i)
        for (int j = 0; j < g.counts()[1]; ++j)
            for (int k = 0; k < g.counts()[2]; ++k, ++idx) {
                const double x = g.coord(0, i) - shift[0];
                const double y = g.coord(1, j) - shift[1];
                const double z = g.coord(2, k) - shift[2];
                const double r = std::sqrt(x * x + y * y + z * z);
                worst = std::max(worst, std::abs(phi[idx] - coulomb_closed_form(r, sigma)));
            }
    return worst;
}

}  // namespace

TEST_CASE("dipole orientation must be unit length") {
    CHECK_THROWS_AS(DipoleOrientation(1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_NOTHROW(DipoleOrientation(0.0, 0.0, 1.0));
    const double s = 1.0 / std::sqrt(3.0);
    CHECK_NOTHROW(DipoleOrientation(s, s, s));
}

TEST_CASE("zero density maps to zero potential") {
    GridPtr g = build_grid(8.0, {1, 1, 1}, {16, 16, 16});
    const KernelTable table = build_kernel_table(g, 1e-10);
    RealField zero(g);
    const RealField phi = coulomb_potential(zero, table);
    const RealField phid = dipolar_potential(zero, table, DipoleOrientation(0, 0, 1));
    for (std::size_t i = 0; i < phi.size(); ++i) {
        CHECK(phi[i] == 0.0);
        CHECK(phid[i] == 0.0);
    }
}

TEST_CASE("Gaussian Coulomb potential matches the closed form") {
    GridPtr g = build_grid(16.0, {1, 1, 1}, {64, 64, 64});
    const KernelTable table = build_kernel_table(g, 1e-12);
    double imag = 0.0;
    const RealField phi = coulomb_potential(unit_gaussian_density(g, 1.0), table, &imag);
    CHECK(max_coulomb_error(phi, 1.0) <= 1e-10);
    CHECK(imag <= 1e-12);
}

TEST_CASE("translation equivariance of the Coulomb potential") {
    GridPtr g = build_grid(16.0, {1, 1, 1}, {64, 64, 64});
    const KernelTable table = build_kernel_table(g, 1e-12);
    const Vec3 shift = {1.0, -0.5, 1.5};  // all on-grid multiples of h = 0.5
    const RealField phi = coulomb_potential(unit_gaussian_density(g, 1.0, shift), table);
    CHECK(max_coulomb_error(phi, 1.0, shift) <= 1e-10);
}

TEST_CASE("spectral convergence to the closed form, then the expansion floor") {
    double prev = 0.0;
    double e16 = 0.0, e64 = 0.0;
    for (int n : {16, 32, 64}) {
        GridPtr g = build_grid(16.0, {1, 1, 1}, {n, n, n});
        const KernelTable table = build_kernel_table(g, 1e-12);
        const double err = max_coulomb_error(coulomb_potential(unit_gaussian_density(g, 1.0), table), 1.0);
        if (n == 16) e16 = err;
        if (n == 64) e64 = err;
        if (prev > 0.0) CHECK(err < prev);
        prev = err;
    }
    CHECK(e16 / e64 >= 1e4);
}

TEST_CASE("linearity of the potentials") {
    GridPtr g = build_grid(10.0, {1, 1, 1}, {16, 16, 16});
    const KernelTable table = build_kernel_table(g, 1e-10);
    const RealField r1 = unit_gaussian_density(g, 1.0);
    const RealField r2 = unit_gaussian_density(g, 1.7, {0.625, 0, -1.25});
    const double a = 0.7, b = -1.3;
    RealField mix(g);
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a * r1[i] + b * r2[i];

    const RealField p1 = coulomb_potential(r1, table);
    const RealField p2 = coulomb_potential(r2, table);
    const RealField pm = coulomb_potential(mix, table);
    double scale = 0.0, err = 0.0;
    for (std::size_t i = 0; i < pm.size(); ++i) {
        scale = std::max(scale, std::abs(pm[i]));
        err = std::max(err, std::abs(pm[i] - a * p1[i] - b * p2[i]));
    }
    CHECK(err <= 1e-12 * std::max(1.0, scale));
}

TEST_CASE("dipolar potential is even in the orientation") {
    GridPtr g = build_grid(10.0, {1, 1, 1}, {16, 16, 16});
    const KernelTable table = build_kernel_table(g, 1e-10);
    const RealField rho = unit_gaussian_density(g, 1.0);
    const double s = 1.0 / std::sqrt(2.0);
    const RealField plus = dipolar_potential(rho, table, DipoleOrientation(s, 0, s));
    const RealField minus = dipolar_potential(rho, table, DipoleOrientation(-s, 0, -s));
    for (std::size_t i = 0; i < plus.size(); i += 17) CHECK(plus[i] == minus[i]);
}

TEST_CASE("output realness residue stays at rounding level") {
    GridPtr g = build_grid(10.0, {1, 1, 1}, {32, 32, 32});
    const KernelTable table = build_kernel_table(g, 1e-12);
    double imag = 0.0;
    dipolar_potential(unit_gaussian_density(g, 1.2), table, DipoleOrientation(0, 0, 1), &imag);
    CHECK(imag <= 1e-12);
}

TEST_CASE("grid mismatch is rejected") {
    GridPtr g = build_grid(10.0, {1, 1, 1}, {16, 16, 16});
    GridPtr other = build_grid(10.0, {1, 1, 1}, {32, 32, 32});
    const KernelTable table = build_kernel_table(g, 1e-8);
    RealField rho(other);
    CHECK_THROWS_AS(coulomb_potential(rho, table), std::invalid_argument);
}

TEST_CASE("anisotropic grid reproduces the closed form") {
    // pancake box with xi = (1, 1, 0.5); the Gaussian still fits comfortably
    GridPtr g = build_grid(16.0, {1.0, 1.0, 0.5}, {64, 64, 32});
    const KernelTable table = build_kernel_table(g, 1e-12);
    const RealField phi = coulomb_potential(unit_gaussian_density(g, 1.0), table);
    CHECK(max_coulomb_error(phi, 1.0) <= 1e-10);
}

namespace {

// Coulomb potential of a normalized axisymmetric Gaussian (widths a, a, c)
// through the heat-kernel representation of 1/(4 pi r): a single smooth
// integral after the substitution s = 1/u^2 - 1.
double aniso_gauss_potential(double x, double y, double z, double a, double c) {
    auto integrand = [=](double u) {
        if (u <= 0.0) return std::pow(2.0 * M_PI, -1.5) * std::pow(2.0, -0.5);
        const double s = 1.0 / (u * u) - 1.0;
        const double vxy = a * a + 2.0 * s, vz = c * c + 2.0 * s;
        const double f = std::pow(2.0 * M_PI, -1.5) / (vxy * std::sqrt(vz)) *
                         std::exp(-0.5 * (x * x + y * y) / vxy - 0.5 * z * z / vz);
        return f * 2.0 / (u * u * u);
    };
    return oracle::adaptive_integrate(integrand, 0.0, 1.0, 1e-13);
}

}  // namespace

TEST_CASE("anisotropic-Gaussian oracle reduces to the erf closed form") {
    const double sigma = 0.8;
    for (double r : {0.0, 0.4, 1.3, 3.0}) {
        const double iso = aniso_gauss_potential(r, 0.0, 0.0, sigma, sigma);
        CHECK(iso == doctest::Approx(coulomb_closed_form(r, sigma)).epsilon(1e-11));
    }
}

TEST_CASE("strongly elongated cigar box with unequal counts") {
    // xi = (0.2, 0.2, 1) on [-2,2]^2 x [-10,10] with a source shaped like the
    // box: narrow in x, y and elongated in z
    GridPtr g = build_grid(10.0, {0.2, 0.2, 1.0}, {32, 32, 64});
    const KernelTable table = build_kernel_table(g, 1e-12);
    CHECK(table.size() == 8u * 32 * 32 * 64);

    const double sx = 0.25, sz = 1.5;
    const double c = std::pow(2.0 * M_PI, -1.5) / (sx * sx * sz);
    const RealField rho = RealField::sample(g, [=](double x, double y, double z) {
        return c * std::exp(-0.5 * (x * x + y * y) / (sx * sx) - 0.5 * z * z / (sz * sz));
    });
    const RealField phi = coulomb_potential(rho, table);

    const Grid& grid = *g;
    double worst = 0.0;
    for (int i = 0; i < 32; i += 4)
        for (int j = 0; j < 32; j += 4)
            for (int k = 0; k < 64; k += 4) {
                const double exact = aniso_gauss_potential(
                    grid.coord(0, i), grid.coord(1, j), grid.coord(2, k), sx, sz);
                worst = std::max(worst, std::abs(phi[grid.index(i, j, k)] - exact));
            }
    // the source tail at the z boundary (~2e-10 of peak) caps the accuracy
    CHECK(worst <= 1e-9);
}
