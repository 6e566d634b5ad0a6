#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "becgs/initial.hpp"

using namespace becgs;

namespace {

ModelParams demo_params() {
    ModelParams p;
    p.beta = 100.0;
    p.omega = 0.4;
    return p;
}

// winding number of the phase along a small grid square around the z axis
int winding_on_loop(const ComplexField& phi) {
    const Grid& g = phi.grid();
    const int cx = g.counts()[0] / 2, cy = g.counts()[1] / 2, cz = g.counts()[2] / 2;
    const int r = 2;
    std::vector<Complex> loop;
    for (int i = -r; i < r; ++i) loop.push_back(phi[g.index(cx + i, cy - r, cz)]);
    for (int j = -r; j < r; ++j) loop.push_back(phi[g.index(cx + r, cy + j, cz)]);
    for (int i = r; i > -r; --i) loop.push_back(phi[g.index(cx + i, cy + r, cz)]);
    for (int j = r; j > -r; --j) loop.push_back(phi[g.index(cx - r, cy + j, cz)]);
    double total = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const Complex a = loop[i], b = loop[(i + 1) % loop.size()];
        total += std::arg(b / a);
    }
    return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

}  // namespace

TEST_CASE("every guess kind is unit-normalized") {
    GridPtr g = build_grid(16.0, {1, 1, 1}, {32, 32, 32});
    const ModelParams p = demo_params();
    for (GuessKind kind : all_guess_kinds()) {
        const ComplexField phi = make_initial(kind, g, p);
        CHECK(std::abs(norm(phi) - 1.0) < 1e-12);
    }
}

TEST_CASE("kind a is the isotropic Gaussian") {
    GridPtr g = build_grid(16.0, {1, 1, 1}, {64, 64, 64});
    const ComplexField phi = make_initial(GuessKind::a, g, demo_params());
    CHECK(std::abs(norm(phi) - 1.0) < 1e-12);
    // the analytic prefactor survives discrete renormalization at this resolution
    const Grid& grid = phi.grid();
    const std::size_t origin = grid.index(32, 32, 32);
    CHECK(phi[origin].real() == doctest::Approx(std::pow(M_PI, -0.75)).epsilon(1e-10));
    CHECK(phi[origin].imag() == 0.0);
}

TEST_CASE("kind b vanishes on the axis and winds once") {
    GridPtr g = build_grid(16.0, {1, 1, 1}, {32, 32, 32});
    const ComplexField phi = make_initial(GuessKind::b, g, demo_params());
    const Grid& grid = phi.grid();
    CHECK(std::abs(phi[grid.index(16, 16, 16)]) == 0.0);  // (x, y) = (0, 0)
    CHECK(winding_on_loop(phi) == 1);
}

TEST_CASE("conjugate kinds are pointwise conjugates") {
    GridPtr g = build_grid(12.0, {1, 1, 1}, {16, 16, 16});
    const ModelParams p = demo_params();
    const std::pair<GuessKind, GuessKind> pairs[] = {{GuessKind::b, GuessKind::b_bar},
                                                     {GuessKind::c, GuessKind::c_bar},
                                                     {GuessKind::d, GuessKind::d_bar},
                                                     {GuessKind::e, GuessKind::e_bar}};
    for (const auto& [base, bar] : pairs) {
        const ComplexField u = make_initial(base, g, p);
        const ComplexField v = make_initial(bar, g, p);
        for (std::size_t i = 0; i < u.size(); i += 13) REQUIRE(v[i] == std::conj(u[i]));
    }
    const ComplexField bbar = make_initial(GuessKind::b_bar, g, p);
    CHECK(winding_on_loop(bbar) == -1);
}

TEST_CASE("Thomas-Fermi chemical potential") {
    ModelParams p;
    p.beta = 4.0 * M_PI / 15.0;
    CHECK(thomas_fermi_mu(p) == doctest::Approx(0.5).epsilon(1e-14));

    p.beta = 600.0;
    // frozen from an independent evaluation of (1/2)(15 beta/(4 pi))^{2/5}
    CHECK(thomas_fermi_mu(p) == doctest::Approx(6.9339876291784694).epsilon(1e-14));

    // power-law scaling in beta
    ModelParams q = p;
    q.beta = 16.0 * p.beta;
    CHECK(thomas_fermi_mu(q) / thomas_fermi_mu(p) ==
          doctest::Approx(std::pow(16.0, 0.4)).epsilon(1e-14));

    p.beta = -1.0;
    CHECK_THROWS_AS(thomas_fermi_mu(p), std::invalid_argument);
}

TEST_CASE("Thomas-Fermi profile is nonnegative and clipped at the ellipsoid") {
    GridPtr g = build_grid(16.0, {1, 1, 1}, {32, 32, 32});
    ModelParams p;
    p.beta = 600.0;
    p.gamma = {1.0, 1.5, 2.0};
    const double mu = thomas_fermi_mu(p);
    const ComplexField phi = make_initial(GuessKind::f, g, p);
    const Grid& grid = phi.grid();
    std::size_t idx = 0;
    for (int i = 0; i < grid.counts()[0]; ++i)
        for (int j = 0; j < grid.counts()[1]; ++j)
            for (int k = 0; k < grid.counts()[2]; ++k, ++idx) {
                const double x = grid.coord(0, i), y = grid.coord(1, j), z = grid.coord(2, k);
                const double v = 0.5 * (p.gamma[0] * p.gamma[0] * x * x +
                                        p.gamma[1] * p.gamma[1] * y * y +
                                        p.gamma[2] * p.gamma[2] * z * z);
                REQUIRE(phi[idx].imag() == 0.0);
                REQUIRE(phi[idx].real() >= 0.0);
                if (v >= mu) REQUIRE(phi[idx].real() == 0.0);
            }

    ModelParams bad;
    bad.beta = 0.0;
    CHECK_THROWS_AS(make_initial(GuessKind::f, g, bad), std::invalid_argument);
}

TEST_CASE("omega-weighted mixtures reduce correctly at the endpoints") {
    GridPtr g = build_grid(12.0, {1, 1, 1}, {16, 16, 16});
    ModelParams p = demo_params();
    p.omega = 0.0;
    const ComplexField d0 = make_initial(GuessKind::d, g, p);
    const ComplexField a = make_initial(GuessKind::a, g, p);
    CHECK(max_abs_diff(d0, a) < 1e-13);

    const ComplexField e0 = make_initial(GuessKind::e, g, p);
    const ComplexField b = make_initial(GuessKind::b, g, p);
    CHECK(max_abs_diff(e0, b) < 1e-13);
}

TEST_CASE("guess kind names round trip") {
    for (GuessKind k : all_guess_kinds()) CHECK(guess_kind_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(guess_kind_from_string("q"), std::invalid_argument);
}
