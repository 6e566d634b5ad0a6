#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "becgs/initial.hpp"
#include "becgs/pcg.hpp"
#include "test_util.hpp"

using namespace becgs;
using becgs::testing::basis_mode;
using becgs::testing::random_smooth_field;
using becgs::testing::unit_gaussian;

namespace {

ComplexField tangent_direction(GridPtr g, const ComplexField& phi, unsigned seed) {
    ComplexField p = random_smooth_field(std::move(g), seed);
    p = project_tangent(p, phi);
    return p;
}

}  // namespace

TEST_CASE("tangent projection") {
    GridPtr g = build_grid(8.0, {1, 1, 1}, {16, 16, 16});
    ComplexField phi = unit_gaussian(g);
    normalize(phi);

    SUBCASE("projecting the base point gives zero") {
        ComplexField out = project_tangent(phi, phi);
        CHECK(becgs::testing::max_abs(out) < 1e-14);
    }
    SUBCASE("tangent vectors pass through unchanged") {
        ComplexField p = tangent_direction(g, phi, 3);
        ComplexField out = project_tangent(p, phi);
        CHECK(max_abs_diff(out, p) < 1e-13 * std::max(1.0, becgs::testing::max_abs(p)));
    }
    SUBCASE("idempotence and tangency") {
        ComplexField f = random_smooth_field(g, 4);
        ComplexField once = project_tangent(f, phi);
        ComplexField twice = project_tangent(once, phi);
        CHECK(std::abs(inner_product(once, phi)) < 1e-12);
        CHECK(max_abs_diff(once, twice) < 1e-13);
    }
}

TEST_CASE("retraction") {
    GridPtr g = build_grid(8.0, {1, 1, 1}, {16, 16, 16});
    ComplexField phi = unit_gaussian(g);
    normalize(phi);
    ComplexField p = tangent_direction(g, phi, 9);

    SUBCASE("t = 0 returns the base point") {
        CHECK(max_abs_diff(retract(phi, p, 0.0), phi) < 1e-15);
    }
    SUBCASE("results stay on the sphere") {
        for (double t : {0.01, 0.3, 1.7, 12.0})
            CHECK(std::abs(norm(retract(phi, p, t)) - 1.0) < 1e-13);
    }
    SUBCASE("zero direction returns the base point") {
        ComplexField zero(g);
        CHECK(max_abs_diff(retract(phi, zero, 0.5), phi) == 0.0);
    }
    SUBCASE("first-order agreement with phi + t p") {
        // ||R(t) - (phi + t p)|| = O(t^2): the ratio under t -> t/2 approaches 4;
        // normalize p so t ||p|| is already in the asymptotic regime
        normalize(p);
        auto defect = [&](double t) {
            ComplexField r = retract(phi, p, t);
            ComplexField lin = phi;
            for (std::size_t i = 0; i < lin.size(); ++i) lin[i] += t * p[i];
            ComplexField diff = r;
            for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= lin[i];
            return norm(diff);
        };
        const double d1 = defect(0.02), d2 = defect(0.01), d3 = defect(0.005);
        CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.05));
        CHECK(d2 / d3 == doctest::Approx(4.0).epsilon(0.05));
    }
}

TEST_CASE("residual at the oscillator eigenstate") {
    ModelParams params;  // beta = lambda = omega = 0
    GridPtr g = build_grid(10.0, {1, 1, 1}, {64, 64, 64});
    ComplexField phi = unit_gaussian(g);
    normalize(phi);
    RealField zero_phi(g);
    const ResidualInfo info = residual(phi, zero_phi, params);
    CHECK(info.mu == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(norm(info.r) < 1e-10);
    CHECK(std::abs(inner_product(info.r, phi)) < 1e-11);
}

TEST_CASE("residual tangency for arbitrary states") {
    ModelParams params;
    params.beta = 20.0;
    params.omega = 0.4;
    GridPtr g = build_grid(8.0, {1, 1, 1}, {16, 16, 16});
    ComplexField phi = random_smooth_field(g, 17);
    normalize(phi);
    RealField zero_phi(g);
    const ResidualInfo info = residual(phi, zero_phi, params);
    CHECK(std::abs(inner_product(info.r, phi)) < 1e-11);
}

TEST_CASE("preconditioner") {
    GridPtr g = build_grid(8.0, {1, 1, 1}, {16, 16, 16});
    ModelParams params;
    params.beta = 15.0;
    ComplexField phi = unit_gaussian(g);
    normalize(phi);
    RealField zero_phi(g);
    const RealField trap = trap_field(g, params);

    SUBCASE("positive definiteness on random probes") {
        for (unsigned seed : {1u, 2u, 3u, 4u}) {
            ComplexField r = random_smooth_field(g, seed);
            ComplexField pr = apply_preconditioner(r, phi, zero_phi, trap, params);
            CHECK(inner_product(pr, r) > 0.0);
        }
    }

    SUBCASE("V = 0, beta = 0 limit damps high frequencies") {
        ModelParams free;
        RealField zero_trap(g);
        double prev = std::numeric_limits<double>::infinity();
        for (int k : {0, 1, 2, 4, 7}) {
            ComplexField w = basis_mode(g, {k, 0, 0});
            ComplexField pw = apply_preconditioner(w, phi, zero_phi, zero_trap, free);
            const double n = norm(pw);
            CHECK(n < prev);
            prev = n;
        }
    }

    SUBCASE("non-positive pointwise denominator throws") {
        ModelParams attractive;
        attractive.beta = -100.0;
        ComplexField r = random_smooth_field(g, 5);
        CHECK_THROWS_AS(apply_preconditioner(r, phi, zero_phi, trap, attractive),
                        std::runtime_error);
    }
}

TEST_CASE("Polak-Ribiere coefficient") {
    GridPtr g = build_grid(8.0, {1, 1, 1}, {16, 16, 16});
    ComplexField phi = unit_gaussian(g);
    normalize(phi);
    ComplexField r = tangent_direction(g, phi, 21);

    SUBCASE("r_n equal to the transported previous residual gives zero") {
        CHECK(cg_beta(r, r, r, 1.0, phi) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("negative numerator clamps to zero") {
        ComplexField r_prev = r;
        for (std::size_t i = 0; i < r_prev.size(); ++i) r_prev[i] *= 2.0;
        CHECK(cg_beta(r, r, r_prev, 1.0, phi) == 0.0);
    }
    SUBCASE("zero denominator restarts as steepest descent") {
        CHECK(cg_beta(r, r, r, 0.0, phi) == 0.0);
    }
}

TEST_CASE("quadratic-model step") {
    CHECK(detail::optimal_step(-1.0, 2.0) == doctest::Approx(0.5));
    CHECK(detail::optimal_step(-0.3, 0.6) == doctest::Approx(0.5));

    // non-positive curvature falls back to 0.3 through step_size
    GridPtr g = build_grid(8.0, {1, 1, 1}, {16, 16, 16});
    ModelParams params;  // pure oscillator
    ComplexField phi = unit_gaussian(g);
    normalize(phi);
    RealField zero_phi(g);
    const RealField trap = trap_field(g, params);
    const RealField rho = density_of(phi);
    const ResidualInfo info = residual(phi, zero_phi, params);

    // a tangent direction pointing along -grad has negative first-order term;
    // at the near-minimum state the curvature is positive, so t is the model optimum
    ComplexField pr = apply_preconditioner(info.r, phi, zero_phi, trap, params);
    ComplexField descent = project_tangent(pr, phi);
    for (std::size_t i = 0; i < descent.size(); ++i) descent[i] = -descent[i];
    ComplexField p = descent;
    const StepChoice choice =
        step_size(phi, p, info.h_phi, descent, info.mu, rho, zero_phi, trap, params, nullptr);
    CHECK(choice.t > 0.0);
}

TEST_CASE("direction reset when the first-order term is non-negative") {
    GridPtr g = build_grid(8.0, {1, 1, 1}, {16, 16, 16});
    ModelParams params;
    params.beta = 10.0;
    ComplexField phi = random_smooth_field(g, 31);
    normalize(phi);
    RealField zero_phi(g);
    const RealField trap = trap_field(g, params);
    const RealField rho = density_of(phi);
    const ResidualInfo info = residual(phi, zero_phi, params);
    ComplexField pr = apply_preconditioner(info.r, phi, zero_phi, trap, params);
    ComplexField descent = project_tangent(pr, phi);
    for (std::size_t i = 0; i < descent.size(); ++i) descent[i] = -descent[i];

    // feed an ascent direction: +J(Pr)
    ComplexField p = descent;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = -p[i];
    const StepChoice choice =
        step_size(phi, p, info.h_phi, descent, info.mu, rho, zero_phi, trap, params, nullptr);
    CHECK(choice.direction_reset);
    CHECK(inner_product(info.h_phi, p) < 0.0);  // p was replaced by the descent direction
}

TEST_CASE("minimize finds the oscillator ground state") {
    ModelParams params;  // beta = lambda = omega = 0
    GridPtr g = build_grid(10.0, {1, 1, 1}, {32, 32, 32});
    const ComplexField phi0 = make_initial(GuessKind::c, g, params);
    StoppingCriterion stop;
    stop.tolerance = 1e-12;
    stop.max_iterations = 800;
    const SolveResult res = minimize(phi0, params, nullptr, stop);

    CHECK(res.converged);
    CHECK(res.report.total == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(res.report.chemical_potential == doctest::Approx(1.5).epsilon(1e-9));
    // virial and residual floors at this mesh come from the 32^3 truncation
    CHECK(virial_residual(res.report) < 1e-8);
    CHECK(res.final_residual_norm < 1e-8);

    // invariants tracked along the run
    CHECK(res.stats.max_norm_deviation < 1e-12);
    CHECK(res.stats.max_direction_tangency < 1e-10);
    CHECK(res.stats.max_residual_tangency < 1e-10);
    CHECK(res.stats.energy_monotone);
    CHECK(res.stats.min_preconditioner_denominator > 0.0);

    // trace energies strictly decrease
    for (std::size_t i = 1; i < res.trace.size(); ++i)
        CHECK(res.trace[i].energy <= res.trace[i - 1].energy);
}

TEST_CASE("gauge robustness of the minimizer") {
    ModelParams params;
    params.beta = 30.0;
    GridPtr g = build_grid(10.0, {1, 1, 1}, {16, 16, 16});
    StoppingCriterion stop;
    stop.tolerance = 1e-9;
    stop.max_iterations = 400;

    const ComplexField phi0 = make_initial(GuessKind::c, g, params);
    const SolveResult base = minimize(phi0, params, nullptr, stop);

    ComplexField rotated = phi0;
    const Complex z = std::polar(1.0, 1.234);
    for (std::size_t i = 0; i < rotated.size(); ++i) rotated[i] *= z;
    const SolveResult other = minimize(rotated, params, nullptr, stop);

    CHECK(base.converged);
    CHECK(other.converged);
    CHECK(base.report.total == doctest::Approx(other.report.total).epsilon(1e-9));
}

TEST_CASE("interacting run keeps the invariants") {
    ModelParams params;
    params.beta = 50.0;
    params.omega = 0.4;
    GridPtr g = build_grid(10.0, {1, 1, 1}, {16, 16, 16});
    const ComplexField phi0 = make_initial(GuessKind::c, g, params);
    StoppingCriterion stop;
    stop.tolerance = 1e-8;
    stop.max_iterations = 500;
    const SolveResult res = minimize(phi0, params, nullptr, stop);
    CHECK(res.converged);
    CHECK(res.stats.max_norm_deviation < 1e-12);
    CHECK(res.stats.max_direction_tangency < 1e-9);
    CHECK(res.stats.energy_monotone);
    for (std::size_t i = 1; i < res.trace.size(); ++i)
        CHECK(res.trace[i].energy <= res.trace[i - 1].energy);
}

TEST_CASE("unnormalized seed is rejected") {
    ModelParams params;
    GridPtr g = build_grid(8.0, {1, 1, 1}, {8, 8, 8});
    ComplexField bad(g);
    for (std::size_t i = 0; i < bad.size(); ++i) bad[i] = 0.1;
    StoppingCriterion stop;
    CHECK_THROWS_AS(minimize(bad, params, nullptr, stop), std::invalid_argument);
}
