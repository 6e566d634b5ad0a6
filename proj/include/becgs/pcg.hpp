#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "becgs/model.hpp"

namespace becgs {

struct StoppingCriterion {
    double tolerance = 1e-10;  // on ||phi_{n+1} - phi_n||_inf
    int max_iterations = 10000;
};

struct IterationRecord {
    int n = 0;
    double energy = 0.0;  // E(phi_n) entering the iteration
    double mu = 0.0;
    double residual_norm = 0.0;
    double step = 0.0;
    double wall_seconds = 0.0;  // cumulative since solve start
};

struct InvariantStats {
    double max_norm_deviation = 0.0;       // max_n | ||phi_n|| - 1 |
    double max_direction_tangency = 0.0;   // max_n |<p_n, phi_n>|
    double max_residual_tangency = 0.0;    // max_n |<r_n, phi_n>|
    double min_preconditioner_denominator = std::numeric_limits<double>::infinity();
    bool energy_monotone = true;
    int direction_resets = 0;
};

struct SolveResult {
    ComplexField state;
    EnergyReport report;
    std::vector<IterationRecord> trace;
    bool converged = false;
    int iterations = 0;
    double final_residual_norm = 0.0;
    InvariantStats stats;
};

/// J_phi(f) = f - <f, phi> phi
ComplexField project_tangent(const ComplexField& f, const ComplexField& phi);

/// cos(t ||p||) phi + sin(t ||p||) p / ||p||; returns phi when ||p|| = 0.
ComplexField retract(const ComplexField& phi, const ComplexField& p, double t);

struct ResidualInfo {
    ComplexField r;
    double mu = 0.0;
    ComplexField h_phi;
};

/// r = H_phi phi - mu phi with mu = <H_phi phi, phi>. Phi must be consistent
/// with |phi|^2.
ResidualInfo residual(const ComplexField& phi, const RealField& Phi, const ModelParams& params);

/// P = P_V^{1/2} P_Delta P_V^{1/2} with the shift alpha taken from phi's
/// energy integrals. Throws if a pointwise denominator is non-positive.
ComplexField apply_preconditioner(const ComplexField& r, const ComplexField& phi,
                                  const RealField& Phi, const RealField& trap,
                                  const ModelParams& params);

/// Polak-Ribiere coefficient clamped at zero; pairing_prev is
/// <r_{n-1}, J_{phi_{n-1}}(P r_{n-1})> from the previous iteration.
double cg_beta(const ComplexField& r, const ComplexField& Pr, const ComplexField& r_prev,
               double pairing_prev, const ComplexField& phi);

struct StepChoice {
    double t = 0.0;
    bool direction_reset = false;  // guard (i) replaced p by the descent direction
};

/// Guards (i) and (ii) of the step-size procedure. May replace p by the pure
/// preconditioned-descent direction `descent`. The returned t is the quadratic
/// model minimizer when the curvature is positive, 0.3 otherwise; the caller
/// halves it until the energy decreases (guard (iii)).
StepChoice step_size(const ComplexField& phi, ComplexField& p, const ComplexField& h_phi,
                     const ComplexField& descent, double mu, const RealField& rho,
                     const RealField& Phi, const RealField& trap, const ModelParams& params,
                     const KernelTable* table);

namespace detail {
double optimal_step(double first_order, double curvature);
double preconditioner_shift(const EnergyTerms& terms);
ComplexField apply_preconditioner_with_shift(const ComplexField& r, const RealField& rho,
                                             const RealField& Phi, const RealField& trap,
                                             const ModelParams& params, double alpha,
                                             double* min_denominator);
}  // namespace detail

/// PCG minimization of the discrete energy over the unit sphere.
/// table may be null when params.lambda == 0.
SolveResult minimize(const ComplexField& phi0, const ModelParams& params,
                     const KernelTable* table, const StoppingCriterion& stop);

}  // namespace becgs
