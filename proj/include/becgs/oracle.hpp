#pragma once

#include <functional>

#include "becgs/model.hpp"

namespace becgs {
namespace oracle {

/// Adaptive Gauss-Legendre quadrature of f on [a, b] (interval-halving with a
/// fixed 20-point rule per panel).
double adaptive_integrate(const std::function<double(double)>& f, double a, double b, double tol);

struct ErrorMetrics {
    double e2 = 0.0;
    Complex kappa{0.0, 0.0};
};

/// Phase-aligned relative l2 error: kappa = <u, ref>/<ref, ref> with the
/// complex sesquilinear sum, E2 = ||u - kappa ref|| / ||ref||.
ErrorMetrics relative_error_E2(const ComplexField& u, const ComplexField& ref);

using ScalarField3 = std::function<double(double, double, double)>;

struct ConvolutionOptions {
    double tol = 1e-8;
    double outer_radius = 0.0;          // radius beyond which the source is negligible
    std::size_t eval_budget = 10'000'000;  // kernel evaluations per target point
};

/// Slow reference for (U * f)(x) with U = 1/(4 pi |y|): spherical shells
/// around the kernel singularity, Gauss-Legendre radially, product rule
/// (Gauss-Legendre in cos(theta), trapezoid in phi) angularly with adaptive
/// order doubling. Throws when the evaluation budget is exhausted before the
/// shells converge.
double coulomb_convolution_at(const ScalarField3& f, const Vec3& point,
                              const ConvolutionOptions& opt);

/// Dipolar potential by quadrature: -rho(x) - 3 (U * dnn_rho)(x); the Dirac
/// part of the kernel enters exactly through -rho.
double dipolar_convolution_at(const ScalarField3& rho, const ScalarField3& dnn_rho,
                              const Vec3& point, const ConvolutionOptions& opt);

enum class ConvolutionKernel { coulomb, dipolar };

/// Grid-field variant: the density (and for the dipolar kernel its second
/// directional derivative, formed spectrally) is evaluated off-grid through
/// its trigonometric interpolant.
double direct_convolution_at(const RealField& density, const Vec3& point,
                             ConvolutionKernel kernel, const DipoleOrientation& n,
                             const ConvolutionOptions& opt);

/// Trigonometric interpolant evaluator of a grid field (O(N) per call).
ScalarField3 trig_interpolant(const RealField& field);

/// Direct quadrature of the twofold-domain Fourier integral of the Coulomb
/// kernel for the signed mode k: smooth part by tensor Gauss-Legendre with
/// panels graded toward the singularity, the mollifier remainder by radial
/// quadrature over a small ball.
double kernel_coefficient_oracle(const Grid& base, const Vec3i& k, double tol = 1e-10);

/// |(E(phi + eps p) - E(phi - eps p))/(2 eps) - 2 <H_phi phi, p>| /
/// max(1, |2 <H_phi phi, p>|), with the nonlinear terms re-evaluated at the
/// perturbed states.
double fd_gradient_check(const ComplexField& phi, const ComplexField& p,
                         const ModelParams& params, const KernelTable* table, double eps_fd);

}  // namespace oracle
}  // namespace becgs
