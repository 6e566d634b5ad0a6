#pragma once

#include "becgs/grid.hpp"
#include "becgs/kernel_table.hpp"
#include "becgs/potentials.hpp"

namespace becgs {

struct ModelParams {
    double beta = 0.0;    // contact interaction strength
    double lambda = 0.0;  // dipolar interaction strength
    double omega = 0.0;   // rotational frequency
    Vec3 gamma = {1.0, 1.0, 1.0};
    DipoleOrientation dipole;

    void validate() const;
};

struct EnergyReport {
    double total = 0.0;
    double kinetic = 0.0;
    double potential = 0.0;
    double interaction = 0.0;
    double dipolar = 0.0;
    double rotational = 0.0;
    double chemical_potential = 0.0;
    double virial = 0.0;  // signed 2Ekin - 2Epot + 3Eint + 3Edip
};

/// |I^h|, the virial-identity residual
double virial_residual(const EnergyReport& report);

/// V(x) = (gx^2 x^2 + gy^2 y^2 + gz^2 z^2) / 2 sampled on the grid
RealField trap_field(GridPtr grid, const ModelParams& params);

/// H_phi f = -1/2 lap f + V f + beta rho f + lambda Phi f - Omega Lz f with the
/// nonlinear coefficients rho, Phi frozen. Phi may be null when lambda == 0.
/// kinetic_form, when non-null, receives <-1/2 lap f, f>.
ComplexField apply_hamiltonian_linearized(const ComplexField& f, const RealField& trap,
                                          const RealField& rho, const RealField* Phi,
                                          const ModelParams& params,
                                          double* kinetic_form = nullptr);

/// H_phi phi where rho = |phi|^2; Phi must be the dipolar potential of |phi|^2.
ComplexField apply_hamiltonian(const ComplexField& phi, const RealField& Phi,
                               const ModelParams& params);

struct EnergyTerms {
    double kinetic = 0.0;
    double potential = 0.0;
    double interaction = 0.0;
    double dipolar = 0.0;
    double rotational = 0.0;
    double total() const { return kinetic + potential + interaction + dipolar + rotational; }
};

/// All energy contributions of a (not necessarily normalized) state. The
/// dipolar potential of |phi|^2 is written to *Phi_out when requested; it is
/// the zero field when lambda == 0.
EnergyTerms energy_terms(const ComplexField& phi, const ModelParams& params,
                         const KernelTable* table, const RealField& trap,
                         RealField* Phi_out = nullptr);

/// Same contributions with the dipolar potential of |phi|^2 already in hand
/// (no convolution performed).
EnergyTerms energy_terms_with_potential(const ComplexField& phi, const ModelParams& params,
                                        const RealField& Phi, const RealField& trap);

/// Energy value of an arbitrary state (used by line search and oracles).
double energy_value(const ComplexField& phi, const ModelParams& params, const KernelTable* table);

/// Full report for a unit-norm state; throws if | ||phi|| - 1 | > 1e-8.
EnergyReport energy_breakdown(const ComplexField& phi, const ModelParams& params,
                              const KernelTable* table);

}  // namespace becgs
