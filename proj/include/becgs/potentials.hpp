#pragma once

#include "becgs/grid.hpp"
#include "becgs/kernel_table.hpp"

namespace becgs {

/// Unit vector giving the dipole axis.
class DipoleOrientation {
public:
    DipoleOrientation() : n_{0.0, 0.0, 1.0} {}
    DipoleOrientation(double x, double y, double z);
    explicit DipoleOrientation(const Vec3& n) : DipoleOrientation(n[0], n[1], n[2]) {}

    const Vec3& vector() const { return n_; }
    double operator[](int a) const { return n_[a]; }

private:
    Vec3 n_;
};

/// Free-space Coulomb potential U * rho of a density supported in the base
/// domain: zero-pad onto the twofold grid, transform, multiply by the kernel
/// coefficients, transform back, restrict. If imag_residue is non-null it
/// receives max |Im| of the result before the real part is taken, relative to
/// the max magnitude. warn_boundary enables the once-per-table decay check
/// (line-search increment fields are not densities and skip it).
RealField coulomb_potential(const RealField& density, const KernelTable& table,
                            double* imag_residue = nullptr, bool warn_boundary = true);

/// Dipolar potential of a density: -rho - 3 U * (d_nn rho), realized with the
/// spectral multiplier (-1 + 3 (n.nu)^2 Uhat_k) on the twofold grid.
RealField dipolar_potential(const RealField& density, const KernelTable& table,
                            const DipoleOrientation& n, double* imag_residue = nullptr,
                            bool warn_boundary = true);

}  // namespace becgs
