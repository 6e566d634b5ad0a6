#pragma once

#include <atomic>
#include <string>

#include "becgs/grid.hpp"
#include "becgs/sog.hpp"

namespace becgs {

/// Fourier coefficients of the Coulomb kernel over the twofold extension of
/// the base domain, stored per FFT bin of the padded grid. The coefficient
/// count is 8 Nx Ny Nz for every anisotropy vector. Immutable once built;
/// shareable read-only.
class KernelTable {
public:
    const Grid& base_grid() const { return *base_; }
    GridPtr base_grid_ptr() const { return base_; }
    const Grid& padded_grid() const { return *padded_; }
    GridPtr padded_grid_ptr() const { return padded_; }

    double delta() const { return delta_; }
    double epsilon_sog() const { return epsilon_; }

    std::size_t size() const { return coeff_.size(); }
    const std::vector<double>& coefficients() const { return coeff_; }

    /// coefficient for signed mode k_alpha in [-N_alpha, N_alpha-1] on the
    /// twofold index set
    double coefficient(int kx, int ky, int kz) const;

    void save(const std::string& path) const;
    static KernelTable load(const std::string& path);

    /// true when the cached file at `path` matches (L, xi, N, delta, eps_sog)
    bool matches(const Grid& base, double delta, double epsilon) const;

    friend KernelTable precompute_kernel_coefficients(GridPtr grid, const SumOfGaussians& sog,
                                                      double delta_used);

    mutable std::atomic<bool> boundary_warned{false};

    KernelTable(const KernelTable& other);
    KernelTable& operator=(const KernelTable&) = delete;
    KernelTable(KernelTable&&) = default;

private:
    KernelTable() = default;

    GridPtr base_;
    GridPtr padded_;
    double delta_ = 0.0;
    double epsilon_ = 0.0;
    std::vector<double> coeff_;  // per padded-grid FFT bin, real by symmetry
};

/// Default near-origin cutoff for the kernel expansion: min_a(h_a) * sqrt(eps).
double default_sog_delta(const Grid& grid, double epsilon_sog);

/// Required kernel validity radius: half-diagonal of the twofold domain.
double required_kernel_radius(const Grid& grid);

/// Tabulates U_hat over the twofold index set from the Gaussian expansion.
/// Each Gaussian term factorizes into three 1D integrals
/// int_{-A}^{A} e^{-y^2/s^2} e^{-i nu y} dy evaluated either in closed form
/// (when the truncation error is negligible) or by paneled Gauss-Legendre.
KernelTable precompute_kernel_coefficients(GridPtr grid, const SumOfGaussians& sog,
                                           double delta_used);

/// Convenience: builds the expansion with default delta and tabulates.
KernelTable build_kernel_table(GridPtr grid, double epsilon_sog = 1e-12, double delta = 0.0);

}  // namespace becgs
