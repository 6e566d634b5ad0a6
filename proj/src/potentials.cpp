#include "becgs/potentials.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace becgs {

DipoleOrientation::DipoleOrientation(double x, double y, double z) {
    const double len = std::sqrt(x * x + y * y + z * z);
    if (std::abs(len - 1.0) > 1e-12)
        throw std::invalid_argument("DipoleOrientation: vector must be unit length");
    n_ = {x, y, z};
}

namespace {

void check_boundary_decay(const RealField& density, const KernelTable& table) {
    if (table.boundary_warned.load(std::memory_order_relaxed)) return;
    const Grid& g = density.grid();
    const Vec3i n = g.counts();
    double peak = 0.0;
    for (std::size_t i = 0; i < density.size(); ++i) peak = std::max(peak, std::abs(density[i]));
    if (peak == 0.0) return;
    double face = 0.0;
    for (int i = 0; i < n[0]; ++i)
        for (int j = 0; j < n[1]; ++j) {
            face = std::max(face, std::abs(density[g.index(i, j, 0)]));
            face = std::max(face, std::abs(density[g.index(i, j, n[2] - 1)]));
        }
    for (int i = 0; i < n[0]; ++i)
        for (int k = 0; k < n[2]; ++k) {
            face = std::max(face, std::abs(density[g.index(i, 0, k)]));
            face = std::max(face, std::abs(density[g.index(i, n[1] - 1, k)]));
        }
    for (int j = 0; j < n[1]; ++j)
        for (int k = 0; k < n[2]; ++k) {
            face = std::max(face, std::abs(density[g.index(0, j, k)]));
            face = std::max(face, std::abs(density[g.index(n[0] - 1, j, k)]));
        }
    if (face > 1e-10 * peak) {
        table.boundary_warned.store(true, std::memory_order_relaxed);
        std::cerr << "[becgs] warning: density at the domain boundary is " << face / peak
                  << " of its peak; the free-space convolution assumes compact support\n";
    }
}

// Shared twofold-grid convolution: multiplier(bin frequencies, Uhat) -> factor.
template <typename Mult>
RealField convolve(const RealField& density, const KernelTable& table, Mult&& mult,
                   double* imag_residue, bool warn_boundary) {
    if (!density.grid().same_layout(table.base_grid()))
        throw std::invalid_argument("potential: density grid does not match kernel table");
    if (warn_boundary) check_boundary_decay(density, table);

    const Grid& g = density.grid();
    const Grid& pg = table.padded_grid();
    const Vec3i n = g.counts();
    const Vec3i pn = pg.counts();

    aligned_vector<Complex> buf(pg.total(), Complex(0.0, 0.0));
    const int ox = n[0] / 2, oy = n[1] / 2, oz = n[2] / 2;
    for (int i = 0; i < n[0]; ++i)
        for (int j = 0; j < n[1]; ++j) {
            const double* src = density.data() + g.index(i, j, 0);
            Complex* dst = buf.data() + pg.index(i + ox, j + oy, oz);
            for (int k = 0; k < n[2]; ++k) dst[k] = src[k];
        }

    pg.fft_forward(buf.data());

    const std::vector<double>& uhat = table.coefficients();
    std::size_t idx = 0;
    for (int bx = 0; bx < pn[0]; ++bx) {
        const double nux = pg.freq(0, bx);
        for (int by = 0; by < pn[1]; ++by) {
            const double nuy = pg.freq(1, by);
            for (int bz = 0; bz < pn[2]; ++bz, ++idx)
                buf[idx] *= mult(nux, nuy, pg.freq(2, bz), uhat[idx]);
        }
    }

    pg.fft_backward(buf.data());

    RealField out(density.grid_ptr());
    double max_im = 0.0, max_mag = 0.0;
    for (int i = 0; i < n[0]; ++i)
        for (int j = 0; j < n[1]; ++j) {
            const Complex* src = buf.data() + pg.index(i + ox, j + oy, oz);
            double* dst = out.data() + g.index(i, j, 0);
            for (int k = 0; k < n[2]; ++k) {
                dst[k] = src[k].real();
                if (imag_residue) {
                    max_im = std::max(max_im, std::abs(src[k].imag()));
                    max_mag = std::max(max_mag, std::abs(src[k]));
                }
            }
        }
    if (imag_residue) *imag_residue = max_mag > 0.0 ? max_im / max_mag : 0.0;
    return out;
}

}  // namespace

RealField coulomb_potential(const RealField& density, const KernelTable& table,
                            double* imag_residue, bool warn_boundary) {
    return convolve(
        density, table, [](double, double, double, double u) { return u; }, imag_residue,
        warn_boundary);
}

RealField dipolar_potential(const RealField& density, const KernelTable& table,
                            const DipoleOrientation& n, double* imag_residue,
                            bool warn_boundary) {
    const Vec3 d = n.vector();
    return convolve(
        density, table,
        [d](double nux, double nuy, double nuz, double u) {
            const double proj = d[0] * nux + d[1] * nuy + d[2] * nuz;
            return -1.0 + 3.0 * proj * proj * u;
        },
        imag_residue, warn_boundary);
}

}  // namespace becgs
