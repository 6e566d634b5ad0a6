#include "becgs/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace becgs {
namespace oracle {

namespace {

// 20-point Gauss-Legendre rule on [-1, 1]
constexpr int kGL = 20;
constexpr double kNode[kGL] = {
    -0.9931285991850949, -0.9639719272779138, -0.9122344282513259, -0.8391169718222188,
    -0.7463319064601508, -0.6360536807265150, -0.5108670019508271, -0.3737060887154195,
    -0.2277858511416451, -0.0765265211334973, 0.0765265211334973,  0.2277858511416451,
    0.3737060887154195,  0.5108670019508271,  0.6360536807265150,  0.7463319064601508,
    0.8391169718222188,  0.9122344282513259,  0.9639719272779138,  0.9931285991850949};
constexpr double kWeight[kGL] = {
    0.0176140071391521, 0.0406014298003869, 0.0626720483341091, 0.0832767415767048,
    0.1019301198172404, 0.1181945319615184, 0.1316886384491766, 0.1420961093183820,
    0.1491729864726037, 0.1527533871307258, 0.1527533871307258, 0.1491729864726037,
    0.1420961093183820, 0.1316886384491766, 0.1181945319615184, 0.1019301198172404,
    0.0832767415767048, 0.0626720483341091, 0.0406014298003869, 0.0176140071391521};

double panel(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < kGL; ++i) acc += kWeight[i] * f(mid + half * kNode[i]);
    return acc * half;
}

double adq(const std::function<double(double)>& f, double a, double b, double tol, double whole,
           int depth) {
    if (depth > 24) throw std::runtime_error("adaptive_integrate: runaway refinement");
    const double m = 0.5 * (a + b);
    const double left = panel(f, a, m), right = panel(f, m, b);
    if (std::abs(left + right - whole) <= tol) return left + right;
    return adq(f, a, m, 0.5 * tol, left, depth + 1) + adq(f, m, b, 0.5 * tol, right, depth + 1);
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    return adq(f, a, b, tol, panel(f, a, b), 0);
}

ErrorMetrics relative_error_E2(const ComplexField& u, const ComplexField& ref) {
    require_same_grid(u, ref);
    const Complex denom = complex_inner_product(ref, ref);
    if (denom.real() == 0.0) throw std::invalid_argument("relative_error_E2: zero reference");
    ErrorMetrics m;
    m.kappa = complex_inner_product(u, ref) / denom;
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += std::norm(u[i] - m.kappa * ref[i]);
    m.e2 = std::sqrt(acc * u.grid().cell_volume()) / std::sqrt(denom.real());
    return m;
}

namespace {

// integral of f over the sphere of radius r about `center` with an
// (n_mu x n_phi) product rule; Gauss-Legendre in cos(theta), trapezoid in phi
double sphere_average(const ScalarField3& f, const Vec3& center, double r, int n_mu, int n_phi,
                      std::size_t& evals) {
    std::vector<double> mu(n_mu), wmu(n_mu);
    // map the 20-point base rule onto n_mu nodes by compounding panels
    const int panels = (n_mu + kGL - 1) / kGL;
    int at = 0;
    for (int p = 0; p < panels && at < n_mu; ++p) {
        const double a = -1.0 + 2.0 * p / panels, b = -1.0 + 2.0 * (p + 1) / panels;
        for (int i = 0; i < kGL && at < n_mu; ++i, ++at) {
            mu[at] = 0.5 * (a + b) + 0.5 * (b - a) * kNode[i];
            wmu[at] = 0.5 * (b - a) * kWeight[i];
        }
    }
    const double dphi = 2.0 * M_PI / n_phi;
    double acc = 0.0;
    for (int i = 0; i < at; ++i) {
        const double z = mu[i];
        const double s = std::sqrt(std::max(1.0 - z * z, 0.0));
        double ring = 0.0;
        for (int j = 0; j < n_phi; ++j) {
            const double phi = j * dphi;
            ring += f(center[0] - r * s * std::cos(phi), center[1] - r * s * std::sin(phi),
                      center[2] - r * z);
        }
        evals += n_phi;
        acc += wmu[i] * ring * dphi;
    }
    return acc;  // integral over the unit sphere measure (area 4 pi)
}

}  // namespace

double coulomb_convolution_at(const ScalarField3& f, const Vec3& point,
                              const ConvolutionOptions& opt) {
    if (!(opt.outer_radius > 0.0))
        throw std::invalid_argument("coulomb_convolution_at: outer_radius must be set");
    std::size_t evals = 0;
    const double r_min = opt.outer_radius * 1e-8;

    // shells halving toward the singularity: integrand r S(r) / (4 pi) is
    // smooth on each shell once the 1/r kernel is absorbed
    std::vector<double> edges;
    for (double r = opt.outer_radius; r > r_min; r *= 0.5) edges.push_back(r);
    edges.push_back(r_min);

    double total = 0.0;
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
        const double rb = edges[s], ra = edges[s + 1];
        int n_mu = 20, n_phi = 40;
        double prev = 0.0;
        bool have_prev = false;
        for (;;) {
            double val = 0.0;
            for (int q = 0; q < kGL; ++q) {
                const double r = 0.5 * (ra + rb) + 0.5 * (rb - ra) * kNode[q];
                const double sph = sphere_average(f, point, r, n_mu, n_phi, evals);
                val += 0.5 * (rb - ra) * kWeight[q] * r * sph / (4.0 * M_PI);
            }
            if (evals > opt.eval_budget)
                throw std::runtime_error(
                    "coulomb_convolution_at: evaluation budget exhausted before convergence");
            if (have_prev && std::abs(val - prev) <= opt.tol * 0.1) {
                total += val;
                break;
            }
            prev = val;
            have_prev = true;
            n_mu *= 2;
            n_phi *= 2;
            if (n_mu > 320)
                throw std::runtime_error(
                    "coulomb_convolution_at: angular rule did not converge");
        }
    }
    // innermost ball: int_{|y|<r_min} U(y) f(x-y) dy ~ f(x) r_min^2 / 2
    total += f(point[0], point[1], point[2]) * r_min * r_min * 0.5;
    return total;
}

double dipolar_convolution_at(const ScalarField3& rho, const ScalarField3& dnn_rho,
                              const Vec3& point, const ConvolutionOptions& opt) {
    return -rho(point[0], point[1], point[2]) - 3.0 * coulomb_convolution_at(dnn_rho, point, opt);
}

ScalarField3 trig_interpolant(const RealField& field) {
    const Grid& g = field.grid();
    auto grid = field.grid_ptr();
    ComplexField spec(grid);
    for (std::size_t i = 0; i < field.size(); ++i) spec[i] = field[i];
    spec.to_spectral();

    const Vec3i n = g.counts();
    return [grid, spec = std::move(spec), n](double x, double y, double z) {
        const Grid& gg = *grid;
        const Vec3 pos = {x, y, z};
        std::array<std::vector<Complex>, 3> ph;
        for (int a = 0; a < 3; ++a) {
            ph[a].resize(n[a]);
            const double shifted = pos[a] + gg.extent(a);
            for (int b = 0; b < n[a]; ++b) {
                const double arg = gg.freq(a, b) * shifted;
                ph[a][b] = Complex(std::cos(arg), std::sin(arg));
            }
        }
        Complex acc(0.0, 0.0);
        std::size_t idx = 0;
        for (int bx = 0; bx < n[0]; ++bx)
            for (int by = 0; by < n[1]; ++by) {
                const Complex pxy = ph[0][bx] * ph[1][by];
                for (int bz = 0; bz < n[2]; ++bz, ++idx) acc += spec[idx] * pxy * ph[2][bz];
            }
        return acc.real();
    };
}

double direct_convolution_at(const RealField& density, const Vec3& point,
                             ConvolutionKernel kernel, const DipoleOrientation& n,
                             const ConvolutionOptions& opt) {
    const Grid& g = density.grid();
    for (int a = 0; a < 3; ++a)
        if (std::abs(point[a]) > g.extent(a))
            throw std::invalid_argument("direct_convolution_at: point outside the domain");
    ConvolutionOptions o = opt;
    if (o.outer_radius <= 0.0) {
        double acc = 0.0;
        for (int a = 0; a < 3; ++a) {
            const double e = std::abs(point[a]) + g.extent(a);
            acc += e * e;
        }
        o.outer_radius = std::sqrt(acc);
    }
    // the interpolant is periodic; the compactly supported density it
    // represents is zero outside the box
    const Vec3 ext = {g.extent(0), g.extent(1), g.extent(2)};
    auto supported = [ext](ScalarField3 f) {
        return [ext, f = std::move(f)](double x, double y, double z) {
            if (std::abs(x) > ext[0] || std::abs(y) > ext[1] || std::abs(z) > ext[2]) return 0.0;
            return f(x, y, z);
        };
    };
    if (kernel == ConvolutionKernel::coulomb)
        return coulomb_convolution_at(supported(trig_interpolant(density)), point, o);

    // dipolar: second directional derivative of the density, formed spectrally
    ComplexField spec(density.grid_ptr());
    for (std::size_t i = 0; i < density.size(); ++i) spec[i] = density[i];
    spec.to_spectral();
    const Vec3i counts = g.counts();
    const Vec3 d = n.vector();
    std::size_t idx = 0;
    for (int bx = 0; bx < counts[0]; ++bx) {
        const double nux = g.freq(0, bx);
        for (int by = 0; by < counts[1]; ++by) {
            const double nuy = g.freq(1, by);
            for (int bz = 0; bz < counts[2]; ++bz, ++idx) {
                const double proj = d[0] * nux + d[1] * nuy + d[2] * g.freq(2, bz);
                spec[idx] *= -proj * proj;
            }
        }
    }
    spec.to_physical();
    RealField dnn(density.grid_ptr());
    for (std::size_t i = 0; i < dnn.size(); ++i) dnn[i] = spec[i].real();

    return dipolar_convolution_at(supported(trig_interpolant(density)),
                                  supported(trig_interpolant(dnn)), point, o);
}

double kernel_coefficient_oracle(const Grid& base, const Vec3i& k, double tol) {
    // integral over the twofold box of U(y) e^{-i nu . y}; real and even, so
    // 8x the positive octant with cosine factors
    const Vec3 half = {2.0 * base.extent(0), 2.0 * base.extent(1), 2.0 * base.extent(2)};
    const Vec3 nu = {M_PI * k[0] / half[0], M_PI * k[1] / half[1], M_PI * k[2] / half[2]};
    const double a0 = 0.05 * std::min({half[0], half[1], half[2]});
    const double rb = 12.0 * a0;
    const double q = std::sqrt(nu[0] * nu[0] + nu[1] * nu[1] + nu[2] * nu[2]);
    const double inv_sqrt2a = 1.0 / (std::sqrt(2.0) * a0);

    // ball remainder: (U - g) with g the erf-mollified kernel
    double ball;
    if (q < 1e-12) {
        ball = adaptive_integrate([&](double r) { return std::erfc(r * inv_sqrt2a) * r; }, 0.0, rb,
                                  tol * 0.1);
    } else {
        ball = adaptive_integrate(
                   [&](double r) { return std::erfc(r * inv_sqrt2a) * std::sin(q * r); }, 0.0, rb,
                   tol * 0.1) /
               q;
    }

    // smooth mollified part over the box: tensor Gauss-Legendre, panels graded
    // toward the origin to resolve the a0 scale
    auto axis_nodes = [&](int a) {
        std::vector<double> edges{0.0, a0};
        while (edges.back() < half[a]) edges.push_back(std::min(edges.back() * 2.0, half[a]));
        std::vector<std::pair<double, double>> nodes;  // (y, weight)
        for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
            const double lo = edges[p], hi = edges[p + 1];
            for (int i = 0; i < kGL; ++i)
                nodes.emplace_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * kNode[i],
                                   0.5 * (hi - lo) * kWeight[i]);
        }
        return nodes;
    };
    const auto nx = axis_nodes(0), ny = axis_nodes(1), nz = axis_nodes(2);

    double box = 0.0;
    for (const auto& [x, wx] : nx) {
        const double cx = wx * std::cos(nu[0] * x);
        for (const auto& [y, wy] : ny) {
            const double cxy = cx * wy * std::cos(nu[1] * y);
            const double x2y2 = x * x + y * y;
            for (const auto& [z, wz] : nz) {
                const double r = std::sqrt(x2y2 + z * z);
                const double g = r > 1e-14
                                     ? std::erf(r * inv_sqrt2a) / (4.0 * M_PI * r)
                                     : inv_sqrt2a / (2.0 * M_PI * std::sqrt(M_PI));
                box += cxy * wz * std::cos(nu[2] * z) * g;
            }
        }
    }
    return 8.0 * box + ball;
}

double fd_gradient_check(const ComplexField& phi, const ComplexField& p,
                         const ModelParams& params, const KernelTable* table, double eps_fd) {
    if (!(eps_fd >= 1e-7 && eps_fd <= 1e-3))
        throw std::invalid_argument("fd_gradient_check: eps_fd must lie in [1e-7, 1e-3]");
    ComplexField plus = phi, minus = phi;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        plus[i] += eps_fd * p[i];
        minus[i] -= eps_fd * p[i];
    }
    const double e_plus = energy_value(plus, params, table);
    const double e_minus = energy_value(minus, params, table);
    const double fd = (e_plus - e_minus) / (2.0 * eps_fd);

    RealField rho = density_of(phi);
    RealField Phi(phi.grid_ptr());
    if (params.lambda != 0.0) {
        if (!table) throw std::invalid_argument("fd_gradient_check: missing kernel table");
        Phi = dipolar_potential(rho, *table, params.dipole);
    }
    const ComplexField h_phi = apply_hamiltonian(phi, Phi, params);
    const double directional = 2.0 * inner_product(h_phi, p);
    return std::abs(fd - directional) / std::max(1.0, std::abs(directional));
}

}  // namespace oracle
}  // namespace becgs
