#include "becgs/kernel_table.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace becgs {

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1]
constexpr int kGL = 16;
constexpr double kGLNode[kGL] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
constexpr double kGLWeight[kGL] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

// Truncation ratio beyond which the whole-line Gaussian transform is exact to
// below 1e-31 absolute.
constexpr double kNarrowRatio = 8.5;

// F(nu) = int_{-A}^{A} e^{-y^2/s^2} e^{-i nu y} dy for all |k| = 0..kmax with
// nu = pi k / A; real and even in nu.
std::vector<double> axis_factors(double width, double a, int kmax) {
    std::vector<double> out(kmax + 1);
    if (a >= kNarrowRatio * width) {
        const double c = width * std::sqrt(M_PI);
        for (int k = 0; k <= kmax; ++k) {
            const double arg = M_PI * k / a * width * 0.5;
            out[k] = c * std::exp(-arg * arg);
        }
        return out;
    }
    // paneled Gauss-Legendre over [0, a]; at least two panels per half
    // oscillation of the highest mode
    const int panels = std::max(8, kmax / 2 + 4);
    const double pw = a / panels;
    std::vector<double> node(panels * kGL), wexp(panels * kGL);
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * pw;
        for (int q = 0; q < kGL; ++q) {
            const double y = mid + 0.5 * pw * kGLNode[q];
            const double u = y / width;
            node[p * kGL + q] = y;
            wexp[p * kGL + q] = 0.5 * pw * kGLWeight[q] * std::exp(-u * u);
        }
    }
    const std::size_t m = node.size();
    for (int k = 0; k <= kmax; ++k) {
        const double nu = M_PI * k / a;
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) acc += wexp[i] * std::cos(nu * node[i]);
        out[k] = 2.0 * acc;
    }
    return out;
}

}  // namespace

KernelTable::KernelTable(const KernelTable& other)
    : base_(other.base_),
      padded_(other.padded_),
      delta_(other.delta_),
      epsilon_(other.epsilon_),
      coeff_(other.coeff_) {
    boundary_warned.store(other.boundary_warned.load());
}

double KernelTable::coefficient(int kx, int ky, int kz) const {
    const Grid& g = *padded_;
    const int bx = g.mode_to_bin(0, kx);
    const int by = g.mode_to_bin(1, ky);
    const int bz = g.mode_to_bin(2, kz);
    return coeff_[g.index(bx, by, bz)];
}

bool KernelTable::matches(const Grid& base, double delta, double epsilon) const {
    return base_->same_layout(base) && delta_ == delta && epsilon_ == epsilon;
}

double default_sog_delta(const Grid& grid, double epsilon_sog) {
    const Vec3& h = grid.mesh();
    const double hmin = std::min({h[0], h[1], h[2]});
    return hmin * std::sqrt(epsilon_sog);
}

double required_kernel_radius(const Grid& grid) {
    double acc = 0.0;
    for (int a = 0; a < 3; ++a) {
        const double e = 2.0 * grid.extent(a);
        acc += e * e;
    }
    return std::sqrt(acc);
}

KernelTable precompute_kernel_coefficients(GridPtr grid, const SumOfGaussians& sog,
                                           double delta_used) {
    const double need = required_kernel_radius(*grid);
    if (sog.r_max() < need)
        throw std::invalid_argument(
            "precompute_kernel_coefficients: kernel expansion validity radius " +
            std::to_string(sog.r_max()) + " is smaller than the twofold-domain half-diagonal " +
            std::to_string(need));

    KernelTable table;
    table.base_ = grid;
    const Vec3i n = grid->counts();
    table.padded_ = Grid::make(2.0 * grid->half_width(), grid->anisotropy(),
                               {2 * n[0], 2 * n[1], 2 * n[2]});
    table.delta_ = delta_used;
    table.epsilon_ = sog.target_accuracy();

    const auto& terms = sog.terms();
    const std::size_t nt = terms.size();

    // per-axis factor tables: F[axis][l * (N_a+1) + |k|]
    std::array<std::vector<double>, 3> factors;
    for (int a = 0; a < 3; ++a) {
        const double half = 2.0 * grid->extent(a);  // twofold half width
        factors[a].resize(nt * (n[a] + 1));
        for (std::size_t l = 0; l < nt; ++l) {
            std::vector<double> f = axis_factors(terms[l].width, half, n[a]);
            std::copy(f.begin(), f.end(), factors[a].begin() + l * (n[a] + 1));
        }
    }

    const Grid& pg = *table.padded_;
    const Vec3i pn = pg.counts();
    table.coeff_.assign(pg.total(), 0.0);

    std::vector<double> partial(nt);
    std::size_t idx = 0;
    for (int bx = 0; bx < pn[0]; ++bx) {
        const int ax = std::abs(pg.bin_to_mode(0, bx));
        for (int by = 0; by < pn[1]; ++by) {
            const int ay = std::abs(pg.bin_to_mode(1, by));
            for (std::size_t l = 0; l < nt; ++l)
                partial[l] = terms[l].weight * factors[0][l * (n[0] + 1) + ax] *
                             factors[1][l * (n[1] + 1) + ay];
            for (int bz = 0; bz < pn[2]; ++bz, ++idx) {
                const int az = std::abs(pg.bin_to_mode(2, bz));
                double acc = 0.0;
                for (std::size_t l = 0; l < nt; ++l)
                    acc += partial[l] * factors[2][l * (n[2] + 1) + az];
                table.coeff_[idx] = acc;
            }
        }
    }
    return table;
}

KernelTable build_kernel_table(GridPtr grid, double epsilon_sog, double delta) {
    if (delta <= 0.0) delta = default_sog_delta(*grid, epsilon_sog);
    const double r_max = required_kernel_radius(*grid) * 1.01;
    SumOfGaussians sog = build_sog(delta, r_max, epsilon_sog);
    return precompute_kernel_coefficients(grid, sog, delta);
}

namespace {

constexpr char kCacheMagic[8] = {'B', 'E', 'C', 'K', 'R', 'N', '0', '1'};

template <typename T>
void write_raw(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_raw(std::istream& is, T& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
}

}  // namespace

void KernelTable::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("KernelTable::save: cannot open " + path);
    os.write(kCacheMagic, sizeof(kCacheMagic));
    const std::uint32_t version = 1;
    write_raw(os, version);
    write_raw(os, base_->half_width());
    for (int a = 0; a < 3; ++a) write_raw(os, base_->anisotropy()[a]);
    for (int a = 0; a < 3; ++a) {
        const std::int32_t c = base_->counts()[a];
        write_raw(os, c);
    }
    write_raw(os, delta_);
    write_raw(os, epsilon_);
    os.write(reinterpret_cast<const char*>(coeff_.data()),
             static_cast<std::streamsize>(coeff_.size() * sizeof(double)));
    if (!os) throw std::runtime_error("KernelTable::save: write failed for " + path);
}

KernelTable KernelTable::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("KernelTable::load: cannot open " + path);
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0)
        throw std::runtime_error("KernelTable::load: bad magic in " + path);
    std::uint32_t version = 0;
    read_raw(is, version);
    if (version != 1) throw std::runtime_error("KernelTable::load: unsupported version");
    double L = 0.0;
    Vec3 xi{};
    Vec3i n{};
    read_raw(is, L);
    for (int a = 0; a < 3; ++a) read_raw(is, xi[a]);
    for (int a = 0; a < 3; ++a) {
        std::int32_t c = 0;
        read_raw(is, c);
        n[a] = c;
    }
    KernelTable table;
    table.base_ = Grid::make(L, xi, n);
    table.padded_ = Grid::make(2.0 * L, xi, {2 * n[0], 2 * n[1], 2 * n[2]});
    read_raw(is, table.delta_);
    read_raw(is, table.epsilon_);
    table.coeff_.resize(table.padded_->total());
    is.read(reinterpret_cast<char*>(table.coeff_.data()),
            static_cast<std::streamsize>(table.coeff_.size() * sizeof(double)));
    if (!is) throw std::runtime_error("KernelTable::load: truncated file " + path);
    return table;
}

}  // namespace becgs
