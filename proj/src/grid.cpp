#include "becgs/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

namespace becgs {

namespace {

// FFTW planning is not thread safe; execution through fftw_execute_dft is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

int g_fft_threads = 1;

#ifdef BECGS_HAVE_FFTW_THREADS
bool g_threads_initialized = false;
#endif

}  // namespace

void set_fft_threads(int n) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    g_fft_threads = n < 1 ? 1 : n;
#ifdef BECGS_HAVE_FFTW_THREADS
    if (g_fft_threads > 1 && !g_threads_initialized) {
        fftw_init_threads();
        g_threads_initialized = true;
    }
#endif
}

int fft_threads() { return g_fft_threads; }

Grid::Grid(double half_width, const Vec3& xi, const Vec3i& counts)
    : half_width_(half_width), xi_(xi), counts_(counts) {
    total_ = 1;
    for (int a = 0; a < 3; ++a) {
        mesh_[a] = 2.0 * half_width_ * xi_[a] / counts_[a];
        total_ *= static_cast<std::size_t>(counts_[a]);
        coords_[a].resize(counts_[a]);
        for (int j = 0; j < counts_[a]; ++j)
            coords_[a][j] = -half_width_ * xi_[a] + j * mesh_[a];
        freqs_[a].resize(counts_[a]);
        deriv_freqs_[a].resize(counts_[a]);
        const double base = M_PI / (half_width_ * xi_[a]);
        for (int b = 0; b < counts_[a]; ++b) {
            int k = b < counts_[a] / 2 ? b : b - counts_[a];
            freqs_[a][b] = base * k;
            deriv_freqs_[a][b] = b == counts_[a] / 2 ? 0.0 : base * k;
        }
    }

    std::lock_guard<std::mutex> lock(planner_mutex());
#ifdef BECGS_HAVE_FFTW_THREADS
    if (g_fft_threads > 1) fftw_plan_with_nthreads(g_fft_threads);
#endif
    aligned_vector<Complex> scratch(total_);
    fftw_complex* p = reinterpret_cast<fftw_complex*>(scratch.data());
    plan_forward_ = fftw_plan_dft_3d(counts_[0], counts_[1], counts_[2], p, p,
                                     FFTW_FORWARD, FFTW_ESTIMATE);
    plan_backward_ = fftw_plan_dft_3d(counts_[0], counts_[1], counts_[2], p, p,
                                      FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plan_forward_ || !plan_backward_)
        throw std::runtime_error("Grid: FFT plan creation failed");
}

Grid::~Grid() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_forward_) fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
    if (plan_backward_) fftw_destroy_plan(static_cast<fftw_plan>(plan_backward_));
}

void Grid::fft_forward(Complex* data) const {
    fftw_complex* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(plan_forward_), p, p);
    const double scale = 1.0 / static_cast<double>(total_);
    for (std::size_t i = 0; i < total_; ++i) data[i] *= scale;
}

void Grid::fft_backward(Complex* data) const {
    fftw_complex* p = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(plan_backward_), p, p);
}

bool Grid::same_layout(const Grid& other) const {
    return half_width_ == other.half_width_ && xi_ == other.xi_ && counts_ == other.counts_;
}

std::shared_ptr<const Grid> Grid::make(double half_width, const Vec3& xi, const Vec3i& counts) {
    if (!(half_width > 0.0))
        throw std::invalid_argument("build_grid: half_width must be positive");
    double xi_max = 0.0;
    for (int a = 0; a < 3; ++a) {
        if (!(xi[a] > 0.0) || xi[a] > 1.0)
            throw std::invalid_argument("build_grid: anisotropy components must lie in (0,1]");
        xi_max = std::max(xi_max, xi[a]);
    }
    if (std::abs(xi_max - 1.0) > 1e-12)
        throw std::invalid_argument("build_grid: max anisotropy component must equal 1");
    for (int a = 0; a < 3; ++a) {
        if (counts[a] < 4 || counts[a] % 2 != 0)
            throw std::invalid_argument("build_grid: counts must be even and >= 4, got " +
                                        std::to_string(counts[a]));
    }
    return std::shared_ptr<const Grid>(new Grid(half_width, xi, counts));
}

GridPtr build_grid(double half_width, const Vec3& xi, const Vec3i& counts) {
    return Grid::make(half_width, xi, counts);
}

ComplexField::ComplexField(GridPtr grid, Space space)
    : grid_(std::move(grid)), space_(space), values_(grid_->total()) {}

void ComplexField::to_spectral() {
    if (space_ == Space::spectral)
        throw std::logic_error("ComplexField: already in spectral representation");
    grid_->fft_forward(values_.data());
    space_ = Space::spectral;
}

void ComplexField::to_physical() {
    if (space_ == Space::physical)
        throw std::logic_error("ComplexField: already in physical representation");
    grid_->fft_backward(values_.data());
    space_ = Space::physical;
}

RealField::RealField(GridPtr grid) : grid_(std::move(grid)), values_(grid_->total()) {}

void require_same_grid(const ComplexField& u, const ComplexField& v) {
    if (&u.grid() != &v.grid() && !u.grid().same_layout(v.grid()))
        throw std::invalid_argument("fields live on different grids");
}

void require_physical(const ComplexField& f, const char* what) {
    if (f.space() != Space::physical)
        throw std::logic_error(std::string(what) + ": expected physical representation");
}

ComplexField forward_transform(const ComplexField& f) {
    require_physical(f, "forward_transform");
    ComplexField out = f;
    out.to_spectral();
    return out;
}

ComplexField inverse_transform(const ComplexField& f) {
    if (f.space() != Space::spectral)
        throw std::logic_error("inverse_transform: expected spectral representation");
    ComplexField out = f;
    out.to_physical();
    return out;
}

namespace {

// apply a per-bin multiplier in spectral space and return to physical space
template <typename Mult>
ComplexField spectral_multiply(const ComplexField& f, Mult&& m) {
    ComplexField out = forward_transform(f);
    const Grid& g = out.grid();
    const Vec3i n = g.counts();
    std::size_t idx = 0;
    for (int bx = 0; bx < n[0]; ++bx) {
        const double nx = g.freq(0, bx);
        for (int by = 0; by < n[1]; ++by) {
            const double ny = g.freq(1, by);
            for (int bz = 0; bz < n[2]; ++bz, ++idx)
                out[idx] *= m(nx, ny, g.freq(2, bz));
        }
    }
    out.to_physical();
    return out;
}

}  // namespace

ComplexField laplacian(const ComplexField& f) {
    return spectral_multiply(f, [](double nx, double ny, double nz) {
        return Complex(-(nx * nx + ny * ny + nz * nz), 0.0);
    });
}

ComplexField gradient_component(const ComplexField& f, int axis) {
    if (axis < 0 || axis > 2) throw std::invalid_argument("gradient_component: bad axis");
    ComplexField out = forward_transform(f);
    const Grid& g = out.grid();
    const Vec3i n = g.counts();
    std::size_t idx = 0;
    for (int bx = 0; bx < n[0]; ++bx)
        for (int by = 0; by < n[1]; ++by)
            for (int bz = 0; bz < n[2]; ++bz, ++idx) {
                const int bin = axis == 0 ? bx : (axis == 1 ? by : bz);
                out[idx] *= Complex(0.0, g.deriv_freq(axis, bin));
            }
    out.to_physical();
    return out;
}

ComplexField angular_momentum_z(const ComplexField& f) {
    require_physical(f, "angular_momentum_z");
    ComplexField spec = forward_transform(f);
    const Grid& g = spec.grid();
    const Vec3i n = g.counts();

    ComplexField dx = spec;
    ComplexField dy = spec;
    std::size_t idx = 0;
    for (int bx = 0; bx < n[0]; ++bx) {
        const double nux = g.deriv_freq(0, bx);
        for (int by = 0; by < n[1]; ++by) {
            const double nuy = g.deriv_freq(1, by);
            for (int bz = 0; bz < n[2]; ++bz, ++idx) {
                dx[idx] *= Complex(0.0, nux);
                dy[idx] *= Complex(0.0, nuy);
            }
        }
    }
    dx.to_physical();
    dy.to_physical();

    ComplexField out(f.grid_ptr());
    idx = 0;
    const Complex mi(0.0, -1.0);
    for (int i = 0; i < n[0]; ++i) {
        const double x = g.coord(0, i);
        for (int j = 0; j < n[1]; ++j) {
            const double y = g.coord(1, j);
            for (int k = 0; k < n[2]; ++k, ++idx)
                out[idx] = mi * (x * dy[idx] - y * dx[idx]);
        }
    }
    return out;
}

double inner_product(const ComplexField& u, const ComplexField& v) {
    require_same_grid(u, v);
    require_physical(u, "inner_product");
    require_physical(v, "inner_product");
    double acc = 0.0;
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) {
        acc += u[i].real() * v[i].real() + u[i].imag() * v[i].imag();
    }
    return acc * u.grid().cell_volume();
}

Complex complex_inner_product(const ComplexField& u, const ComplexField& v) {
    require_same_grid(u, v);
    Complex acc(0.0, 0.0);
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) acc += u[i] * std::conj(v[i]);
    return acc * u.grid().cell_volume();
}

double norm(const ComplexField& f) { return std::sqrt(inner_product(f, f)); }

double max_abs_diff(const ComplexField& u, const ComplexField& v) {
    require_same_grid(u, v);
    double m = 0.0;
    const std::size_t n = u.size();
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(u[i] - v[i]));
    return m;
}

RealField density_of(const ComplexField& phi) {
    require_physical(phi, "density_of");
    RealField rho(phi.grid_ptr());
    const std::size_t n = phi.size();
    for (std::size_t i = 0; i < n; ++i) rho[i] = std::norm(phi[i]);
    return rho;
}

void normalize(ComplexField& phi) {
    const double nrm = norm(phi);
    if (nrm == 0.0) throw std::invalid_argument("normalize: zero field");
    const double s = 1.0 / nrm;
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] *= s;
}

}  // namespace becgs
