#pragma once

#include <array>
#include <complex>
#include <cstdlib>
#include <memory>
#include <new>
#include <vector>

namespace becgs {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;
using Vec3i = std::array<int, 3>;

// 64-byte aligned storage so FFT plans and field buffers share one alignment class.
template <typename T>
struct AlignedAllocator {
    using value_type = T;
    static constexpr std::size_t alignment = 64;

    AlignedAllocator() = default;
    template <typename U>
    AlignedAllocator(const AlignedAllocator<U>&) {}

    T* allocate(std::size_t n) {
        std::size_t bytes = ((n * sizeof(T) + alignment - 1) / alignment) * alignment;
        void* p = std::aligned_alloc(alignment, bytes);
        if (!p) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept { std::free(p); }

    template <typename U>
    bool operator==(const AlignedAllocator<U>&) const { return true; }
};

template <typename T>
using aligned_vector = std::vector<T, AlignedAllocator<T>>;

/// Number of threads FFT plans created afterwards will use (default 1).
void set_fft_threads(int n);
int fft_threads();

/// Uniform tensor grid on the anisotropic box prod_a [-L xi_a, L xi_a) with
/// periodic Fourier basis. Immutable; shareable read-only across threads.
class Grid {
public:
    static std::shared_ptr<const Grid> make(double half_width, const Vec3& xi, const Vec3i& counts);
    ~Grid();

    Grid(const Grid&) = delete;
    Grid& operator=(const Grid&) = delete;

    double half_width() const { return half_width_; }
    const Vec3& anisotropy() const { return xi_; }
    const Vec3i& counts() const { return counts_; }
    const Vec3& mesh() const { return mesh_; }
    double anisotropy_strength() const { return 1.0 / (xi_[0] * xi_[1] * xi_[2]); }
    std::size_t total() const { return total_; }
    double cell_volume() const { return mesh_[0] * mesh_[1] * mesh_[2]; }
    double extent(int axis) const { return half_width_ * xi_[axis]; }

    // x_j = -L xi + j h, half-open on the right
    double coord(int axis, int j) const { return coords_[axis][j]; }
    const std::vector<double>& coords(int axis) const { return coords_[axis]; }

    // frequency nu_k = pi k / (L xi) for the FFT bin layout (0..N/2-1, -N/2..-1)
    double freq(int axis, int bin) const { return freqs_[axis][bin]; }
    const std::vector<double>& freqs(int axis) const { return freqs_[axis]; }

    // first-derivative symbol: nu_k with the unpaired Nyquist bin zeroed, so
    // the discrete gradient is exactly skew-adjoint and Lz self-adjoint
    double deriv_freq(int axis, int bin) const { return deriv_freqs_[axis][bin]; }
    int bin_to_mode(int axis, int bin) const {
        return bin < counts_[axis] / 2 ? bin : bin - counts_[axis];
    }
    int mode_to_bin(int axis, int k) const { return k >= 0 ? k : k + counts_[axis]; }

    std::size_t index(int jx, int jy, int jz) const {
        return (static_cast<std::size_t>(jx) * counts_[1] + jy) * counts_[2] + jz;
    }

    // In-place transforms on a buffer of size total(). Forward carries the 1/N
    // factor; backward carries none.
    void fft_forward(Complex* data) const;
    void fft_backward(Complex* data) const;

    bool same_layout(const Grid& other) const;

private:
    Grid(double half_width, const Vec3& xi, const Vec3i& counts);

    double half_width_;
    Vec3 xi_;
    Vec3i counts_;
    Vec3 mesh_;
    std::size_t total_;
    std::array<std::vector<double>, 3> coords_;
    std::array<std::vector<double>, 3> freqs_;
    std::array<std::vector<double>, 3> deriv_freqs_;
    void* plan_forward_ = nullptr;
    void* plan_backward_ = nullptr;
};

using GridPtr = std::shared_ptr<const Grid>;

/// build_grid: validated factory for Grid (L > 0, xi in (0,1] with max = 1,
/// even counts >= 4).
GridPtr build_grid(double half_width, const Vec3& xi, const Vec3i& counts);

enum class Space { physical, spectral };

class ComplexField {
public:
    ComplexField() = default;
    explicit ComplexField(GridPtr grid, Space space = Space::physical);

    template <typename F>
    static ComplexField sample(GridPtr grid, F&& f) {
        ComplexField out(grid);
        const Grid& g = *grid;
        const Vec3i n = g.counts();
        std::size_t idx = 0;
        for (int i = 0; i < n[0]; ++i)
            for (int j = 0; j < n[1]; ++j)
                for (int k = 0; k < n[2]; ++k, ++idx)
                    out.values_[idx] = f(g.coord(0, i), g.coord(1, j), g.coord(2, k));
        return out;
    }

    const Grid& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }
    Space space() const { return space_; }
    std::size_t size() const { return values_.size(); }
    Complex* data() { return values_.data(); }
    const Complex* data() const { return values_.data(); }
    Complex& operator[](std::size_t i) { return values_[i]; }
    const Complex& operator[](std::size_t i) const { return values_[i]; }

    void to_spectral();
    void to_physical();

private:
    GridPtr grid_;
    Space space_ = Space::physical;
    aligned_vector<Complex> values_;
};

class RealField {
public:
    RealField() = default;
    explicit RealField(GridPtr grid);

    template <typename F>
    static RealField sample(GridPtr grid, F&& f) {
        RealField out(grid);
        const Grid& g = *grid;
        const Vec3i n = g.counts();
        std::size_t idx = 0;
        for (int i = 0; i < n[0]; ++i)
            for (int j = 0; j < n[1]; ++j)
                for (int k = 0; k < n[2]; ++k, ++idx)
                    out.values_[idx] = f(g.coord(0, i), g.coord(1, j), g.coord(2, k));
        return out;
    }

    const Grid& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    double* data() { return values_.data(); }
    const double* data() const { return values_.data(); }
    double& operator[](std::size_t i) { return values_[i]; }
    const double& operator[](std::size_t i) const { return values_[i]; }

private:
    GridPtr grid_;
    std::vector<double> values_;
};

// --- spectral operators (inputs in physical space, outputs in physical space) ---

ComplexField forward_transform(const ComplexField& f);
ComplexField inverse_transform(const ComplexField& f);
ComplexField laplacian(const ComplexField& f);
ComplexField gradient_component(const ComplexField& f, int axis);
ComplexField angular_momentum_z(const ComplexField& f);

/// Re( hx hy hz sum_j u_j conj(v_j) )
double inner_product(const ComplexField& u, const ComplexField& v);
/// hx hy hz sum_j u_j conj(v_j), no real part taken
Complex complex_inner_product(const ComplexField& u, const ComplexField& v);
double norm(const ComplexField& f);
/// max_j |u_j - v_j|
double max_abs_diff(const ComplexField& u, const ComplexField& v);

RealField density_of(const ComplexField& phi);   // |phi|^2 pointwise
void normalize(ComplexField& phi);               // rescale to unit discrete norm

void require_same_grid(const ComplexField& u, const ComplexField& v);
void require_physical(const ComplexField& f, const char* what);

}  // namespace becgs
