#include "becgs/initial.hpp"

#include <cmath>
#include <stdexcept>

namespace becgs {

const std::vector<GuessKind>& all_guess_kinds() {
    static const std::vector<GuessKind> kinds = {
        GuessKind::a, GuessKind::b, GuessKind::b_bar, GuessKind::c, GuessKind::c_bar,
        GuessKind::d, GuessKind::d_bar, GuessKind::e, GuessKind::e_bar, GuessKind::f};
    return kinds;
}

std::string to_string(GuessKind kind) {
    switch (kind) {
        case GuessKind::a: return "a";
        case GuessKind::b: return "b";
        case GuessKind::b_bar: return "bbar";
        case GuessKind::c: return "c";
        case GuessKind::c_bar: return "cbar";
        case GuessKind::d: return "d";
        case GuessKind::d_bar: return "dbar";
        case GuessKind::e: return "e";
        case GuessKind::e_bar: return "ebar";
        case GuessKind::f: return "f";
    }
    return "?";
}

GuessKind guess_kind_from_string(const std::string& name) {
    for (GuessKind k : all_guess_kinds())
        if (to_string(k) == name) return k;
    throw std::invalid_argument("unknown guess kind '" + name +
                                "' (expected a, b, bbar, c, cbar, d, dbar, e, ebar, f)");
}

double thomas_fermi_mu(const ModelParams& params) {
    if (!(params.beta > 0.0))
        throw std::invalid_argument("thomas_fermi_mu: requires beta > 0");
    params.validate();
    const double arg =
        15.0 * params.beta * params.gamma[0] * params.gamma[1] * params.gamma[2] / (4.0 * M_PI);
    return 0.5 * std::pow(arg, 0.4);
}

namespace {

ComplexField gaussian_a(GridPtr grid) {
    const double c = std::pow(M_PI, -0.75);
    ComplexField out = ComplexField::sample(std::move(grid), [c](double x, double y, double z) {
        return Complex(c * std::exp(-0.5 * (x * x + y * y + z * z)), 0.0);
    });
    normalize(out);
    return out;
}

ComplexField vortex_b(GridPtr grid) {
    const double c = std::pow(M_PI, -0.75);
    ComplexField out = ComplexField::sample(std::move(grid), [c](double x, double y, double z) {
        return Complex(x, y) * (c * std::exp(-0.5 * (x * x + y * y + z * z)));
    });
    normalize(out);
    return out;
}

ComplexField mix(const ComplexField& u, const ComplexField& v, double cu, double cv) {
    ComplexField out = u;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = cu * u[i] + cv * v[i];
    normalize(out);
    return out;
}

ComplexField conjugate(ComplexField f) {
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::conj(f[i]);
    return f;
}

ComplexField thomas_fermi(GridPtr grid, const ModelParams& params) {
    const double mu = thomas_fermi_mu(params);
    const Vec3 g2 = {params.gamma[0] * params.gamma[0], params.gamma[1] * params.gamma[1],
                     params.gamma[2] * params.gamma[2]};
    const double beta = params.beta;
    ComplexField out = ComplexField::sample(std::move(grid), [&](double x, double y, double z) {
        const double v = 0.5 * (g2[0] * x * x + g2[1] * y * y + g2[2] * z * z);
        // clamp under the radical so rounding at the ellipsoid edge stays real
        const double val = v < mu ? std::sqrt(std::max(mu - v, 0.0) / beta) : 0.0;
        return Complex(val, 0.0);
    });
    normalize(out);
    return out;
}

}  // namespace

ComplexField make_initial(GuessKind kind, GridPtr grid, const ModelParams& params) {
    switch (kind) {
        case GuessKind::a:
            return gaussian_a(grid);
        case GuessKind::b:
            return vortex_b(grid);
        case GuessKind::b_bar:
            return conjugate(vortex_b(grid));
        case GuessKind::c:
            return mix(gaussian_a(grid), vortex_b(grid), 1.0, 1.0);
        case GuessKind::c_bar:
            return conjugate(mix(gaussian_a(grid), vortex_b(grid), 1.0, 1.0));
        case GuessKind::d:
            return mix(gaussian_a(grid), vortex_b(grid), 1.0 - params.omega, params.omega);
        case GuessKind::d_bar:
            return conjugate(
                mix(gaussian_a(grid), vortex_b(grid), 1.0 - params.omega, params.omega));
        case GuessKind::e:
            return mix(gaussian_a(grid), vortex_b(grid), params.omega, 1.0 - params.omega);
        case GuessKind::e_bar:
            return conjugate(
                mix(gaussian_a(grid), vortex_b(grid), params.omega, 1.0 - params.omega));
        case GuessKind::f:
            return thomas_fermi(grid, params);
    }
    throw std::invalid_argument("make_initial: bad kind");
}

}  // namespace becgs
