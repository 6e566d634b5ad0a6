#include "becgs/model.hpp"

#include <cmath>
#include <stdexcept>

namespace becgs {

void ModelParams::validate() const {
    for (int a = 0; a < 3; ++a)
        if (!(gamma[a] > 0.0))
            throw std::invalid_argument("ModelParams: trap frequencies must be positive");
}

double virial_residual(const EnergyReport& report) { return std::abs(report.virial); }

RealField trap_field(GridPtr grid, const ModelParams& params) {
    params.validate();
    const Vec3 g2 = {params.gamma[0] * params.gamma[0], params.gamma[1] * params.gamma[1],
                     params.gamma[2] * params.gamma[2]};
    return RealField::sample(std::move(grid), [&](double x, double y, double z) {
        return 0.5 * (g2[0] * x * x + g2[1] * y * y + g2[2] * z * z);
    });
}

ComplexField apply_hamiltonian_linearized(const ComplexField& f, const RealField& trap,
                                          const RealField& rho, const RealField* Phi,
                                          const ModelParams& params, double* kinetic_form) {
    require_physical(f, "apply_hamiltonian");
    if (Phi == nullptr && params.lambda != 0.0)
        throw std::invalid_argument("apply_hamiltonian: missing dipolar potential");

    const Grid& g = f.grid();
    const Vec3i n = g.counts();
    const bool rotating = params.omega != 0.0;

    ComplexField spec = forward_transform(f);
    ComplexField kin(f.grid_ptr(), Space::spectral);
    ComplexField dx, dy;
    if (rotating) {
        dx = ComplexField(f.grid_ptr(), Space::spectral);
        dy = ComplexField(f.grid_ptr(), Space::spectral);
    }
    double kin_sum = 0.0;
    std::size_t idx = 0;
    for (int bx = 0; bx < n[0]; ++bx) {
        const double nux = g.freq(0, bx);
        for (int by = 0; by < n[1]; ++by) {
            const double nuy = g.freq(1, by);
            for (int bz = 0; bz < n[2]; ++bz, ++idx) {
                const double nuz = g.freq(2, bz);
                const Complex c = spec[idx];
                const double half_nu2 = 0.5 * (nux * nux + nuy * nuy + nuz * nuz);
                kin[idx] = half_nu2 * c;
                kin_sum += half_nu2 * std::norm(c);
                if (rotating) {
                    dx[idx] = Complex(0.0, g.deriv_freq(0, bx)) * c;
                    dy[idx] = Complex(0.0, g.deriv_freq(1, by)) * c;
                }
            }
        }
    }
    if (kinetic_form)
        *kinetic_form = kin_sum * g.cell_volume() * static_cast<double>(g.total());
    kin.to_physical();
    if (rotating) {
        dx.to_physical();
        dy.to_physical();
    }

    ComplexField out(f.grid_ptr());
    idx = 0;
    for (int i = 0; i < n[0]; ++i) {
        const double x = g.coord(0, i);
        for (int j = 0; j < n[1]; ++j) {
            const double y = g.coord(1, j);
            for (int k = 0; k < n[2]; ++k, ++idx) {
                double coeff = trap[idx] + params.beta * rho[idx];
                if (Phi) coeff += params.lambda * (*Phi)[idx];
                Complex v = kin[idx] + coeff * f[idx];
                if (rotating) {
                    // -Omega Lz f = +i Omega (x df/dy - y df/dx)
                    v += Complex(0.0, params.omega) * (x * dy[idx] - y * dx[idx]);
                }
                out[idx] = v;
            }
        }
    }
    return out;
}

ComplexField apply_hamiltonian(const ComplexField& phi, const RealField& Phi,
                               const ModelParams& params) {
    const RealField trap = trap_field(phi.grid_ptr(), params);
    const RealField rho = density_of(phi);
    const RealField* p = params.lambda != 0.0 ? &Phi : nullptr;
    return apply_hamiltonian_linearized(phi, trap, rho, p, params);
}

EnergyTerms energy_terms_with_potential(const ComplexField& phi, const ModelParams& params,
                                        const RealField& Phi, const RealField& trap) {
    require_physical(phi, "energy_terms");
    const Grid& g = phi.grid();
    const Vec3i n = g.counts();
    const double dv = g.cell_volume();
    const bool rotating = params.omega != 0.0;
    const bool dipolar = params.lambda != 0.0;

    EnergyTerms out;

    // kinetic energy from the spectral side (Parseval), sharing the transform
    // with the angular-momentum derivatives
    ComplexField spec = forward_transform(phi);
    ComplexField dx, dy;
    if (rotating) {
        dx = ComplexField(phi.grid_ptr(), Space::spectral);
        dy = ComplexField(phi.grid_ptr(), Space::spectral);
    }
    double kin = 0.0;
    std::size_t idx = 0;
    for (int bx = 0; bx < n[0]; ++bx) {
        const double nux = g.freq(0, bx);
        for (int by = 0; by < n[1]; ++by) {
            const double nuy = g.freq(1, by);
            for (int bz = 0; bz < n[2]; ++bz, ++idx) {
                const double nuz = g.freq(2, bz);
                const Complex c = spec[idx];
                kin += 0.5 * (nux * nux + nuy * nuy + nuz * nuz) * std::norm(c);
                if (rotating) {
                    dx[idx] = Complex(0.0, g.deriv_freq(0, bx)) * c;
                    dy[idx] = Complex(0.0, g.deriv_freq(1, by)) * c;
                }
            }
        }
    }
    out.kinetic = kin * dv * static_cast<double>(g.total());

    double pot = 0.0, inter = 0.0, dip = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double rho = std::norm(phi[i]);
        pot += trap[i] * rho;
        inter += rho * rho;
        if (dipolar) dip += Phi[i] * rho;
    }
    out.potential = pot * dv;
    out.interaction = 0.5 * params.beta * inter * dv;
    out.dipolar = 0.5 * params.lambda * dip * dv;

    if (rotating) {
        dx.to_physical();
        dy.to_physical();
        double rot = 0.0;
        idx = 0;
        for (int i = 0; i < n[0]; ++i) {
            const double x = g.coord(0, i);
            for (int j = 0; j < n[1]; ++j) {
                const double y = g.coord(1, j);
                for (int k = 0; k < n[2]; ++k, ++idx) {
                    // Re( (-i)(x dy - y dx) conj(phi) )
                    const Complex lz = Complex(0.0, -1.0) * (x * dy[idx] - y * dx[idx]);
                    rot += lz.real() * phi[idx].real() + lz.imag() * phi[idx].imag();
                }
            }
        }
        out.rotational = -params.omega * rot * dv;
    }
    return out;
}

EnergyTerms energy_terms(const ComplexField& phi, const ModelParams& params,
                         const KernelTable* table, const RealField& trap, RealField* Phi_out) {
    const bool dipolar = params.lambda != 0.0;
    if (dipolar && table == nullptr)
        throw std::invalid_argument("energy_terms: lambda != 0 requires a kernel table");

    RealField Phi;
    if (dipolar)
        Phi = dipolar_potential(density_of(phi), *table, params.dipole);
    else
        Phi = RealField(phi.grid_ptr());

    EnergyTerms out = energy_terms_with_potential(phi, params, Phi, trap);
    if (Phi_out) *Phi_out = std::move(Phi);
    return out;
}

double energy_value(const ComplexField& phi, const ModelParams& params, const KernelTable* table) {
    const RealField trap = trap_field(phi.grid_ptr(), params);
    return energy_terms(phi, params, table, trap).total();
}

EnergyReport energy_breakdown(const ComplexField& phi, const ModelParams& params,
                              const KernelTable* table) {
    const double nrm = norm(phi);
    if (std::abs(nrm - 1.0) > 1e-8)
        throw std::invalid_argument("energy_breakdown: state is not unit-normalized (||phi|| = " +
                                    std::to_string(nrm) + ")");
    const RealField trap = trap_field(phi.grid_ptr(), params);
    const EnergyTerms t = energy_terms(phi, params, table, trap);

    EnergyReport r;
    r.kinetic = t.kinetic;
    r.potential = t.potential;
    r.interaction = t.interaction;
    r.dipolar = t.dipolar;
    r.rotational = t.rotational;
    r.total = t.total();
    r.chemical_potential = r.total + r.interaction + r.dipolar;
    r.virial = 2.0 * r.kinetic - 2.0 * r.potential + 3.0 * r.interaction + 3.0 * r.dipolar;
    return r;
}

}  // namespace becgs
