#pragma once

#include <string>
#include <vector>

#include "becgs/model.hpp"

namespace becgs {

/// The ten standard starting states: Gaussian, central-vortex variants and
/// their conjugates, Omega-weighted mixtures, and the Thomas-Fermi profile.
enum class GuessKind { a, b, b_bar, c, c_bar, d, d_bar, e, e_bar, f };

const std::vector<GuessKind>& all_guess_kinds();
std::string to_string(GuessKind kind);
GuessKind guess_kind_from_string(const std::string& name);

/// mu_g^TF = (1/2) (15 beta gx gy gz / (4 pi))^{2/5}; requires beta > 0.
double thomas_fermi_mu(const ModelParams& params);

/// Closed-form guess sampled on the grid, renormalized to unit discrete norm.
ComplexField make_initial(GuessKind kind, GridPtr grid, const ModelParams& params);

}  // namespace becgs
