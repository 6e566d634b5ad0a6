#pragma once

#include <cstddef>
#include <vector>

namespace becgs {

/// Finite Gaussian expansion of the Coulomb kernel U(r) = 1/(4 pi r):
/// U(r) ~ sum_l w_l exp(-r^2 / s_l^2), uniformly to relative accuracy
/// epsilon on the validity interval [delta, r_max].
class SumOfGaussians {
public:
    struct Term {
        double weight;
        double width;  // kernel is weight * exp(-(r/width)^2)
    };

    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    double delta() const { return delta_; }
    double r_max() const { return r_max_; }
    double target_accuracy() const { return epsilon_; }
    double achieved_accuracy() const { return achieved_; }

    double evaluate(double r) const;

    friend SumOfGaussians build_sog(double delta, double r_max, double epsilon);

private:
    std::vector<Term> terms_;
    double delta_ = 0.0;
    double r_max_ = 0.0;
    double epsilon_ = 0.0;
    double achieved_ = 0.0;
};

/// Builds the expansion by a trapezoid discretization (in log of the inverse
/// width) of the Gaussian integral identity for 1/r, then verifies the
/// relative error on a dense log-spaced sample and refines until epsilon is
/// met. Throws if the accuracy cannot be reached within the term cap.
SumOfGaussians build_sog(double delta, double r_max, double epsilon);

}  // namespace becgs
