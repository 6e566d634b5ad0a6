#include "becgs/sog.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace becgs {

namespace {

constexpr std::size_t kTermCap = 4000;
constexpr int kRefineRounds = 8;
constexpr int kVerifySamples = 10000;

double kernel_value(double r) { return 1.0 / (4.0 * M_PI * r); }

double max_relative_error(const SumOfGaussians& sog, double delta, double r_max) {
    double worst = 0.0;
    const double lr0 = std::log(delta), lr1 = std::log(r_max);
    for (int i = 0; i < kVerifySamples; ++i) {
        const double r = std::exp(lr0 + (lr1 - lr0) * i / (kVerifySamples - 1.0));
        const double ref = kernel_value(r);
        worst = std::max(worst, std::abs(sog.evaluate(r) - ref) / ref);
    }
    return worst;
}

}  // namespace

double SumOfGaussians::evaluate(double r) const {
    double acc = 0.0;
    for (const Term& t : terms_) {
        const double u = r / t.width;
        acc += t.weight * std::exp(-u * u);
    }
    return acc;
}

SumOfGaussians build_sog(double delta, double r_max, double epsilon) {
    if (!(delta > 0.0) || !(delta < r_max))
        throw std::invalid_argument("build_sog: need 0 < delta < r_max");
    if (!(epsilon > 1e-15) || !(epsilon < 1e-2))
        throw std::invalid_argument("build_sog: epsilon must lie in (1e-15, 1e-2)");

    // 1/(4 pi r) = (1/(2 pi^{3/2})) * int e^{-r^2 e^{2 sigma}} e^{sigma} d sigma.
    // Step and truncation window sized for relative accuracy epsilon; the upper
    // end resolves r = delta, the lower end covers r = r_max.
    double step = 1.0 / (0.20 - 0.47 * std::log10(epsilon));
    const double tail = std::max(-2.5 * std::log(epsilon), 5.0);
    double lo = std::log(epsilon * std::sqrt(M_PI) / (4.0 * r_max));
    double hi = 0.5 * std::log(tail / (delta * delta));

    for (int round = 0; round < kRefineRounds; ++round) {
        const std::size_t count = static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 1;
        if (count > kTermCap)
            throw std::runtime_error(
                "build_sog: cannot reach accuracy " + std::to_string(epsilon) +
                " within the term cap; parameters too aggressive");
        const double h = (hi - lo) / (count - 1);
        const double scale = 1.0 / (2.0 * std::pow(M_PI, 1.5));

        SumOfGaussians sog;
        sog.delta_ = delta;
        sog.r_max_ = r_max;
        sog.epsilon_ = epsilon;
        sog.terms_.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double sigma = lo + h * i;
            double w = h * std::exp(sigma) * scale;
            if (i == 0 || i + 1 == count) w *= 0.5;
            sog.terms_.push_back({w, std::exp(-sigma)});
        }

        // prune terms too narrow to matter anywhere on [delta, r_max]
        const double floor = epsilon * kernel_value(r_max) * 1e-3;
        std::vector<SumOfGaussians::Term> kept;
        kept.reserve(sog.terms_.size());
        for (const auto& t : sog.terms_) {
            const double u = delta / t.width;
            if (t.weight * std::exp(-u * u) >= floor) kept.push_back(t);
        }
        sog.terms_ = std::move(kept);

        sog.achieved_ = max_relative_error(sog, delta, r_max);
        if (sog.achieved_ <= epsilon) return sog;

        step *= 0.9;
        lo -= 0.3;
        hi += 0.15;
    }
    throw std::runtime_error("build_sog: accuracy target not met after refinement");
}

}  // namespace becgs
