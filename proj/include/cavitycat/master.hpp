#pragma once

// Zero-temperature Lindblad evolution d(rho)/dt = gamma (a rho a^dag - {a^dag a, rho}/2)
// in closed form on coherent dyads:
//     |a><b|  ->  <b|a>^{1 - e^{-gamma t}} |a e^{-gamma t/2}><b e^{-gamma t/2}|
// For the cat pair (alpha0, -alpha0) the prefactor is exp(-2|alpha0|^2 (1 - e^{-gamma t})).
// The general dyad rule covers case b; it is checked against the truncated
// Fock integrator in fock.hpp rather than assumed.

#include <cmath>
#include <stdexcept>

#include "cavitycat/coherent.hpp"

namespace cavitycat {

struct MasterParams {
    double gamma;  // field-energy decay rate 1/t_c

    explicit MasterParams(double g) : gamma(g) {
        if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("MasterParams: gamma must be > 0");
    }
};

namespace detail {
inline void require_time(double t, const char* who) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument(std::string(who) + ": t must be >= 0");
}
}  // namespace detail

inline CoherentLabel me_amplitude(const CoherentLabel& alpha0, const MasterParams& p, double t) {
    detail::require_time(t, "me_amplitude");
    return alpha0.scaled(std::exp(-0.5 * p.gamma * t));
}

// exp[(conj(b) a - (|a|^2 + |b|^2)/2)(1 - e^{-gamma t})]
inline Complex me_dyad_factor(const CoherentLabel& a, const CoherentLabel& b, const MasterParams& p, double t) {
    detail::require_time(t, "me_dyad_factor");
    const Complex x = a.amplitude();
    const Complex y = b.amplitude();
    const double lost = -std::expm1(-p.gamma * t);
    return std::exp((std::conj(y) * x - 0.5 * (std::norm(x) + std::norm(y))) * lost);
}

inline ReducedDensity me_reduce(const FieldBathSuperposition& initial, const MasterParams& p, double t) {
    detail::require_time(t, "me_reduce");
    if (!initial.normalized()) throw ContractViolation("me_reduce: initial state is not normalized");
    if (initial.bath_modes() != 0) throw std::invalid_argument("me_reduce: initial state must be bath-free");
    const auto& br = initial.branches();
    const auto n = static_cast<Eigen::Index>(br.size());
    std::vector<CoherentLabel> labels;
    for (const auto& b : br) labels.push_back(me_amplitude(b.field, p, t));
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = br[i].weight * std::conj(br[j].weight) * me_dyad_factor(br[i].field, br[j].field, p, t);
    return ReducedDensity(std::move(labels), std::move(m));
}

}  // namespace cavitycat
