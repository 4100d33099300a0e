#pragma once

// Zero-temperature reservoir coupled to the cavity mode through
//     H_int = sum_k hbar gamma_k (a^dag b_k + b_k^dag a).
// In the interaction picture that removes hbar omega (a^dag a + sum_k b_k^dag b_k)
// a product of coherent states stays a product of coherent states, with
// amplitudes following the linear flow
//     i d(alpha)/dt  = sum_k gamma_k beta_k
//     i d(beta_k)/dt = Delta_k beta_k + gamma_k alpha,     Delta_k = omega_k - omega.
// The flow is linear, so a single response (g(t), f_k(t)) for unit initial
// field amplitude and an empty bath propagates every branch.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cavitycat/coherent.hpp"

namespace cavitycat {

class BathSpec {
public:
    BathSpec(std::vector<double> detunings, std::vector<double> couplings, double target_gamma);

    const std::vector<double>& detunings() const noexcept { return detunings_; }
    const std::vector<double>& couplings() const noexcept { return couplings_; }
    double target_gamma() const noexcept { return target_gamma_; }
    std::size_t modes() const noexcept { return detunings_.size(); }
    // 2 pi / (smallest detuning spacing); infinite for a single mode.
    double recurrence_time() const noexcept { return recurrence_time_; }

    // Largest rate in the coefficient matrix, max(|Delta_k|, sqrt(sum gamma_k^2)).
    double rate_scale() const;

    // Spectral decomposition of the (K+1)x(K+1) coefficient matrix
    // H = [[0, gamma^T], [gamma, diag(Delta)]], computed once per spec.
    struct Decomposition {
        Eigen::VectorXd energies;
        Eigen::MatrixXd vectors;
        Eigen::VectorXd field_row;  // vectors.row(0)
    };
    const Decomposition& decomposition() const noexcept { return *decomposition_; }

    Eigen::MatrixXd coefficient_matrix() const;

private:
    std::vector<double> detunings_;
    std::vector<double> couplings_;
    double target_gamma_;
    double recurrence_time_;
    std::shared_ptr<const Decomposition> decomposition_;
};

inline BathSpec::BathSpec(std::vector<double> detunings, std::vector<double> couplings, double target_gamma)
    : detunings_(std::move(detunings)), couplings_(std::move(couplings)), target_gamma_(target_gamma) {
    if (detunings_.empty() || detunings_.size() != couplings_.size()) {
        throw std::invalid_argument("BathSpec: detunings and couplings must be non-empty and equal length");
    }
    if (!(target_gamma_ > 0.0) || !std::isfinite(target_gamma_)) {
        throw std::invalid_argument("BathSpec: target_gamma must be positive");
    }
    for (std::size_t k = 0; k < detunings_.size(); ++k) {
        if (!std::isfinite(detunings_[k]) || !(couplings_[k] > 0.0) || !std::isfinite(couplings_[k])) {
            throw std::invalid_argument("BathSpec: couplings must be positive and all rates finite");
        }
    }
    std::vector<double> sorted = detunings_;
    std::sort(sorted.begin(), sorted.end());
    double spacing = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < sorted.size(); ++k) spacing = std::min(spacing, sorted[k] - sorted[k - 1]);
    if (!(spacing > 0.0)) throw std::invalid_argument("BathSpec: duplicate detunings");
    recurrence_time_ = sorted.size() == 1 ? std::numeric_limits<double>::infinity() : 2.0 * std::numbers::pi / spacing;

    const Eigen::MatrixXd h = coefficient_matrix();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve(h);
    if (solve.info() != Eigen::Success) throw std::runtime_error("BathSpec: eigendecomposition failed");
    auto d = std::make_shared<Decomposition>();
    d->energies = solve.eigenvalues();
    d->vectors = solve.eigenvectors();
    d->field_row = d->vectors.row(0).transpose();
    decomposition_ = std::move(d);
}

inline Eigen::MatrixXd BathSpec::coefficient_matrix() const {
    const auto k = static_cast<Eigen::Index>(modes());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (Eigen::Index i = 0; i < k; ++i) {
        h(0, i + 1) = couplings_[i];
        h(i + 1, 0) = couplings_[i];
        h(i + 1, i + 1) = detunings_[i];
    }
    return h;
}

inline double BathSpec::rate_scale() const {
    double dmax = 0.0, g2 = 0.0;
    for (std::size_t k = 0; k < modes(); ++k) {
        dmax = std::max(dmax, std::abs(detunings_[k]));
        g2 += couplings_[k] * couplings_[k];
    }
    return std::max(dmax, std::sqrt(g2));
}

// Equally spaced detunings on [-half_bandwidth, half_bandwidth] with uniform
// golden-rule couplings gamma_k = sqrt(target_gamma * d / (2 pi)), so the
// Wigner-Weisskopf decay rate of the field intensity equals target_gamma.
inline BathSpec discretize_flat_band(double target_gamma, int modes, double half_bandwidth) {
    if (modes < 3 || modes % 2 == 0) {
        throw std::invalid_argument("discretize_flat_band: mode count must be odd and >= 3");
    }
    if (!(target_gamma > 0.0) || !(half_bandwidth >= 10.0 * target_gamma)) {
        throw std::invalid_argument("discretize_flat_band: need target_gamma > 0 and half_bandwidth >= 10 gamma");
    }
    const double d = 2.0 * half_bandwidth / (modes - 1);
    const double coupling = std::sqrt(target_gamma * d / (2.0 * std::numbers::pi));
    std::vector<double> det(static_cast<std::size_t>(modes));
    const int centre = modes / 2;
    for (int k = 0; k < modes; ++k) det[k] = (k - centre) * d;  // exact zero at the centre
    return BathSpec(std::move(det), std::vector<double>(static_cast<std::size_t>(modes), coupling), target_gamma);
}

struct ResponseFunctions {
    double time = 0.0;
    Complex g{1.0, 0.0};
    std::vector<Complex> f;
    bool recurrence_warning = false;

    // |g|^2 + sum_k |f_k|^2; one for an exact flow.
    double total_weight() const {
        double s = std::norm(g);
        for (const auto& x : f) s += std::norm(x);
        return s;
    }
    double bath_weight() const {
        double s = 0.0;
        for (const auto& x : f) s += std::norm(x);
        return s;
    }
};

// Column 0 of exp(-i H t), one matrix-vector product per call.
inline ResponseFunctions propagate(const BathSpec& spec, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("propagate: t must be finite and >= 0");
    const auto& dec = spec.decomposition();
    const auto n = dec.energies.size();
    Eigen::VectorXcd rotated(n);
    for (Eigen::Index m = 0; m < n; ++m) rotated(m) = dec.field_row(m) * std::polar(1.0, -dec.energies(m) * t);
    const Eigen::VectorXcd column = dec.vectors.cast<Complex>() * rotated;
    ResponseFunctions r;
    r.time = t;
    r.g = column(0);
    r.f.assign(column.data() + 1, column.data() + n);
    r.recurrence_warning = t > 0.5 * spec.recurrence_time();
    return r;
}

// Classical fourth-order Runge-Kutta on the same flow; a cross-check for
// propagate(), not a production path.
inline ResponseFunctions propagate_integrator(const BathSpec& spec, double t, double dt) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("propagate_integrator: t must be >= 0");
    if (!(dt > 0.0) || dt > 0.01 / spec.rate_scale()) {
        throw std::invalid_argument("propagate_integrator: dt must satisfy 0 < dt <= 0.01 / rate_scale");
    }
    const auto& det = spec.detunings();
    const auto& cpl = spec.couplings();
    const std::size_t k = spec.modes();
    auto rhs = [&](const std::vector<Complex>& x, std::vector<Complex>& out) {
        const Complex mi{0.0, -1.0};
        Complex acc{0.0, 0.0};
        for (std::size_t j = 0; j < k; ++j) acc += cpl[j] * x[j + 1];
        out[0] = mi * acc;
        for (std::size_t j = 0; j < k; ++j) out[j + 1] = mi * (det[j] * x[j + 1] + cpl[j] * x[0]);
    };

    std::vector<Complex> x(k + 1, Complex{0.0, 0.0});
    x[0] = 1.0;
    const auto steps = static_cast<long>(std::ceil(t / dt - 1e-9));
    if (steps > 0) {
        const double h = t / static_cast<double>(steps);
        std::vector<Complex> k1(k + 1), k2(k + 1), k3(k + 1), k4(k + 1), tmp(k + 1);
        for (long s = 0; s < steps; ++s) {
            rhs(x, k1);
            for (std::size_t i = 0; i <= k; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
            rhs(tmp, k2);
            for (std::size_t i = 0; i <= k; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
            rhs(tmp, k3);
            for (std::size_t i = 0; i <= k; ++i) tmp[i] = x[i] + h * k3[i];
            rhs(tmp, k4);
            for (std::size_t i = 0; i <= k; ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    ResponseFunctions r;
    r.time = t;
    r.g = x[0];
    r.f.assign(x.begin() + 1, x.end());
    r.recurrence_warning = t > 0.5 * spec.recurrence_time();
    return r;
}

// Applies a response to a superposition whose bath starts in the vacuum:
// alpha_i -> alpha_i g, beta_ik -> alpha_i f_k. Weights are unchanged.
inline FieldBathSuperposition evolve(const FieldBathSuperposition& state, const ResponseFunctions& resp) {
    std::vector<Branch> out;
    out.reserve(state.size());
    for (const auto& b : state.branches()) {
        if (!b.bath.empty() && b.bath.size() != resp.f.size()) {
            throw std::invalid_argument("evolve: bath mode count does not match the spec");
        }
        for (const auto& x : b.bath) {
            if (x.amplitude() != Complex{0.0, 0.0}) {
                throw UnsupportedInput("evolve: only vacuum initial bath states are supported");
            }
        }
        Branch nb;
        nb.weight = b.weight;
        const Complex a = b.field.amplitude();
        nb.field = CoherentLabel(a * resp.g);
        nb.bath.reserve(resp.f.size());
        for (const auto& fk : resp.f) nb.bath.emplace_back(a * fk);
        out.push_back(std::move(nb));
    }
    return FieldBathSuperposition(std::move(out), state.normalized());
}

inline FieldBathSuperposition evolve(const FieldBathSuperposition& state, const BathSpec& spec, double t) {
    return evolve(state, propagate(spec, t));
}

namespace detail {
inline void require_two_branches(const FieldBathSuperposition& s, const char* who) {
    if (s.size() != 2) throw std::invalid_argument(std::string(who) + ": expected a two-branch state");
}
}  // namespace detail

// |<field_2|field_1>|
inline double gamma_a(const FieldBathSuperposition& s) {
    detail::require_two_branches(s, "gamma_a");
    return std::abs(overlap(s.branches()[1].field, s.branches()[0].field));
}

// prod_k <bath_2k|bath_1k>
inline Complex gamma_b(const FieldBathSuperposition& s) {
    detail::require_two_branches(s, "gamma_b");
    return overlap(s.branches()[1].bath, s.branches()[0].bath);
}

// sum_k |beta_k(t)|^2 of the first branch.
inline double excitation_sum(const FieldBathSuperposition& s) {
    detail::require_two_branches(s, "excitation_sum");
    double x = 0.0;
    for (const auto& b : s.branches()[0].bath) x += b.norm2();
    return x;
}

}  // namespace cavitycat
