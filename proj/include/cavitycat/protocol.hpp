#pragma once

// Two-atom correlation protocol.
//
// Each atom crosses Ramsey zone R1, the storage cavity C, and Ramsey zone R2.
// The Ramsey zones act as
//     |e> -> (|e> + |g>)/sqrt(2),   |g> -> (-|e> + |g>)/sqrt(2)
// and the dispersive passage through C as
//     case a:  exp(-i phi a^dag a)|e><e| + |g><g|
//     case b:  exp(i phi (a^dag a + 1))|e><e| + exp(-i phi a^dag a)|g><g|
// with phi = Omega^2 t / delta. Only the projections <x| U_R U_C U_R |e> onto
// the detected atomic state x in {e, g} act on the field afterwards, so the
// Ramsey transform never appears on its own: it is folded into reduced_op().

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

#include "cavitycat/coherent.hpp"
#include "cavitycat/phase_op.hpp"

namespace cavitycat {

enum class ProtocolCase { CaseA, CaseB };
enum class Outcome { E, G };

// Double-sign bookkeeping: the upper sign (E) is -1, the lower sign (G) +1.
constexpr double sign(Outcome o) noexcept { return o == Outcome::E ? -1.0 : 1.0; }

struct DispersiveCoupling {
    double rabi;      // Omega, rad/s
    double detuning;  // delta, rad/s
    double time;      // interaction time, s
    double phase() const { return rabi * rabi * time / detuning; }
};

struct ProtocolParams {
    ProtocolCase protocol_case = ProtocolCase::CaseA;
    CoherentLabel alpha0;
    double phi = 0.0;
    std::optional<DispersiveCoupling> coupling;

    ProtocolParams(ProtocolCase c, CoherentLabel a0, double phase,
                   std::optional<DispersiveCoupling> dispersive = std::nullopt)
        : protocol_case(c), alpha0(a0), phi(phase), coupling(dispersive) {
        if (!std::isfinite(phi)) throw std::invalid_argument("ProtocolParams: phi not finite");
        if (coupling) {
            const double derived = coupling->phase();
            if (!std::isfinite(derived) || std::abs(derived - phi) > 1e-12 * std::max(1.0, std::abs(phi))) {
                throw std::invalid_argument("ProtocolParams: phi != Omega^2 t / delta");
            }
        }
    }

    static ProtocolParams dispersive(ProtocolCase c, CoherentLabel a0, DispersiveCoupling k) {
        if (!(k.detuning != 0.0)) throw std::invalid_argument("ProtocolParams: zero detuning");
        return ProtocolParams(c, a0, k.phase(), k);
    }
};

// U_{e/g} = <e/g| U_R U_C U_R |e>:
//   case a:  (1/2)[exp(-i phi n) -+ 1]
//   case b:  (1/2)[e^{i phi} exp(i phi n) -+ exp(-i phi n)]
inline PhaseOpSum reduced_op(const ProtocolParams& p, Outcome o) {
    const double s = sign(o);
    if (p.protocol_case == ProtocolCase::CaseA) {
        return PhaseOpSum({{Complex{0.5, 0.0}, -p.phi}, {Complex{0.5 * s, 0.0}, 0.0}});
    }
    return PhaseOpSum({{0.5 * std::polar(1.0, p.phi), p.phi}, {Complex{0.5 * s, 0.0}, -p.phi}});
}

// U^dag U in canonical form:
//   case a:  (1/2)(1 -+ cos(phi n))
//   case b:  (1/2)(1 -+ cos((2n + 1) phi))
inline PhaseOpSum measurement_product(const ProtocolParams& p, Outcome o) {
    const PhaseOpSum u = reduced_op(p, o);
    return (u.adjoint() * u).canonical();
}

// U|alpha0> as an unnormalized branch list, bath modes in the vacuum.
inline std::vector<Branch> apply_reduced_op(const ProtocolParams& p, Outcome o, std::size_t bath_modes) {
    std::vector<Branch> out;
    const PhaseOpSum u = reduced_op(p, o).canonical();
    for (const auto& t : u.terms()) {
        out.push_back({t.weight, p.alpha0.rotated(t.phase), std::vector<CoherentLabel>(bath_modes)});
    }
    return out;
}

// ||U_x |alpha0>||^2, the probability of detecting the first atom in x.
inline double preparation_probability(const ProtocolParams& p, Outcome o) {
    const auto branches = apply_reduced_op(p, o, 0);
    return branches.empty() ? 0.0 : squared_norm(branches);
}

// Field state after the first atom is detected in `o`, times |0_b>.
inline FieldBathSuperposition prepare(const ProtocolParams& p, Outcome o, std::size_t bath_modes = 0) {
    auto branches = apply_reduced_op(p, o, bath_modes);
    if (branches.empty()) throw ZeroStateError("prepare: reduced operator vanishes identically");
    return normalize(merge_coalescing(FieldBathSuperposition(std::move(branches))));
}

struct CorrelationRecord {
    double p_ee = 0.0;
    double p_eg = 0.0;
    double p_ge = 0.0;
    double p_gg = 0.0;
    double eta = 0.0;
};

namespace detail {

inline double as_probability(Complex v, const char* what) {
    const double x = v.real();
    if (x < -tol::clamp || x > 1.0 + tol::clamp || std::abs(v.imag()) > 1e-9) {
        throw PositivityViolation(std::string(what) + " outside [0,1]: " + std::to_string(x));
    }
    return std::clamp(x, 0.0, 1.0);
}

}  // namespace detail

// P_xy: first atom detected in y, second in x.
inline CorrelationRecord conditional_probabilities(const ReducedDensity& rho_e, const ReducedDensity& rho_g,
                                                   const ProtocolParams& p) {
    const PhaseOpSum pe = measurement_product(p, Outcome::E);
    const PhaseOpSum pg = measurement_product(p, Outcome::G);
    CorrelationRecord r;
    r.p_ee = detail::as_probability(expectation(pe, rho_e), "P_ee");
    r.p_eg = detail::as_probability(expectation(pg, rho_e), "P_eg");
    r.p_ge = detail::as_probability(expectation(pe, rho_g), "P_ge");
    r.p_gg = detail::as_probability(expectation(pg, rho_g), "P_gg");
    r.eta = r.p_ee - r.p_ge;
    return r;
}

struct EigenPair {
    double plus = 0.0;
    double minus = 0.0;
};

// Closed-form case-a (phi = pi) eigenvalues with s = sign(outcome):
//   lambda_+- = (1 +- Gamma_a(t)) (1 +- s Gamma_b(t)) / (2 (1 + s Gamma_a(0)))
// "+" pairs with the even combination |alpha(t)> + |-alpha(t)>.
inline EigenPair eigenvalues_case_a(double gamma_a_t, double gamma_b_t, double gamma_a_0, Outcome o) {
    auto in_unit = [](double x) { return x >= -1e-15 && x <= 1.0 + 1e-15; };
    if (!in_unit(gamma_a_t) || !in_unit(gamma_b_t) || !in_unit(gamma_a_0)) {
        throw std::invalid_argument("eigenvalues_case_a: overlaps must lie in [0,1]");
    }
    const double s = sign(o);
    const double denom = 2.0 * (1.0 + s * gamma_a_0);
    if (!(denom > 1e-14)) throw ZeroStateError("eigenvalues_case_a: degenerate preparation");
    return {(1.0 + gamma_a_t) * (1.0 + s * gamma_b_t) / denom,
            (1.0 - gamma_a_t) * (1.0 - s * gamma_b_t) / denom};
}

inline double eta_spectral_case_a(double lam_e_minus, double lam_g_minus) { return lam_e_minus - lam_g_minus; }

struct SmallOverlapCaseB {
    double eta_approx;
    double gamma_b_mag;
    double theta;
};

// Case-b small-overlap limit for X = sum_k |beta_k(t)|^2:
//   |Gamma_b| = exp(-2 X sin^2 phi),  theta = X sin 2 phi,
//   eta ~ (1/2) cos(theta) |Gamma_b|.
// Valid while alpha(t)e^{i phi}, alpha(t)e^{-i phi} and alpha(t)e^{3 i phi}
// are pairwise nearly orthogonal (the last fails at phi = pi/2).
inline SmallOverlapCaseB small_overlap_case_b(double excitation_sum, double phi) {
    if (!(excitation_sum >= 0.0)) throw std::invalid_argument("small_overlap_case_b: negative excitation sum");
    const double sp = std::sin(phi);
    const double mag = std::exp(-2.0 * excitation_sum * sp * sp);
    const double theta = excitation_sum * std::sin(2.0 * phi);
    return {0.5 * std::cos(theta) * mag, mag, theta};
}

// Largest overlap magnitude among the labels the small-overlap limit neglects.
inline double small_overlap_measure(Complex alpha_t, double phi) {
    const CoherentLabel a(alpha_t);
    const CoherentLabel up = a.rotated(phi), down = a.rotated(-phi), far = a.rotated(3.0 * phi);
    return std::max({std::abs(overlap(up, down)), std::abs(overlap(up, far)), std::abs(overlap(down, far))});
}

struct LabelledSpectrum {
    EigenPair pair;
    Spectrum spectrum;
    double purity = 1.0;
};

// Eigenvalues of rho labelled by detection: "plus" is the eigenvector less
// likely to give a second E click, "minus" the more likely one. For case a at
// phi = pi this is the parity labelling of eigenvalues_case_a().
inline LabelledSpectrum labelled_eigenvalues(const ReducedDensity& rho, const ProtocolParams& p) {
    LabelledSpectrum out;
    out.spectrum = eigenvalues(rho);
    const PhaseOpSum pe = measurement_product(p, Outcome::E);
    const auto& vecs = out.spectrum.eigenvectors;
    const auto& vals = out.spectrum.eigenvalues;
    if (vecs.size() >= 2) {
        const double p0 = expectation(pe, out.spectrum.labels, vecs[0]).real();
        const double p1 = expectation(pe, out.spectrum.labels, vecs[1]).real();
        out.pair = p0 <= p1 ? EigenPair{vals[0], vals[1]} : EigenPair{vals[1], vals[0]};
    } else if (vecs.size() == 1) {
        const double p0 = expectation(pe, out.spectrum.labels, vecs[0]).real();
        out.pair = p0 < 0.5 ? EigenPair{vals[0], 0.0} : EigenPair{0.0, vals[0]};
    }
    double sq = 0.0;
    for (double v : vals) sq += v * v;
    out.purity = sq;
    return out;
}

}  // namespace cavitycat
