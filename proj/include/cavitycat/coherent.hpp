#pragma once

// Exact coherent-state algebra.
//
// States of the cavity field plus its reservoir are kept as finite sums of
// products of coherent states. Nothing here truncates a Fock space: every
// trace, norm and matrix element is reduced to the closed-form overlap
//
//     <a|b> = exp(-|a|^2/2 - |b|^2/2 + conj(a) b).
//
// Reduced densities are stored as coefficient matrices over a list of
// (non-orthogonal) coherent labels, rho = sum_ij M_ij |l_i><l_j|, and their
// spectra come from a congruence with a factorization of the Gram matrix.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "cavitycat/errors.hpp"
#include "cavitycat/phase_op.hpp"

namespace cavitycat {

namespace tol {
inline constexpr double normalized = 1e-12;     // |norm^2 - 1| for a normalized state
inline constexpr double zero_state = 1e-14;     // norm^2 floor for normalize()
inline constexpr double coalesce = 1e-7;        // labels closer than this are merged
inline constexpr double gram_floor = 1e-12;     // Gram eigenvalues below this are dropped
inline constexpr double clamp = 1e-10;          // eigenvalue clamp band
inline constexpr double cancellation = 1e3;     // max norm rounding scale / norm^2 in normalize()
inline constexpr double hermitian = 1e-12;
}  // namespace tol

// Complex amplitude naming a coherent state of one oscillator mode.
class CoherentLabel {
public:
    CoherentLabel() = default;
    CoherentLabel(Complex amplitude) : amplitude_(amplitude) {  // NOLINT: implicit by intent
        if (!std::isfinite(amplitude.real()) || !std::isfinite(amplitude.imag())) {
            throw std::invalid_argument("CoherentLabel: non-finite amplitude");
        }
    }
    CoherentLabel(double re, double im) : CoherentLabel(Complex{re, im}) {}

    Complex amplitude() const noexcept { return amplitude_; }
    double norm2() const noexcept { return std::norm(amplitude_); }

    // exp(i phase a^dag a)|alpha> = |alpha e^{i phase}>
    CoherentLabel rotated(double phase) const { return {amplitude_ * std::polar(1.0, phase)}; }
    CoherentLabel scaled(Complex factor) const { return {amplitude_ * factor}; }

    friend bool operator==(const CoherentLabel&, const CoherentLabel&) = default;

private:
    Complex amplitude_{0.0, 0.0};
};

inline double distance(const CoherentLabel& a, const CoherentLabel& b) {
    return std::abs(a.amplitude() - b.amplitude());
}

inline Complex overlap(const CoherentLabel& a, const CoherentLabel& b) {
    const Complex x = a.amplitude();
    const Complex y = b.amplitude();
    return std::exp(-0.5 * std::norm(x) - 0.5 * std::norm(y) + std::conj(x) * y);
}

// Product of per-mode overlaps prod_k <a_k|b_k>, ascending mode order.
inline Complex overlap(const std::vector<CoherentLabel>& a, const std::vector<CoherentLabel>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("overlap: mode count mismatch");
    // Summing exponents keeps tiny products from underflowing term by term.
    Complex exponent{0.0, 0.0};
    for (std::size_t k = 0; k < a.size(); ++k) {
        const Complex x = a[k].amplitude();
        const Complex y = b[k].amplitude();
        exponent += -0.5 * std::norm(x) - 0.5 * std::norm(y) + std::conj(x) * y;
    }
    return std::exp(exponent);
}

// One term of a field-bath superposition: weight * |field> prod_k |bath_k>.
struct Branch {
    Complex weight{1.0, 0.0};
    CoherentLabel field;
    std::vector<CoherentLabel> bath;
};

class FieldBathSuperposition {
public:
    explicit FieldBathSuperposition(std::vector<Branch> branches, bool normalized = false);

    const std::vector<Branch>& branches() const noexcept { return branches_; }
    std::size_t size() const noexcept { return branches_.size(); }
    std::size_t bath_modes() const noexcept { return branches_.front().bath.size(); }
    bool normalized() const noexcept { return normalized_; }

private:
    std::vector<Branch> branches_;
    bool normalized_ = false;
};

// log<a|b> summed over modes, written as -|x-y|^2/2 + i Im(x* y) so that
// nearly equal labels give an exponent that is small to full relative precision.
inline Complex log_overlap(const CoherentLabel& a, const CoherentLabel& b) {
    const Complex x = a.amplitude();
    const Complex y = b.amplitude();
    return {-0.5 * std::norm(x - y), std::imag(std::conj(x) * y)};
}

// exp(z) - 1 without cancellation for small z.
inline Complex expm1_complex(Complex z) {
    const double s = std::sin(0.5 * z.imag());
    return {std::expm1(z.real()) * std::cos(z.imag()) - 2.0 * s * s, std::exp(z.real()) * std::sin(z.imag())};
}

namespace detail {

// Terms of <psi|psi> = |sum_i w_i|^2 + sum_ij w_i* w_j (<i|j> - 1). Splitting off
// the unit part keeps the norm accurate when near-coalescing branches cancel.
// Returns the norm and a scale for its rounding error.
inline std::pair<double, double> norm_terms(const std::vector<Branch>& branches) {
    Complex total{0.0, 0.0};
    double absolute = 0.0;
    for (const auto& b : branches) {
        total += b.weight;
        absolute += std::abs(b.weight);
    }
    double acc = std::norm(total);
    double magnitude = 2.0 * std::abs(total) * absolute;
    for (const auto& bi : branches) {
        for (const auto& bj : branches) {
            Complex e = log_overlap(bi.field, bj.field);
            for (std::size_t k = 0; k < bi.bath.size(); ++k) e += log_overlap(bi.bath[k], bj.bath[k]);
            const Complex term = std::conj(bi.weight) * bj.weight * expm1_complex(e);
            acc += term.real();
            magnitude += std::abs(term.real());
        }
    }
    return {acc, magnitude};
}

}  // namespace detail

// <psi|psi> with the full overlap matrix.
inline double squared_norm(const std::vector<Branch>& branches) { return detail::norm_terms(branches).first; }

inline double squared_norm(const FieldBathSuperposition& s) { return squared_norm(s.branches()); }

inline FieldBathSuperposition::FieldBathSuperposition(std::vector<Branch> branches, bool normalized)
    : branches_(std::move(branches)), normalized_(normalized) {
    if (branches_.empty()) throw std::invalid_argument("FieldBathSuperposition: no branches");
    const std::size_t k = branches_.front().bath.size();
    for (const auto& b : branches_) {
        if (b.bath.size() != k) {
            throw std::invalid_argument("FieldBathSuperposition: non-uniform bath mode count");
        }
        if (!std::isfinite(b.weight.real()) || !std::isfinite(b.weight.imag())) {
            throw std::invalid_argument("FieldBathSuperposition: non-finite weight");
        }
    }
    if (normalized_ && std::abs(squared_norm(branches_) - 1.0) > tol::normalized) {
        throw ContractViolation("FieldBathSuperposition: flagged normalized but norm^2 != 1");
    }
}

// Folds branches whose field and bath labels all lie within tol::coalesce of
// an earlier branch into that branch. The flag is dropped since the norm is
// unchanged only up to the merge error.
inline FieldBathSuperposition merge_coalescing(const FieldBathSuperposition& s) {
    std::vector<Branch> out;
    for (const auto& b : s.branches()) {
        auto same = [&b](const Branch& o) {
            if (distance(o.field, b.field) >= tol::coalesce) return false;
            for (std::size_t k = 0; k < b.bath.size(); ++k) {
                if (distance(o.bath[k], b.bath[k]) >= tol::coalesce) return false;
            }
            return true;
        };
        auto it = std::find_if(out.begin(), out.end(), same);
        if (it == out.end()) {
            out.push_back(b);
        } else {
            it->weight += b.weight;
        }
    }
    return FieldBathSuperposition(std::move(out));
}

// Rescales to unit norm. Raises ZeroStateError below the norm floor and
// DegenerateSpanError when cancellation between branches leaves fewer than
// about 13 significant digits in the norm.
inline FieldBathSuperposition normalize(const FieldBathSuperposition& s) {
    const auto [n2, magnitude] = detail::norm_terms(s.branches());
    if (!(n2 > tol::zero_state)) {
        throw ZeroStateError("normalize: squared norm " + std::to_string(n2) +
                             " below floor (zero-probability branch)");
    }
    if (magnitude > tol::cancellation * n2) {
        throw DegenerateSpanError("normalize: norm lost to cancellation between near-coalescing branches");
    }
    std::vector<Branch> out = s.branches();
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& b : out) b.weight *= scale;
    return FieldBathSuperposition(std::move(out), true);
}

struct GramMatrix {
    std::vector<CoherentLabel> labels;
    Eigen::MatrixXcd entries;  // S_ij = <l_i|l_j>
};

inline GramMatrix gram(const std::vector<CoherentLabel>& labels) {
    if (labels.empty()) throw std::invalid_argument("gram: empty label list");
    const auto n = static_cast<Eigen::Index>(labels.size());
    Eigen::MatrixXcd s(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        s(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            s(i, j) = overlap(labels[i], labels[j]);
            s(j, i) = std::conj(s(i, j));
        }
    }
    return {labels, std::move(s)};
}

// rho = sum_ij coeff(i,j) |l_i><l_j| over distinct field labels.
class ReducedDensity {
public:
    // Labels closer than tol::coalesce are folded together (rows and columns
    // of the coefficient matrix summed) so the Gram matrix stays regular.
    ReducedDensity(std::vector<CoherentLabel> labels, Eigen::MatrixXcd coeff);

    const std::vector<CoherentLabel>& labels() const noexcept { return labels_; }
    const Eigen::MatrixXcd& coeff() const noexcept { return coeff_; }
    const Eigen::MatrixXcd& overlaps() const noexcept { return gram_.entries; }
    std::size_t dimension() const noexcept { return labels_.size(); }

    // Tr rho = sum_ij M_ij <l_j|l_i> = Tr(M S).
    double trace() const { return (coeff_ * gram_.entries).trace().real(); }

private:
    std::vector<CoherentLabel> labels_;
    Eigen::MatrixXcd coeff_;
    GramMatrix gram_;
};

inline ReducedDensity::ReducedDensity(std::vector<CoherentLabel> labels, Eigen::MatrixXcd coeff) {
    const auto n = static_cast<Eigen::Index>(labels.size());
    if (n == 0) throw std::invalid_argument("ReducedDensity: no labels");
    if (coeff.rows() != n || coeff.cols() != n) {
        throw std::invalid_argument("ReducedDensity: coefficient matrix shape mismatch");
    }
    if (!coeff.allFinite()) throw std::invalid_argument("ReducedDensity: non-finite coefficients");
    const double scale = std::max(1.0, coeff.cwiseAbs().maxCoeff());
    if ((coeff - coeff.adjoint()).cwiseAbs().maxCoeff() > tol::hermitian * scale) {
        throw std::invalid_argument("ReducedDensity: coefficient matrix not Hermitian");
    }

    std::vector<Eigen::Index> target(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        target[i] = static_cast<Eigen::Index>(labels_.size());
        for (std::size_t j = 0; j < labels_.size(); ++j) {
            if (distance(labels_[j], labels[i]) < tol::coalesce) {
                target[i] = static_cast<Eigen::Index>(j);
                break;
            }
        }
        if (target[i] == static_cast<Eigen::Index>(labels_.size())) labels_.push_back(labels[i]);
    }
    const auto m = static_cast<Eigen::Index>(labels_.size());
    coeff_ = Eigen::MatrixXcd::Zero(m, m);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) coeff_(target[i], target[j]) += coeff(i, j);
    coeff_ = 0.5 * (coeff_ + coeff_.adjoint()).eval();
    gram_ = gram(labels_);
}

// Traces the bath out of a normalized superposition:
// M_ij = w_i conj(w_j) prod_k <bath_jk|bath_ik>.
inline ReducedDensity reduce(const FieldBathSuperposition& state) {
    if (!state.normalized()) throw ContractViolation("reduce: state is not normalized");
    const auto& br = state.branches();
    const auto n = static_cast<Eigen::Index>(br.size());
    std::vector<CoherentLabel> labels;
    labels.reserve(br.size());
    for (const auto& b : br) labels.push_back(b.field);
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            m(i, j) = br[i].weight * std::conj(br[j].weight) * overlap(br[j].bath, br[i].bath);
        }
    }
    return ReducedDensity(std::move(labels), std::move(m));
}

struct Spectrum {
    std::vector<double> eigenvalues;  // descending, padded with zeros to the label count
    // Coefficients over `labels` of the orthonormal eigenvectors; one per
    // eigenvalue of the retained (non-degenerate) span, same order.
    std::vector<Eigen::VectorXcd> eigenvectors;
    std::vector<CoherentLabel> labels;
};

namespace detail {

inline double clamp_eigenvalue(double v) {
    if (v < -tol::clamp) {
        throw PositivityViolation("density eigenvalue " + std::to_string(v) + " below -1e-10");
    }
    if (v < 0.0) return 0.0;
    if (v > 1.0 && v <= 1.0 + tol::clamp) return 1.0;
    return v;
}

}  // namespace detail

// Generalized eigenproblem rho|v> = lambda|v> in span{|l_i>}.
//
// With S = V D V^dag and L = V_r D_r^{1/2} built from the eigenpairs with
// D > tol::gram_floor, the Hermitian matrix L^dag M L is the density in an
// orthonormal basis of the retained span. Directions dropped by the floor
// must carry negligible weight: if the retained trace misses Tr(MS) by more
// than 1e-9 the density is not representable and DegenerateSpanError is raised.
inline Spectrum eigenvalues(const ReducedDensity& rho) {
    const Eigen::MatrixXcd& s = rho.overlaps();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gsolve(s);
    if (gsolve.info() != Eigen::Success) throw std::runtime_error("eigenvalues: Gram eigensolve failed");
    const Eigen::VectorXd& d = gsolve.eigenvalues();
    std::vector<Eigen::Index> kept;
    for (Eigen::Index k = 0; k < d.size(); ++k) {
        if (d(k) > tol::gram_floor) kept.push_back(k);
    }
    const auto r = static_cast<Eigen::Index>(kept.size());
    const auto n = s.rows();
    Eigen::MatrixXcd factor(n, r);     // L
    Eigen::MatrixXcd back(n, r);       // V_r D_r^{-1/2}
    for (Eigen::Index c = 0; c < r; ++c) {
        const double dk = d(kept[c]);
        factor.col(c) = gsolve.eigenvectors().col(kept[c]) * std::sqrt(dk);
        back.col(c) = gsolve.eigenvectors().col(kept[c]) / std::sqrt(dk);
    }
    Eigen::MatrixXcd a = factor.adjoint() * rho.coeff() * factor;
    a = 0.5 * (a + a.adjoint()).eval();
    if (std::abs(a.trace().real() - rho.trace()) > 1e-9 * std::max(1.0, std::abs(rho.trace()))) {
        throw DegenerateSpanError("eigenvalues: density weight lies outside the retained span");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> asolve(a);
    if (asolve.info() != Eigen::Success) throw std::runtime_error("eigenvalues: density eigensolve failed");

    Spectrum out;
    out.labels = rho.labels();
    for (Eigen::Index c = r - 1; c >= 0; --c) {  // Eigen sorts ascending
        out.eigenvalues.push_back(detail::clamp_eigenvalue(asolve.eigenvalues()(c)));
        out.eigenvectors.push_back(back * asolve.eigenvectors().col(c));
    }
    out.eigenvalues.resize(static_cast<std::size_t>(n), 0.0);
    return out;
}

// Tr[op rho] = sum_m w_m sum_ij M_ij <l_j|l_i e^{i phi_m}>.
inline Complex expectation(const PhaseOpSum& op, const ReducedDensity& rho) {
    const auto& labels = rho.labels();
    const auto n = static_cast<Eigen::Index>(labels.size());
    Complex acc{0.0, 0.0};
    for (const auto& term : op.terms()) {
        Complex t{0.0, 0.0};
        for (Eigen::Index i = 0; i < n; ++i) {
            const CoherentLabel moved = labels[i].rotated(term.phase);
            for (Eigen::Index j = 0; j < n; ++j) t += rho.coeff()(i, j) * overlap(labels[j], moved);
        }
        acc += term.weight * t;
    }
    return acc;
}

// <v|op|v> for v = sum_i c_i |l_i>.
inline Complex expectation(const PhaseOpSum& op, const std::vector<CoherentLabel>& labels,
                           const Eigen::VectorXcd& coeffs) {
    const auto n = static_cast<Eigen::Index>(labels.size());
    if (coeffs.size() != n) throw std::invalid_argument("expectation: coefficient size mismatch");
    Complex acc{0.0, 0.0};
    for (const auto& term : op.terms()) {
        Complex t{0.0, 0.0};
        for (Eigen::Index j = 0; j < n; ++j) {
            const CoherentLabel moved = labels[j].rotated(term.phase);
            for (Eigen::Index i = 0; i < n; ++i) {
                t += std::conj(coeffs(i)) * coeffs(j) * overlap(labels[i], moved);
            }
        }
        acc += term.weight * t;
    }
    return acc;
}

// Tr rho^2 = Tr (M S)^2.
inline double purity(const ReducedDensity& rho) {
    const Eigen::MatrixXcd ms = rho.coeff() * rho.overlaps();
    return (ms * ms).trace().real();
}

inline double idempotency_defect(const ReducedDensity& rho) { return 1.0 - purity(rho); }

// <a^dag a> = sum_ij M_ij conj(l_j) l_i <l_j|l_i>.
inline double mean_number(const ReducedDensity& rho) {
    const auto& labels = rho.labels();
    const auto n = static_cast<Eigen::Index>(labels.size());
    Complex acc{0.0, 0.0};
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            acc += rho.coeff()(i, j) * std::conj(labels[j].amplitude()) * labels[i].amplitude() *
                   rho.overlaps()(j, i);
    return acc.real();
}

// sum_k <b_k^dag b_k> over all bath modes of a (normalized) superposition.
inline double bath_number(const FieldBathSuperposition& state) {
    Complex acc{0.0, 0.0};
    for (const auto& bi : state.branches()) {
        for (const auto& bj : state.branches()) {
            Complex moments{0.0, 0.0};
            for (std::size_t k = 0; k < bi.bath.size(); ++k) {
                moments += std::conj(bj.bath[k].amplitude()) * bi.bath[k].amplitude();
            }
            acc += std::conj(bj.weight) * bi.weight * overlap(bj.field, bi.field) *
                   overlap(bj.bath, bi.bath) * moments;
        }
    }
    return acc.real();
}

}  // namespace cavitycat
