#pragma once

// Brute-force truncated Fock-space reference.
//
// Everything here works on explicit number-state amplitudes so that it shares
// no code path with the coherent-label engine beyond PhaseOpSum::value_at.
// It is deliberately plain: no caching, fixed-step integrators, dense
// eigensolves.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "cavitycat/bath.hpp"
#include "cavitycat/coherent.hpp"
#include "cavitycat/errors.hpp"
#include "cavitycat/phase_op.hpp"

namespace cavitycat::fock {

struct FockVector {
    int n_max = 0;
    std::vector<Complex> amplitudes;  // n_max + 1 entries

    double norm2() const {
        double s = 0.0;
        for (const auto& a : amplitudes) s += std::norm(a);
        return s;
    }
};

struct FockDensity {
    int n_max = 0;
    Eigen::MatrixXcd matrix;

    Complex trace() const { return matrix.trace(); }
};

// Smallest n_max satisfying the tail rule n_max >= |a|^2 + 8|a| + 10.
inline int required_n_max(double abs_alpha) {
    return static_cast<int>(std::ceil(abs_alpha * abs_alpha + 8.0 * abs_alpha + 10.0));
}

inline FockVector coherent_to_fock(const CoherentLabel& label, int n_max) {
    const double r = std::abs(label.amplitude());
    if (n_max < required_n_max(r)) {
        throw TruncationError("coherent_to_fock: n_max " + std::to_string(n_max) + " below tail rule " +
                              std::to_string(required_n_max(r)));
    }
    FockVector v{n_max, std::vector<Complex>(static_cast<std::size_t>(n_max) + 1)};
    v.amplitudes[0] = std::exp(-0.5 * label.norm2());
    for (int n = 1; n <= n_max; ++n) {
        v.amplitudes[n] = v.amplitudes[n - 1] * label.amplitude() / std::sqrt(static_cast<double>(n));
    }
    if (std::norm(v.amplitudes[n_max]) >= 1e-10 || std::abs(v.norm2() - 1.0) > 1e-10) {
        throw TruncationError("coherent_to_fock: truncation leaks probability");
    }
    return v;
}

inline Complex inner(const FockVector& a, const FockVector& b) {
    if (a.n_max != b.n_max) throw std::invalid_argument("inner: truncation mismatch");
    Complex s{0.0, 0.0};
    for (std::size_t n = 0; n < a.amplitudes.size(); ++n) s += std::conj(a.amplitudes[n]) * b.amplitudes[n];
    return s;
}

// op|v>, op diagonal in the number basis.
inline FockVector apply(const PhaseOpSum& op, const FockVector& v) {
    FockVector out = v;
    for (int n = 0; n <= v.n_max; ++n) out.amplitudes[n] *= op.value_at(n);
    return out;
}

inline FockVector normalized(const FockVector& v) {
    const double n2 = v.norm2();
    if (!(n2 > 1e-14)) throw ZeroStateError("fock::normalized: zero vector");
    FockVector out = v;
    for (auto& a : out.amplitudes) a /= std::sqrt(n2);
    return out;
}

inline FockDensity projector(const FockVector& v) {
    const auto d = static_cast<Eigen::Index>(v.amplitudes.size());
    Eigen::VectorXcd x(d);
    for (Eigen::Index n = 0; n < d; ++n) x(n) = v.amplitudes[n];
    return {v.n_max, x * x.adjoint()};
}

// <psi|rho|psi>
inline double fidelity(const FockDensity& rho, const FockVector& psi) {
    const auto d = rho.matrix.rows();
    Eigen::VectorXcd x(d);
    for (Eigen::Index n = 0; n < d; ++n) x(n) = psi.amplitudes[n];
    return (x.adjoint() * rho.matrix * x)(0, 0).real();
}

namespace detail {

inline Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho, double gamma) {
    const auto d = rho.rows();
    Eigen::MatrixXcd out(d, d);
    for (Eigen::Index m = 0; m < d; ++m) {
        for (Eigen::Index n = 0; n < d; ++n) {
            Complex jump{0.0, 0.0};
            if (m + 1 < d && n + 1 < d) {
                jump = std::sqrt(static_cast<double>((m + 1) * (n + 1))) * rho(m + 1, n + 1);
            }
            out(m, n) = gamma * (jump - 0.5 * static_cast<double>(m + n) * rho(m, n));
        }
    }
    return out;
}

}  // namespace detail

// RK4 integration of d(rho)/dt = gamma (a rho a^dag - {a^dag a, rho}/2).
inline FockDensity lindblad_evolve(const FockDensity& rho, double gamma, double t, double dt) {
    if (!(gamma > 0.0)) throw std::invalid_argument("lindblad_evolve: gamma must be > 0");
    if (!(t >= 0.0)) throw std::invalid_argument("lindblad_evolve: t must be >= 0");
    if (!(dt > 0.0) || dt > 1e-3 / gamma / (rho.n_max + 1)) {
        throw std::invalid_argument("lindblad_evolve: dt violates dt <= 1e-3 / gamma / (n_max + 1)");
    }
    const auto steps = static_cast<long>(std::ceil(t / dt - 1e-9));
    Eigen::MatrixXcd x = rho.matrix;
    if (steps > 0) {
        const double h = t / static_cast<double>(steps);
        for (long s = 0; s < steps; ++s) {
            const Eigen::MatrixXcd k1 = detail::lindblad_rhs(x, gamma);
            const Eigen::MatrixXcd k2 = detail::lindblad_rhs(x + 0.5 * h * k1, gamma);
            const Eigen::MatrixXcd k3 = detail::lindblad_rhs(x + 0.5 * h * k2, gamma);
            const Eigen::MatrixXcd k4 = detail::lindblad_rhs(x + h * k3, gamma);
            x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }
    return {rho.n_max, x};
}

// Joint field + bath amplitudes, field index slowest:
// flat = i_field * (n+1)^K + i_1 * (n+1)^(K-1) + ... + i_K.
struct MultiModeState {
    int n_max = 0;
    int bath_modes = 0;
    std::vector<Complex> amplitudes;

    std::size_t stride() const { return static_cast<std::size_t>(n_max) + 1; }

    double norm2() const {
        double s = 0.0;
        for (const auto& a : amplitudes) s += std::norm(a);
        return s;
    }
};

namespace detail {

inline std::size_t mode_stride(const MultiModeState& shape, int mode) {
    std::size_t st = 1;
    for (int m = mode + 1; m <= shape.bath_modes; ++m) st *= shape.stride();
    return st;
}

// y = H x with H = sum_k Delta_k b_k^dag b_k + gamma_k (a^dag b_k + b_k^dag a),
// each mode truncated at n_max.
inline void apply_hamiltonian(const BathSpec& spec, const MultiModeState& shape, const std::vector<Complex>& x,
                              std::vector<Complex>& y) {
    const std::size_t base = shape.stride();
    const int top = shape.n_max;
    const std::size_t field_stride = mode_stride(shape, 0);
    std::vector<std::size_t> strides(static_cast<std::size_t>(shape.bath_modes));
    for (int k = 0; k < shape.bath_modes; ++k) strides[k] = mode_stride(shape, k + 1);
    std::fill(y.begin(), y.end(), Complex{0.0, 0.0});
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == Complex{0.0, 0.0}) continue;
        const int nf = static_cast<int>(i / field_stride);
        for (int k = 0; k < shape.bath_modes; ++k) {
            const int nk = static_cast<int>((i / strides[k]) % base);
            y[i] += spec.detunings()[k] * static_cast<double>(nk) * x[i];
            const double g = spec.couplings()[k];
            // a^dag b_k: (n_f, n_k) -> (n_f + 1, n_k - 1)
            if (nk > 0 && nf < top) {
                y[i + field_stride - strides[k]] += g * std::sqrt(static_cast<double>(nf + 1) * nk) * x[i];
            }
            // b_k^dag a: (n_f, n_k) -> (n_f - 1, n_k + 1)
            if (nf > 0 && nk < top) {
                y[i - field_stride + strides[k]] += g * std::sqrt(static_cast<double>(nf) * (nk + 1)) * x[i];
            }
        }
    }
}

}  // namespace detail

// Direct Schrodinger evolution of field (x) vacuum bath under the bilinear
// coupling, via fixed-step Taylor expansion of exp(-i H h).
inline MultiModeState hamiltonian_evolve(const FockVector& field, const BathSpec& spec, double t, int n_max) {
    if (spec.modes() > 2) throw std::invalid_argument("hamiltonian_evolve: at most two bath modes");
    if (!(t >= 0.0)) throw std::invalid_argument("hamiltonian_evolve: t must be >= 0");
    if (field.n_max > n_max) throw std::invalid_argument("hamiltonian_evolve: field truncation exceeds n_max");
    const int bath = static_cast<int>(spec.modes());
    const double dim = std::pow(static_cast<double>(n_max + 1), bath + 1);
    if (dim > 1e6) throw CapacityError("hamiltonian_evolve: dimension exceeds 1e6");

    MultiModeState psi{n_max, bath, std::vector<Complex>(static_cast<std::size_t>(dim))};
    const std::size_t field_stride = static_cast<std::size_t>(std::pow(n_max + 1, bath));
    for (int n = 0; n <= field.n_max; ++n) psi.amplitudes[n * field_stride] = field.amplitudes[n];

    double bound = 0.0;
    for (int k = 0; k < bath; ++k) {
        bound += std::abs(spec.detunings()[k]) * n_max + 2.0 * spec.couplings()[k] * (n_max + 1);
    }
    const auto steps = bound > 0.0 ? static_cast<long>(std::ceil(t * bound / 0.5)) : 0L;
    if (steps == 0) return psi;
    const double h = t / static_cast<double>(steps);

    std::vector<Complex> term(psi.amplitudes.size()), next(psi.amplitudes.size());
    for (long s = 0; s < steps; ++s) {
        term = psi.amplitudes;
        for (int j = 1; j <= 40; ++j) {
            detail::apply_hamiltonian(spec, psi, term, next);
            double tn = 0.0;
            const Complex factor = Complex{0.0, -h} / static_cast<double>(j);
            for (std::size_t i = 0; i < next.size(); ++i) {
                term[i] = factor * next[i];
                psi.amplitudes[i] += term[i];
                tn += std::norm(term[i]);
            }
            if (tn < 1e-34) break;
        }
    }
    if (std::abs(psi.norm2() - field.norm2()) > 1e-9) {
        throw std::runtime_error("hamiltonian_evolve: norm drift above 1e-9");
    }
    return psi;
}

// Partial trace over all bath modes.
inline FockDensity reduce_field(const MultiModeState& psi) {
    const std::size_t base = psi.stride();
    const std::size_t rest = psi.amplitudes.size() / base;
    const auto d = static_cast<Eigen::Index>(base);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index m = 0; m < d; ++m)
        for (Eigen::Index n = 0; n < d; ++n) {
            Complex s{0.0, 0.0};
            for (std::size_t b = 0; b < rest; ++b) {
                s += psi.amplitudes[m * rest + b] * std::conj(psi.amplitudes[n * rest + b]);
            }
            rho(m, n) = s;
        }
    return {psi.n_max, rho};
}

// Total number of quanta <a^dag a + sum_k b_k^dag b_k>.
inline double total_number(const MultiModeState& psi) {
    double s = 0.0;
    for (std::size_t i = 0; i < psi.amplitudes.size(); ++i) {
        int q = 0;
        for (std::size_t f = i; f > 0; f /= psi.stride()) q += static_cast<int>(f % psi.stride());
        s += q * std::norm(psi.amplitudes[i]);
    }
    return s;
}

// Tr[op rho] for an operator diagonal in the number basis.
inline Complex fock_measure(const PhaseOpSum& op, const FockDensity& rho) {
    Complex s{0.0, 0.0};
    for (int n = 0; n <= rho.n_max; ++n) s += op.value_at(n) * rho.matrix(n, n);
    return s;
}

struct FockSpectrum {
    std::vector<double> eigenvalues;          // descending
    std::vector<Eigen::VectorXcd> eigenvectors;
};

inline FockSpectrum fock_spectrum(const FockDensity& rho) {
    const Eigen::MatrixXcd h = 0.5 * (rho.matrix + rho.matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solve(h);
    if (solve.info() != Eigen::Success) throw std::runtime_error("fock_spectrum: eigensolve failed");
    FockSpectrum out;
    for (Eigen::Index k = h.rows() - 1; k >= 0; --k) {
        out.eigenvalues.push_back(solve.eigenvalues()(k));
        out.eigenvectors.push_back(solve.eigenvectors().col(k));
    }
    return out;
}

inline std::vector<double> fock_eigenvalues(const FockDensity& rho) { return fock_spectrum(rho).eigenvalues; }

inline double fock_purity(const FockDensity& rho) { return (rho.matrix * rho.matrix).trace().real(); }

// <v|op|v> for a number-basis vector.
inline double fock_vector_measure(const PhaseOpSum& op, const Eigen::VectorXcd& v) {
    Complex s{0.0, 0.0};
    for (Eigen::Index n = 0; n < v.size(); ++n) s += op.value_at(n) * std::norm(v(n));
    return s.real();
}

inline double mean_number(const FockDensity& rho) {
    double s = 0.0;
    for (int n = 0; n <= rho.n_max; ++n) s += n * rho.matrix(n, n).real();
    return s;
}

}  // namespace cavitycat::fock
