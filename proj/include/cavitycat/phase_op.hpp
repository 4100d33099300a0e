#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace cavitycat {

using Complex = std::complex<double>;

// One term w * exp(i * phase * a^dag a).
struct PhaseTerm {
    Complex weight;
    double phase;
};

// Finite sum of number-phase exponentials, sum_m w_m exp(i phi_m a^dag a).
//
// Every operator of the measurement protocol (dispersive couplings, reduced
// detection operators and their products U^dag U) lives in this family. The
// family is closed under adjoint, sums and products, and each term acts on a
// coherent state by rotating its label: exp(i phi a^dag a)|alpha> = |alpha e^{i phi}>.
// Phases are only meaningful modulo 2 pi since a^dag a has integer spectrum.
class PhaseOpSum {
public:
    PhaseOpSum() = default;
    explicit PhaseOpSum(std::vector<PhaseTerm> terms) : terms_(std::move(terms)) {
        for (const auto& t : terms_) {
            if (!std::isfinite(t.weight.real()) || !std::isfinite(t.weight.imag()) ||
                !std::isfinite(t.phase)) {
                throw std::invalid_argument("PhaseOpSum: non-finite term");
            }
        }
    }

    static PhaseOpSum identity() { return PhaseOpSum({{Complex{1.0, 0.0}, 0.0}}); }
    static PhaseOpSum rotation(double phase, Complex weight = {1.0, 0.0}) {
        return PhaseOpSum({{weight, phase}});
    }

    const std::vector<PhaseTerm>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }

    PhaseOpSum adjoint() const {
        std::vector<PhaseTerm> out;
        out.reserve(terms_.size());
        for (const auto& t : terms_) out.push_back({std::conj(t.weight), -t.phase});
        return PhaseOpSum(std::move(out));
    }

    // Diagonal matrix element <n|op|n>.
    Complex value_at(long n) const {
        Complex v{0.0, 0.0};
        for (const auto& t : terms_) {
            v += t.weight * std::polar(1.0, t.phase * static_cast<double>(n));
        }
        return v;
    }

    // Merge terms whose phases agree modulo 2 pi and drop terms with
    // |weight| <= drop_tol. First-appearance order is kept.
    PhaseOpSum canonical(double drop_tol = 1e-14) const {
        std::vector<PhaseTerm> out;
        for (const auto& t : terms_) {
            const double p = wrap_phase(t.phase);
            bool merged = false;
            for (auto& o : out) {
                if (same_phase(o.phase, p)) {
                    o.weight += t.weight;
                    merged = true;
                    break;
                }
            }
            if (!merged) out.push_back({t.weight, p});
        }
        std::erase_if(out, [drop_tol](const PhaseTerm& t) { return std::abs(t.weight) <= drop_tol; });
        return PhaseOpSum(std::move(out));
    }

    // Maps phi into (-pi, pi].
    static double wrap_phase(double phi) {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        double r = std::remainder(phi, two_pi);
        if (r <= -std::numbers::pi) r += two_pi;
        return r;
    }

    static bool same_phase(double a, double b, double tol = 1e-12) {
        return std::abs(wrap_phase(a - b)) <= tol;
    }

    friend PhaseOpSum operator+(const PhaseOpSum& a, const PhaseOpSum& b) {
        std::vector<PhaseTerm> out = a.terms_;
        out.insert(out.end(), b.terms_.begin(), b.terms_.end());
        return PhaseOpSum(std::move(out));
    }
    friend PhaseOpSum operator-(const PhaseOpSum& a, const PhaseOpSum& b) {
        return a + (-1.0) * b;
    }
    friend PhaseOpSum operator*(Complex s, const PhaseOpSum& a) {
        std::vector<PhaseTerm> out = a.terms_;
        for (auto& t : out) t.weight *= s;
        return PhaseOpSum(std::move(out));
    }
    friend PhaseOpSum operator*(double s, const PhaseOpSum& a) { return Complex{s, 0.0} * a; }
    friend PhaseOpSum operator*(const PhaseOpSum& a, const PhaseOpSum& b) {
        std::vector<PhaseTerm> out;
        out.reserve(a.size() * b.size());
        for (const auto& x : a.terms_)
            for (const auto& y : b.terms_) out.push_back({x.weight * y.weight, x.phase + y.phase});
        return PhaseOpSum(std::move(out));
    }

private:
    std::vector<PhaseTerm> terms_;
};

// Operator equality: the canonical form of the difference has no terms.
inline bool approx_equal(const PhaseOpSum& a, const PhaseOpSum& b, double tol = 1e-12) {
    return (a - b).canonical(tol).empty();
}

}  // namespace cavitycat
