#pragma once

// Test-only number-basis expansions, independent of the library's paths.

#include <cmath>
#include <complex>
#include <vector>

namespace series {

using C = std::complex<double>;

// c_n = exp(-|a|^2/2) a^n / sqrt(n!) computed through logs.
inline std::vector<C> coherent(C a, int n_max) {
    std::vector<C> c(static_cast<std::size_t>(n_max) + 1);
    const double r = std::abs(a);
    const double th = std::arg(a);
    for (int n = 0; n <= n_max; ++n) {
        const double logmag = -0.5 * r * r + (r > 0 ? n * std::log(r) : (n == 0 ? 0.0 : -1e300)) -
                              0.5 * std::lgamma(n + 1.0);
        c[n] = std::polar(std::exp(logmag), n * th);
    }
    return c;
}

inline C inner(const std::vector<C>& a, const std::vector<C>& b) {
    C s{0.0, 0.0};
    for (std::size_t n = 0; n < a.size(); ++n) s += std::conj(a[n]) * b[n];
    return s;
}

inline C overlap(C a, C b, int n_max = 120) { return inner(coherent(a, n_max), coherent(b, n_max)); }

}  // namespace series
