#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace harmosc {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Requested accuracy is finer than what double-precision quadrature or series
// summation can certify.
struct resolution_error : std::runtime_error {
    explicit resolution_error(const std::string& what) : std::runtime_error(what) {}
};

// Kernel evaluation requested inside the excluded neighbourhood of the diagonal.
struct near_diagonal_error : std::domain_error {
    explicit near_diagonal_error(const std::string& what) : std::domain_error(what) {}
};

// Dimension outside the supported desk-scale range of an operation.
struct unsupported_dimension : std::invalid_argument {
    explicit unsupported_dimension(const std::string& what) : std::invalid_argument(what) {}
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument(what);
}

// ---------------------------------------------------------------------------
// Multi-indices

using MultiIndex = std::vector<int>;

inline int mi_order(const MultiIndex& mu) {
    return std::accumulate(mu.begin(), mu.end(), 0);
}

// All multi-indices of length d with |mu| <= K, lexicographic order.
inline std::vector<MultiIndex> multi_indices_upto(int d, int K) {
    require(d >= 1, "multi_indices_upto: dimension must be positive");
    require(K >= 0, "multi_indices_upto: cutoff must be nonnegative");
    std::vector<MultiIndex> out;
    MultiIndex cur(static_cast<std::size_t>(d), 0);
    // counting loop over the graded box; lexicographic by construction
    while (true) {
        if (mi_order(cur) <= K) out.push_back(cur);
        int j = d - 1;
        while (j >= 0) {
            if (++cur[static_cast<std::size_t>(j)] <= K) break;
            cur[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j < 0) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

// All multi-indices of length d with |mu| == m exactly.
inline std::vector<MultiIndex> multi_indices_exact(int d, int m) {
    std::vector<MultiIndex> out;
    for (auto& mu : multi_indices_upto(d, m))
        if (mi_order(mu) == m) out.push_back(mu);
    return out;
}

// ---------------------------------------------------------------------------
// Gamma-function helpers (stable for large arguments via lgamma)

inline double gamma_ratio(double num, double den) {
    // Gamma(num) / Gamma(den), both positive
    return std::exp(std::lgamma(num) - std::lgamma(den));
}

inline double binomial(double n, double k) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// Surface measure of the unit sphere in R^d.
inline double sphere_area(int d) {
    require(d >= 1, "sphere_area: d must be >= 1");
    if (d == 1) return 2.0;  // counting measure on {-1, +1}
    return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
}

inline double sqr(double x) { return x * x; }
inline double norm2(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

}  // namespace harmosc
