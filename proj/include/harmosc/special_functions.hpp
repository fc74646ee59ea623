#pragma once

// Scalar special functions: L^2-normalized Hermite functions, Laguerre
// polynomials and the normalized Laguerre function families on the half-line,
// modified Bessel I with two evaluation routes, and Gegenbauer polynomials
// normalized at 1. Everything is elementary recurrences plus lgamma scaling.

#include "common.hpp"

#include <limits>

namespace harmosc {

// ---------------------------------------------------------------------------
// Hermite functions h_k: orthonormal on the line, h_k'' = (x^2 - 2k - 1) h_k.

// h_0..h_K at x in one recurrence sweep.
inline std::vector<double> hermite_fn_all(int K, double x) {
    require(K >= 0, "hermite_fn_all: order must be nonnegative");
    std::vector<double> h(static_cast<std::size_t>(K) + 1);
    h[0] = std::pow(pi, -0.25) * std::exp(-0.5 * x * x);
    if (K >= 1) h[1] = std::sqrt(2.0) * x * h[0];
    for (int k = 1; k < K; ++k)
        h[static_cast<std::size_t>(k) + 1] =
            x * std::sqrt(2.0 / (k + 1.0)) * h[static_cast<std::size_t>(k)] -
            std::sqrt(k / (k + 1.0)) * h[static_cast<std::size_t>(k) - 1];
    return h;
}

inline double hermite_fn(int k, double x) { return hermite_fn_all(k, x).back(); }

// h_k' = sqrt(2k) h_{k-1} - x h_k  (from the lowering relation)
inline double hermite_fn_prime(int k, double x) {
    auto h = hermite_fn_all(k, x);
    const double lower = (k >= 1) ? std::sqrt(2.0 * k) * h[static_cast<std::size_t>(k) - 1] : 0.0;
    return lower - x * h.back();
}

// Product eigenfunction of the d-dimensional oscillator, eigenvalue 2|mu| + d.
inline double hermite_fn_multi(const MultiIndex& mu, const std::vector<double>& x) {
    require(mu.size() == x.size(), "hermite_fn_multi: dimension mismatch");
    double v = 1.0;
    for (std::size_t j = 0; j < mu.size(); ++j) {
        require(mu[j] >= 0, "hermite_fn_multi: negative index");
        v *= hermite_fn(mu[j], x[j]);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Laguerre polynomials L_k^alpha.

inline std::vector<double> laguerre_poly_all(int K, double alpha, double x) {
    require(K >= 0, "laguerre_poly_all: order must be nonnegative");
    std::vector<double> L(static_cast<std::size_t>(K) + 1);
    L[0] = 1.0;
    if (K >= 1) L[1] = 1.0 + alpha - x;
    for (int k = 2; k <= K; ++k)
        L[static_cast<std::size_t>(k)] = ((2.0 * k - 1.0 + alpha - x) * L[static_cast<std::size_t>(k) - 1] -
                                          (k - 1.0 + alpha) * L[static_cast<std::size_t>(k) - 2]) /
                                         k;
    return L;
}

inline double laguerre_poly(int k, double alpha, double x) { return laguerre_poly_all(k, alpha, x).back(); }

// d/dx L_k^alpha = -L_{k-1}^{alpha+1}
inline double laguerre_poly_deriv(int k, double alpha, double x) {
    return (k >= 1) ? -laguerre_poly(k - 1, alpha + 1.0, x) : 0.0;
}

// ---------------------------------------------------------------------------
// Laguerre function family psi_k^alpha: orthonormal in L^2(R_+, r^{2 alpha + 1} dr),
// eigenfunctions of -d^2/dr^2 + r^2 - ((2 alpha + 1)/r) d/dr with eigenvalue 4k + 2 alpha + 2.

inline double psi_norm(int k, double alpha) {
    return std::exp(0.5 * (std::log(2.0) + std::lgamma(k + 1.0) - std::lgamma(k + alpha + 1.0)));
}

inline double psi(int k, double alpha, double r) {
    require(k >= 0, "psi: order must be nonnegative");
    require(alpha >= -0.5, "psi: alpha must be >= -1/2");
    return psi_norm(k, alpha) * laguerre_poly(k, alpha, r * r) * std::exp(-0.5 * r * r);
}

inline double psi_prime(int k, double alpha, double r) {
    const double x = r * r;
    const double L = laguerre_poly(k, alpha, x);
    const double Lp = laguerre_poly_deriv(k, alpha, x);
    return psi_norm(k, alpha) * std::exp(-0.5 * x) * r * (2.0 * Lp - L);
}

// ---------------------------------------------------------------------------
// Scaled family phi_k^delta: orthonormal in L^2(R_+, r^{2 delta + 1} dr) with the
// quarter-Gaussian envelope; phi_k^delta(r) = 2^{-(delta+1)/2} psi_k^delta(r / sqrt 2).

inline double phi_small_norm(int k, double delta) {
    return std::exp(0.5 * (std::lgamma(k + 1.0) - delta * std::log(2.0) - std::lgamma(k + delta + 1.0)));
}

inline double phi_small(int k, double delta, double r) {
    require(k >= 0, "phi_small: order must be nonnegative");
    require(delta >= -0.5, "phi_small: delta must be >= -1/2");
    return phi_small_norm(k, delta) * laguerre_poly(k, delta, 0.5 * r * r) * std::exp(-0.25 * r * r);
}

inline double phi_small_prime(int k, double delta, double r) {
    const double x = 0.5 * r * r;
    const double L = laguerre_poly(k, delta, x);
    const double Lp = laguerre_poly_deriv(k, delta, x);
    return phi_small_norm(k, delta) * std::exp(-0.5 * x) * (Lp * r - 0.5 * r * L);
}

// Radial profile of the k-th special-Hermite projection kernel on C^d:
// L_k^{d-1}(rho^2/2) exp(-rho^2/4), value binom(k+d-1, k) at rho = 0.
inline double phi_fock(int k, int d, double rho) {
    require(k >= 0 && d >= 1, "phi_fock: bad arguments");
    return laguerre_poly(k, d - 1.0, 0.5 * rho * rho) * std::exp(-0.25 * rho * rho);
}

// ---------------------------------------------------------------------------
// Modified Bessel function of the first kind, order alpha >= -1/2.
//
// Two routes: an all-positive power series (no cancellation, valid for any x
// but used below the split), and the large-argument expansion above x = 20.
// The asymptotic series is truncated at its smallest term; if the order is too
// large for it to reach machine precision at the given x it falls back to the
// series route, which stays accurate there.

namespace detail {

inline double bessel_i_series_scaled(double alpha, double x) {
    // e^{-x} sum_k (x/2)^{2k+alpha} / (k! Gamma(k+alpha+1))
    const double lx = std::log(0.5 * x);
    double term = std::exp(alpha * lx - std::lgamma(alpha + 1.0) - x);
    double sum = term;
    const double q = 0.25 * x * x;
    for (int k = 0; k < 600; ++k) {
        term *= q / ((k + 1.0) * (k + alpha + 1.0));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

// Returns NaN when the expansion cannot reach ~1e-15 relative accuracy.
inline double bessel_i_asymptotic_scaled(double alpha, double x) {
    const double mu = 4.0 * alpha * alpha;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 40; ++k) {
        const double next = term * -(mu - sqr(2.0 * k - 1.0)) / (8.0 * k * x);
        if (std::abs(next) >= std::abs(term)) {
            if (std::abs(term) > 1e-15 * std::abs(sum)) return std::numeric_limits<double>::quiet_NaN();
            break;
        }
        term = next;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * pi * x);
}

}  // namespace detail

inline double bessel_i_scaled(double alpha, double x) {
    require(alpha >= -0.5, "bessel_i_scaled: order must be >= -1/2");
    require(x >= 0.0, "bessel_i_scaled: argument must be nonnegative");
    if (x == 0.0) {
        if (alpha == 0.0) return 1.0;
        return (alpha > 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
    }
    if (x > 20.0) {
        const double a = detail::bessel_i_asymptotic_scaled(alpha, x);
        if (!std::isnan(a)) return a;
    }
    return detail::bessel_i_series_scaled(alpha, x);
}

inline double bessel_i(double alpha, double x) {
    require(x >= 0.0, "bessel_i: argument must be nonnegative");
    if (x > 700.0) throw std::overflow_error("bessel_i: unscaled value overflows; use bessel_i_scaled");
    return bessel_i_scaled(alpha, x) * std::exp(x);
}

// ---------------------------------------------------------------------------
// Gegenbauer (ultraspherical) polynomial of the ambient dimension d, normalized
// so that P_m(1) = 1; realized through the Jacobi((d-3)/2, (d-3)/2) recurrence,
// which stays regular down to d = 2 (Chebyshev case).

inline std::vector<double> gegenbauer_norm_all(int M, int d, double u) {
    require(M >= 0, "gegenbauer_norm_all: order must be nonnegative");
    if (d < 2) throw unsupported_dimension("gegenbauer_norm_all: need ambient dimension >= 2");
    const double a = 0.5 * (d - 3);
    std::vector<double> P(static_cast<std::size_t>(M) + 1);  // unnormalized Jacobi values
    P[0] = 1.0;
    if (M >= 1) P[1] = (a + 1.0) * u;
    for (int m = 2; m <= M; ++m) {
        const double s = 2.0 * m + 2.0 * a;
        const double c1 = (s - 1.0) * s * (s - 2.0) * u;
        const double c2 = 2.0 * (m + a - 1.0) * (m + a - 1.0) * s;
        P[static_cast<std::size_t>(m)] =
            (c1 * P[static_cast<std::size_t>(m) - 1] - c2 * P[static_cast<std::size_t>(m) - 2]) /
            (2.0 * m * (m + 2.0 * a) * (s - 2.0));
    }
    for (int m = 0; m <= M; ++m) {
        const double at_one = std::exp(std::lgamma(m + a + 1.0) - std::lgamma(a + 1.0) - std::lgamma(m + 1.0));
        P[static_cast<std::size_t>(m)] /= at_one;
    }
    return P;
}

inline double gegenbauer_norm(int m, int d, double u) { return gegenbauer_norm_all(m, d, u).back(); }

}  // namespace harmosc
