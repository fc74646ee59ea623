#pragma once

// Heat kernels for the three operator families and the singular integral
// kernels obtained from them by subordination.
//
// Every kernel has two independent routes: a closed form evaluated directly,
// and a truncated eigenfunction series whose truncation order is chosen so the
// dropped tail is below 1e-14 relative to the leading term. The series routes
// are the normative ones; closed forms are the fast ones. Tests hold the two
// against each other on grids.
//
// Conventions:
//   - oscillator kernel K_t(x,y) on R^d integrates against plain dy,
//   - half-line kernels of type alpha integrate against s^{2 alpha + 1} ds,
//   - the twisted kernel p_t is a function of the difference variable on C^d
//     and acts by twisted convolution.

#include <vector>

#include "calibrated_constants.hpp"
#include "common.hpp"
#include "quadrature.hpp"
#include "special_functions.hpp"

namespace harmosc {

struct SubordinationOptions {
    int n_nodes = 200;      // nodes of the half-line time rule
    double tail_tol = 1e-12;
};

namespace detail {

// Truncation order for sum_k e^{-rate*k*t} * (bounded modes): the first index
// whose weight drops below 1e-14, plus margin for polynomial mode growth.
inline int series_order(double rate, double t) {
    require(t > 0.0, "series_order: time must be positive");
    const double k = 32.3 / (rate * t);
    if (k > 2000.0)
        throw resolution_error("heat kernel series: time too small for the series route");
    return static_cast<int>(std::ceil(k)) + 12;
}

inline void require_off_diagonal(double separation, double scale) {
    if (separation < 1e-3 * (1.0 + scale))
        throw near_diagonal_error("kernel evaluation too close to the diagonal singularity");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Oscillator (harmonic-oscillator Schroedinger) heat kernel on R^d.

inline double mehler_kernel(int d, double t, const std::vector<double>& x,
                            const std::vector<double>& y) {
    require(d >= 1 && x.size() == static_cast<std::size_t>(d) && y.size() == x.size(),
            "mehler_kernel: dimension mismatch");
    require(t > 0.0, "mehler_kernel: time must be positive");
    double dm = 0.0, dp = 0.0;
    for (int j = 0; j < d; ++j) {
        dm += sqr(x[j] - y[j]);
        dp += sqr(x[j] + y[j]);
    }
    const double pref = std::pow(2.0 * pi * std::sinh(2.0 * t), -0.5 * d);
    return pref * std::exp(-0.25 * (dm / std::tanh(t) + dp * std::tanh(t)));
}

// Same kernel through polar data: r = |x|, s = |y|, u = cos of the angle
// between x and y. Equivalent to the cartesian form via
// coth(t) + tanh(t) = 2 coth(2t) and coth(t) - tanh(t) = 2 / sinh(2t).
inline double mehler_kernel_polar(int d, double t, double r, double s, double u) {
    require(d >= 1 && t > 0.0 && r >= 0.0 && s >= 0.0, "mehler_kernel_polar: bad arguments");
    require(u >= -1.0 - 1e-12 && u <= 1.0 + 1e-12, "mehler_kernel_polar: cosine out of range");
    const double sh = std::sinh(2.0 * t);
    const double pref = std::pow(2.0 * pi * sh, -0.5 * d);
    return pref * std::exp(-0.5 * (r * r + s * s) / std::tanh(2.0 * t) + r * s * u / sh);
}

// Eigenfunction route. The eigenbasis factors over coordinates, so the series
// is a product of one-dimensional sums; truncating each factor at K dominates
// the simplex truncation at the same K.
inline double mehler_kernel_series(int d, double t, const std::vector<double>& x,
                                   const std::vector<double>& y, int k_max = 0) {
    require(d >= 1 && x.size() == static_cast<std::size_t>(d) && y.size() == x.size(),
            "mehler_kernel_series: dimension mismatch");
    const int K = k_max > 0 ? k_max : detail::series_order(2.0, t);
    double prod = 1.0;
    for (int j = 0; j < d; ++j) {
        const auto hx = hermite_fn_all(K, x[j]);
        const auto hy = hermite_fn_all(K, y[j]);
        double acc = 0.0;
        for (int k = K; k >= 0; --k) acc += std::exp(-(2.0 * k + 1.0) * t) * hx[k] * hy[k];
        prod *= acc;
    }
    return prod;
}

// ---------------------------------------------------------------------------
// Half-line heat kernel of type alpha (radial oscillator with Bessel drift),
// acting against s^{2 alpha + 1} ds. Eigenfunctions psi_k with eigenvalues
// 4k + 2 alpha + 2.

inline double laguerre_heat_kernel(double alpha, double t, double r, double s) {
    require(alpha >= -0.5, "laguerre_heat_kernel: type must be >= -1/2");
    require(t > 0.0 && r >= 0.0 && s >= 0.0, "laguerre_heat_kernel: bad arguments");
    const double sh = std::sinh(2.0 * t);
    const double quad = -0.5 * (r * r + s * s) / std::tanh(2.0 * t);
    const double c = r * s / sh;
    if (c < 1e-12) {
        // (rs)^{-alpha} I_alpha(rs/sh) -> (2 sh)^{-alpha} / Gamma(alpha+1)
        return std::exp(quad - std::lgamma(alpha + 1.0) - alpha * std::log(2.0 * sh)) / sh;
    }
    // exponent quad + c <= 0 because coth(2t) >= 1/sinh(2t), so no overflow
    return bessel_i_scaled(alpha, c) * std::exp(quad + c - alpha * std::log(r * s)) / sh;
}

inline double laguerre_heat_kernel_series(double alpha, double t, double r, double s,
                                          int k_max = 0) {
    require(alpha >= -0.5, "laguerre_heat_kernel_series: type must be >= -1/2");
    require(t > 0.0 && r >= 0.0 && s >= 0.0, "laguerre_heat_kernel_series: bad arguments");
    const int K = k_max > 0 ? k_max : detail::series_order(4.0, t);
    const auto Lr = laguerre_poly_all(K, alpha, r * r);
    const auto Ls = laguerre_poly_all(K, alpha, s * s);
    const double egauss = std::exp(-0.5 * (r * r + s * s));
    double acc = 0.0;
    for (int k = K; k >= 0; --k) {
        const double nsq = std::exp(std::log(2.0) + std::lgamma(k + 1.0) - std::lgamma(k + alpha + 1.0));
        acc += std::exp(-(4.0 * k + 2.0 * alpha + 2.0) * t) * nsq * Lr[k] * Ls[k];
    }
    return acc * egauss;
}

// ---------------------------------------------------------------------------
// Twisted (magnetic) heat kernel on C^d: the function p_t with
// e^{-tL} f = f twisted-convolved with p_t. Series route is normative; the
// closed-form prefactor is pinned in calibrated_constants.hpp.

inline double special_heat_kernel(int d, double t, double rho) {
    require(d >= 1 && t > 0.0 && rho >= 0.0, "special_heat_kernel: bad arguments");
    return calibrated::special_heat_prefactor(d) * std::pow(std::sinh(t), -static_cast<double>(d)) *
           std::exp(-0.25 * rho * rho / std::tanh(t));
}

inline double special_heat_kernel_series(int d, double t, double rho, int k_max = 0) {
    require(d >= 1 && t > 0.0 && rho >= 0.0, "special_heat_kernel_series: bad arguments");
    const int K = k_max > 0 ? k_max : detail::series_order(2.0, t);
    const auto L = laguerre_poly_all(K, d - 1.0, 0.5 * rho * rho);
    const double egauss = std::exp(-0.25 * rho * rho);
    double acc = 0.0;
    for (int k = K; k >= 0; --k) acc += std::exp(-(2.0 * k + d) * t) * L[k];
    return std::pow(2.0 * pi, -d) * egauss * acc;
}

// ---------------------------------------------------------------------------
// Scaled half-line kernel of type delta appearing in the twisted radial
// calculus: eigenfunctions phi^delta_k with eigenvalues 2k + delta + 1,
// measure s^{2 delta + 1} ds. Related to the type-delta half-line kernel by
// k_t(r,s) = 2^{-delta-1} K_{t/2}(r/sqrt2, s/sqrt2).

inline double k_small_kernel(double delta, double t, double r, double s) {
    require(delta >= -0.5, "k_small_kernel: type must be >= -1/2");
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    return std::pow(2.0, -delta - 1.0) *
           laguerre_heat_kernel(delta, 0.5 * t, r * inv_sqrt2, s * inv_sqrt2);
}

inline double k_small_kernel_series(double delta, double t, double r, double s, int k_max = 0) {
    require(delta >= -0.5 && t > 0.0 && r >= 0.0 && s >= 0.0,
            "k_small_kernel_series: bad arguments");
    const int K = k_max > 0 ? k_max : detail::series_order(2.0, t);
    const auto Lr = laguerre_poly_all(K, delta, 0.5 * r * r);
    const auto Ls = laguerre_poly_all(K, delta, 0.5 * s * s);
    const double egauss = std::exp(-0.25 * (r * r + s * s));
    double acc = 0.0;
    for (int k = K; k >= 0; --k) {
        const double nsq = sqr(phi_small_norm(k, delta));
        acc += std::exp(-(2.0 * k + delta + 1.0) * t) * nsq * Lr[k] * Ls[k];
    }
    return acc * egauss;
}

// ---------------------------------------------------------------------------
// Singular integral kernel of the oscillator first-order calculus:
//   R_j(x,y) = pi^{-1/2} Int_0^inf (d/dx_j + x_j) K_t(x,y) t^{-1/2} dt,
// with the derivative taken in closed form,
//   (d/dx_j + x_j) K_t = [x_j - (coth t)(x_j-y_j)/2 - (tanh t)(x_j+y_j)/2] K_t.
// Accurate for separations |x-y| well above the near-diagonal guard; the time
// rule resolves the kernel peak at t ~ |x-y|^2 / 4.

// Variant taking a prebuilt time rule (from halfline_subordination with decay
// parameter d): lets polar-quadrature operator routes reuse one rule across
// thousands of kernel evaluations.
inline std::vector<double> hermite_riesz_kernel_with_rule(int d, const std::vector<double>& x,
                                                          const std::vector<double>& y,
                                                          const QuadratureRule& rule) {
    require(d >= 1 && x.size() == static_cast<std::size_t>(d) && y.size() == x.size(),
            "hermite_riesz_kernel: dimension mismatch");
    double sep2 = 0.0, xs2 = 0.0;
    for (int j = 0; j < d; ++j) {
        sep2 += sqr(x[j] - y[j]);
        xs2 += sqr(x[j]);
    }
    detail::require_off_diagonal(std::sqrt(sep2), std::sqrt(xs2));
    std::vector<double> acc(static_cast<std::size_t>(d), 0.0);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double t = rule.node(i)[0];
        const double w = rule.weights[i];
        const double kt = mehler_kernel(d, t, x, y);
        if (kt == 0.0) continue;
        const double ch = 0.5 / std::tanh(t), th = 0.5 * std::tanh(t);
        for (int j = 0; j < d; ++j)
            acc[static_cast<std::size_t>(j)] +=
                w * kt * (x[j] - ch * (x[j] - y[j]) - th * (x[j] + y[j]));
    }
    for (auto& v : acc) v /= std::sqrt(pi);
    return acc;
}

inline std::vector<double> hermite_riesz_kernel(int d, const std::vector<double>& x,
                                                const std::vector<double>& y,
                                                const SubordinationOptions& opt = {}) {
    const auto rule = halfline_subordination(static_cast<double>(d), opt.tail_tol, opt.n_nodes);
    return hermite_riesz_kernel_with_rule(d, x, y, rule);
}

// Gradient in x of the j-th component, by central finite differences of the
// subordinated kernel (one analytic route, one independent numeric route).
inline std::vector<double> hermite_riesz_kernel_grad(int d, int j, const std::vector<double>& x,
                                                     const std::vector<double>& y,
                                                     const SubordinationOptions& opt = {}) {
    require(j >= 0 && j < d, "hermite_riesz_kernel_grad: component out of range");
    double xs2 = 0.0;
    for (int i = 0; i < d; ++i) xs2 += sqr(x[i]);
    const double h = 1e-5 * (1.0 + std::sqrt(xs2));
    std::vector<double> g(static_cast<std::size_t>(d), 0.0);
    for (int i = 0; i < d; ++i) {
        auto at = [&](double step) {
            auto xx = x;
            xx[static_cast<std::size_t>(i)] += step;
            return hermite_riesz_kernel(d, xx, y, opt)[static_cast<std::size_t>(j)];
        };
        g[static_cast<std::size_t>(i)] =
            (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h);
    }
    return g;
}

// ---------------------------------------------------------------------------
// Twisted first-order kernel: applying the annihilation derivative to p_t
// gives (z_j-bar / 4)(1 - coth t) p_t, so the subordinated kernel is
// z_j-bar times a radial profile.

inline double special_riesz_radial_with_rule(int d, double rho, const QuadratureRule& rule) {
    require(d >= 1 && rho >= 0.0, "special_riesz_radial: bad arguments");
    detail::require_off_diagonal(rho, 0.0);
    const double integral = rule.integrate([&](double t) {
        return 0.25 * (1.0 - 1.0 / std::tanh(t)) * special_heat_kernel(d, t, rho);
    });
    return integral / std::sqrt(pi);
}

inline double special_riesz_radial(int d, double rho, const SubordinationOptions& opt = {}) {
    const auto rule = halfline_subordination(d + 2.0, opt.tail_tol, opt.n_nodes);
    return special_riesz_radial_with_rule(d, rho, rule);
}

inline std::vector<cplx> special_riesz_kernel(int d, const std::vector<cplx>& z,
                                              const SubordinationOptions& opt = {}) {
    require(z.size() == static_cast<std::size_t>(d), "special_riesz_kernel: dimension mismatch");
    double rho2 = 0.0;
    for (const auto& zj : z) rho2 += std::norm(zj);
    const double radial = special_riesz_radial(d, std::sqrt(rho2), opt);
    std::vector<cplx> out(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) out[j] = std::conj(z[j]) * radial;
    return out;
}

// Conjugate counterpart: the creation derivative gives
// Z_j-bar p_t = -(z_j / 4)(1 + coth t) p_t, whose subordinated profile decays
// like the heat kernel itself (the 1 + coth factor tends to 2).
inline double special_riesz_radial_bar_with_rule(int d, double rho, const QuadratureRule& rule) {
    require(d >= 1 && rho >= 0.0, "special_riesz_radial_bar: bad arguments");
    detail::require_off_diagonal(rho, 0.0);
    const double integral = rule.integrate([&](double t) {
        return -0.25 * (1.0 + 1.0 / std::tanh(t)) * special_heat_kernel(d, t, rho);
    });
    return integral / std::sqrt(pi);
}

inline double special_riesz_radial_bar(int d, double rho, const SubordinationOptions& opt = {}) {
    const auto rule = halfline_subordination(static_cast<double>(d), opt.tail_tol, opt.n_nodes);
    return special_riesz_radial_bar_with_rule(d, rho, rule);
}

inline std::vector<cplx> special_riesz_kernel_bar(int d, const std::vector<cplx>& z,
                                                  const SubordinationOptions& opt = {}) {
    require(z.size() == static_cast<std::size_t>(d),
            "special_riesz_kernel_bar: dimension mismatch");
    double rho2 = 0.0;
    for (const auto& zj : z) rho2 += std::norm(zj);
    const double radial = special_riesz_radial_bar(d, std::sqrt(rho2), opt);
    std::vector<cplx> out(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) out[j] = z[j] * radial;
    return out;
}

// ---------------------------------------------------------------------------
// Spherical-harmonic projection of the subordinated oscillator kernel. For a
// degree-m component the angular integral against the unit-normalized
// ultraspherical polynomial has the closed form
//   Int_{-1}^{1} e^{cu} P_m(u) (1-u^2)^{(d-3)/2} du
//     = pi 2^{1-nu} (Gamma(2nu)/Gamma(nu)) c^{-nu} I_{nu+m}(c),  nu = (d-2)/2,
// which keeps the time integrand smooth and cancellation-free. Tests verify
// the display against direct Gauss-Jacobi quadrature in u.

namespace detail {

// e^{-c} * Int e^{cu} P_m(u) (1-u^2)^{(d-3)/2} du, for c >= 0.
inline double angular_exp_scaled(int d, int m, double c) {
    require(d >= 2 && m >= 0 && c >= 0.0, "angular_exp_scaled: bad arguments");
    const double nu = 0.5 * (d - 2.0);
    const double pref = (d == 2) ? pi
                                 : pi * std::pow(2.0, 1.0 - nu) *
                                       std::exp(std::lgamma(2.0 * nu) - std::lgamma(nu));
    if (c < 1e-8) {
        // c^{-nu} I_{nu+m}(c) ~ c^m / (2^{nu+m} Gamma(nu+m+1))
        return pref * std::exp(-c) * std::pow(c, m) /
               (std::pow(2.0, nu + m) * std::exp(std::lgamma(nu + m + 1.0)));
    }
    return pref * std::pow(c, -nu) * bessel_i_scaled(nu + m, c);
}

// Same but for the radial first-order integrand: returns the pair needed for
// (d/dr + r), namely g(c) = c^{-nu} I_{nu+m}(c) scaled by e^{-c}, and its
// derivative g'(c) = c^{-nu} (I_{nu+m+1}(c) + (m/c) I_{nu+m}(c)) scaled alike.
inline void angular_exp_scaled_pair(int d, int m, double c, double& g, double& gp) {
    const double nu = 0.5 * (d - 2.0);
    if (c < 1e-8) {
        const double base = std::exp(-c) / (std::pow(2.0, nu + m) * std::exp(std::lgamma(nu + m + 1.0)));
        g = base * std::pow(c, m);
        gp = (m == 0) ? 0.0 : base * m * std::pow(c, m - 1.0);
        return;
    }
    const double cm = std::pow(c, -nu);
    const double ia = bessel_i_scaled(nu + m, c);
    const double ib = bessel_i_scaled(nu + m + 1.0, c);
    g = cm * ia;
    gp = cm * (ib + (m / c) * ia);
}

}  // namespace detail

// K_m(r,s): angle-averaged subordinated kernel against the degree-m spherical
// band, Int_0^inf [ |S^{d-2}| Int_-1^1 K_t(r,s,u) P_m(u) (1-u^2)^{(d-3)/2} du ]
// t^{-1/2} dt.
inline double projected_kernel(int d, int m, double r, double s,
                               const SubordinationOptions& opt = {}) {
    require(d >= 2 && d <= 4, "projected_kernel: supported ambient dimensions are 2..4");
    require(m >= 0 && m <= 8 && r >= 0.0 && s >= 0.0, "projected_kernel: bad arguments");
    detail::require_off_diagonal(std::abs(r - s), r);
    const double surf = sphere_area(d - 1);  // |S^{d-2}|
    const auto rule = halfline_subordination(static_cast<double>(d), opt.tail_tol, opt.n_nodes);
    return rule.integrate([&](double t) {
        const double sh = std::sinh(2.0 * t);
        const double c = r * s / sh;
        const double expo = -0.5 * (r * r + s * s) / std::tanh(2.0 * t) + c;
        return surf * std::pow(2.0 * pi * sh, -0.5 * d) * std::exp(expo) *
               detail::angular_exp_scaled(d, m, c);
    });
}

// (d/dr + r) K_m(r,s), with the derivative taken analytically under both
// integrals. Differentiating the time integrand in r gives
//   [ r (1 - coth 2t) g(c) + (s / sinh 2t) g'(c) ] * prefactors.
// The _with_rule variant shares one subordination rule across many
// evaluations; the rule must come from halfline_subordination for the same d.
inline double projected_kernel_dr_with_rule(int d, int m, double r, double s,
                                            const QuadratureRule& rule) {
    require(d >= 2 && d <= 4, "projected_kernel_dr: supported ambient dimensions are 2..4");
    require(m >= 0 && m <= 8 && r >= 0.0 && s >= 0.0, "projected_kernel_dr: bad arguments");
    detail::require_off_diagonal(std::abs(r - s), r);
    const double nu = 0.5 * (d - 2.0);
    const double pref_ang = (d == 2) ? pi
                                     : pi * std::pow(2.0, 1.0 - nu) *
                                           std::exp(std::lgamma(2.0 * nu) - std::lgamma(nu));
    const double surf = sphere_area(d - 1);
    return rule.integrate([&](double t) {
        const double sh = std::sinh(2.0 * t);
        const double ct = 1.0 / std::tanh(2.0 * t);
        const double c = r * s / sh;
        const double expo = -0.5 * (r * r + s * s) * ct + c;
        double g, gp;
        detail::angular_exp_scaled_pair(d, m, c, g, gp);
        return surf * pref_ang * std::pow(2.0 * pi * sh, -0.5 * d) * std::exp(expo) *
               (r * (1.0 - ct) * g + (s / sh) * gp);
    });
}

inline double projected_kernel_dr(int d, int m, double r, double s,
                                  const SubordinationOptions& opt = {}) {
    const auto rule = halfline_subordination(static_cast<double>(d), opt.tail_tol, opt.n_nodes);
    return projected_kernel_dr_with_rule(d, m, r, s, rule);
}

}  // namespace harmosc
