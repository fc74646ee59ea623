#pragma once
// Half-line measures with power densities, Muckenhoupt-style weight
// bookkeeping, mixed sphere/radius norms, kernel-decay normalizations, and
// seeded operator-norm ratio experiments over band-limited inputs.
//
// Layout:
//   1. radial measures  mu_alpha / ball_measure
//   2. weights          WeightSpec (power / tabulated), admissible ranges
//   3. A_p bookkeeping  interval families, averaged products, divergence flags
//   4. bridging         ambient-annulus averages vs half-line averages
//   5. mixed norms      (int_0^inf (int_S |f|^2)^{p/2} w(r) r^{2a+1} dr)^{1/p}
//   6. polynomial calculus for twisted bands (exact sphere integrals)
//   7. kernel-decay report (pointwise / gradient / operator-proxy / projected)
//   8. normalized half-line integral report and random sweep
//   9. smoothness-difference (Hormander-type) integral report
//  10. seeded norm-ratio experiments over random band-limited inputs

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "band_limited.hpp"
#include "calibrated_constants.hpp"
#include "common.hpp"
#include "harmonics.hpp"
#include "kernels.hpp"
#include "operators.hpp"
#include "polynomials.hpp"
#include "quadrature.hpp"
#include "special_functions.hpp"
#include "sphere_calculus.hpp"

namespace harmosc {

// ---------------------------------------------------------------------------
// 1. Radial measures r^{2 alpha + 1} dr on the half-line.

inline double mu_alpha(double alpha, double a, double b) {
    require(alpha >= -0.5, "mu_alpha: index must be >= -1/2");
    require(a >= 0.0, "mu_alpha: interval must sit inside the half-line");
    require(b >= a, "mu_alpha: interval endpoints out of order");
    const double e = 2.0 * alpha + 2.0;
    return (std::pow(b, e) - std::pow(a, e)) / e;
}

// Measure of the interval ball B(r, delta) = [max(r - delta, 0), r + delta].
inline double ball_measure(double alpha, double r, double delta) {
    require(r >= 0.0, "ball_measure: center must sit inside the half-line");
    require(delta > 0.0, "ball_measure: radius must be positive");
    return mu_alpha(alpha, std::max(r - delta, 0.0), r + delta);
}

// ---------------------------------------------------------------------------
// 2. Weights on the half-line: pure powers r^gamma, or tabulated positive
// samples with linear interpolation (clamped to the end values outside the
// table).

struct WeightSpec {
    enum class Kind { power, tabulated };
    Kind kind = Kind::power;
    double gamma = 0.0;
    std::vector<double> grid, values;

    static WeightSpec power(double g) {
        WeightSpec w;
        w.kind = Kind::power;
        w.gamma = g;
        return w;
    }
    static WeightSpec tabulated(std::vector<double> r, std::vector<double> v) {
        require(r.size() >= 2 && r.size() == v.size(),
                "WeightSpec: table needs at least two samples");
        for (std::size_t i = 0; i < r.size(); ++i) {
            require(v[i] > 0.0, "WeightSpec: tabulated values must be positive");
            require(r[i] >= 0.0 && (i == 0 || r[i] > r[i - 1]),
                    "WeightSpec: table grid must be increasing and nonnegative");
        }
        WeightSpec w;
        w.kind = Kind::tabulated;
        w.grid = std::move(r);
        w.values = std::move(v);
        return w;
    }

    bool is_unit() const { return kind == Kind::power && gamma == 0.0; }

    double value(double r) const {
        if (kind == Kind::power) return std::pow(r, gamma);
        if (r <= grid.front()) return values.front();
        if (r >= grid.back()) return values.back();
        const auto it = std::upper_bound(grid.begin(), grid.end(), r);
        const std::size_t i = static_cast<std::size_t>(it - grid.begin());
        const double t = (r - grid[i - 1]) / (grid[i] - grid[i - 1]);
        return values[i - 1] + t * (values[i] - values[i - 1]);
    }

    std::string kind_name() const { return kind == Kind::power ? "power" : "tabulated"; }
};

// r^gamma passes the averaged-product test against r^{2 alpha + 1} dr exactly
// when both local integrability exponents are positive.
inline std::pair<double, double> power_weight_admissible_range(double p, double alpha) {
    require(p > 1.0, "power_weight_admissible_range: exponent must exceed 1");
    require(alpha >= -0.5, "power_weight_admissible_range: index must be >= -1/2");
    return {-(2.0 * alpha + 2.0), (2.0 * alpha + 2.0) * (p - 1.0)};
}

inline bool power_weight_admissible(double gamma, double p, double alpha) {
    const auto [lo, hi] = power_weight_admissible_range(p, alpha);
    return gamma > lo && gamma < hi;
}

// ---------------------------------------------------------------------------
// 3. Averaged-product (A_p-type) bookkeeping over interval families.

struct RadialInterval {
    double lo = 0.0, hi = 1.0;
};

// Dyadic probe family: centers 2^-5 .. 2^5, lengths 2^-8 .. 2^2 relative to
// the center, clipped at the origin.
inline std::vector<RadialInterval> dyadic_interval_family(int center_min_exp = -5,
                                                          int center_max_exp = 5,
                                                          int length_min_exp = -8,
                                                          int length_max_exp = 2) {
    require(center_min_exp <= center_max_exp && length_min_exp <= length_max_exp,
            "dyadic_interval_family: exponent ranges out of order");
    std::vector<RadialInterval> out;
    for (int ce = center_min_exp; ce <= center_max_exp; ++ce)
        for (int le = length_min_exp; le <= length_max_exp; ++le) {
            const double c = std::ldexp(1.0, ce);
            const double len = c * std::ldexp(1.0, le);
            out.push_back({std::max(0.0, c - 0.5 * len), c + 0.5 * len});
        }
    return out;
}

// Intervals [2^-k, 1] marching toward the origin; feeds the divergence probes
// for weights that fail the averaged-product test near zero.
inline std::vector<RadialInterval> shrinking_interval_family(int levels) {
    require(levels >= 1, "shrinking_interval_family: need at least one level");
    std::vector<RadialInterval> out;
    for (int k = 1; k <= levels; ++k) out.push_back({std::ldexp(1.0, -k), 1.0});
    return out;
}

namespace detail {

struct AverageResult {
    double value = 0.0;
    bool diverged = false;
};

// Average of r^gamma over [a, b] under r^{2 alpha + 1} dr, in closed form.
inline AverageResult power_mu_average(double gamma, double alpha, double a, double b) {
    const double e = gamma + 2.0 * alpha + 2.0;
    if (a == 0.0 && e <= 0.0) return {std::numeric_limits<double>::infinity(), true};
    double integral;
    if (e != 0.0)
        integral = (std::pow(b, e) - std::pow(a, e)) / e;
    else
        integral = std::log(b / a);
    return {integral / mu_alpha(alpha, a, b), false};
}

// Average of w(r)^expo by Gauss quadrature (tabulated weights are bounded
// above and below, so no divergence can occur).
inline AverageResult quadrature_mu_average(const WeightSpec& w, double expo, double alpha,
                                           double a, double b, int n_nodes = 48) {
    const auto rule = gauss_interval(n_nodes, a, b);
    double integral = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double r = rule.node(i)[0];
        integral += rule.weights[i] * std::pow(w.value(r), expo) * std::pow(r, 2.0 * alpha + 1.0);
    }
    return {integral / mu_alpha(alpha, a, b), false};
}

inline AverageResult weight_mu_average(const WeightSpec& w, double expo, double alpha, double a,
                                       double b) {
    if (w.kind == WeightSpec::Kind::power) return power_mu_average(w.gamma * expo, alpha, a, b);
    return quadrature_mu_average(w, expo, alpha, a, b);
}

}  // namespace detail

struct ApIntervalDatum {
    RadialInterval interval;
    double value = 0.0;
    bool diverged = false;
};

struct ApReport {
    double p = 2.0, alpha = 0.0;
    std::string weight_kind;
    double weight_gamma = 0.0;
    double constant = 0.0;
    bool diverged = false;
    std::size_t argmax = 0;
    std::vector<ApIntervalDatum> per_interval;
};

// Largest averaged product (avg_Q w)(avg_Q w^{-1/(p-1)})^{p-1} over the
// family. An interval whose average fails to converge is flagged and drives
// the reported constant to infinity.
inline ApReport ap_constant(const WeightSpec& w, double p, double alpha,
                            const std::vector<RadialInterval>& family) {
    require(p > 1.0, "ap_constant: exponent must exceed 1");
    require(alpha >= -0.5, "ap_constant: index must be >= -1/2");
    require(!family.empty(), "ap_constant: empty interval family");
    ApReport rep;
    rep.p = p;
    rep.alpha = alpha;
    rep.weight_kind = w.kind_name();
    rep.weight_gamma = w.gamma;
    for (const auto& q : family) {
        require(q.lo >= 0.0 && q.hi > q.lo, "ap_constant: bad interval");
        const auto aw = detail::weight_mu_average(w, 1.0, alpha, q.lo, q.hi);
        const auto ad = detail::weight_mu_average(w, -1.0 / (p - 1.0), alpha, q.lo, q.hi);
        ApIntervalDatum datum;
        datum.interval = q;
        datum.diverged = aw.diverged || ad.diverged;
        datum.value = datum.diverged ? std::numeric_limits<double>::infinity()
                                     : aw.value * std::pow(ad.value, p - 1.0);
        if (datum.diverged) rep.diverged = true;
        rep.per_interval.push_back(datum);
        if (datum.value > rep.constant || rep.per_interval.size() == 1) {
            rep.constant = datum.value;
            rep.argmax = rep.per_interval.size() - 1;
        }
    }
    return rep;
}

inline ApReport ap_constant(const WeightSpec& w, double p, double alpha) {
    return ap_constant(w, p, alpha, dyadic_interval_family());
}

// ---------------------------------------------------------------------------
// 4. Bridging: for radial weights, the averaged product over an ambient
// annulus (full d-dimensional quadrature, surface factor carried explicitly)
// equals the half-line averaged product at index d/2 - 1.

struct BridgingReport {
    int d = 2;
    RadialInterval annulus;
    double ambient = 0.0, radial = 0.0, residual = 0.0;
};

inline BridgingReport radial_bridging_report(const WeightSpec& w, double p, int d,
                                             RadialInterval annulus, int n_radial = 64,
                                             int sphere_degree = 6) {
    require(p > 1.0, "radial_bridging_report: exponent must exceed 1");
    require(annulus.lo > 0.0 && annulus.hi > annulus.lo,
            "radial_bridging_report: annulus must avoid the origin");
    const auto sph = sphere_rule(d, sphere_degree);
    const auto rad = gauss_interval(n_radial, annulus.lo, annulus.hi);

    // ambient route: integrate w(|x|)^e over the annulus, then normalize by
    // its measured volume; the surface factor enters both and cancels.
    auto ambient_average = [&](double expo) {
        double num = 0.0, vol = 0.0;
        std::vector<double> x(static_cast<std::size_t>(d));
        for (std::size_t i = 0; i < rad.size(); ++i) {
            const double r = rad.node(i)[0];
            const double jac = rad.weights[i] * std::pow(r, d - 1.0);
            for (std::size_t s = 0; s < sph.size(); ++s) {
                const double* om = sph.node(s);
                double xr2 = 0.0;
                for (int q = 0; q < d; ++q) {
                    x[static_cast<std::size_t>(q)] = r * om[q];
                    xr2 += sqr(x[static_cast<std::size_t>(q)]);
                }
                num += jac * sph.weights[s] * std::pow(w.value(std::sqrt(xr2)), expo);
                vol += jac * sph.weights[s];
            }
        }
        return num / vol;
    };
    BridgingReport rep;
    rep.d = d;
    rep.annulus = annulus;
    rep.ambient =
        ambient_average(1.0) * std::pow(ambient_average(-1.0 / (p - 1.0)), p - 1.0);

    const double alpha = 0.5 * d - 1.0;
    const auto aw = detail::weight_mu_average(w, 1.0, alpha, annulus.lo, annulus.hi);
    const auto ad = detail::weight_mu_average(w, -1.0 / (p - 1.0), alpha, annulus.lo, annulus.hi);
    require(!aw.diverged && !ad.diverged, "radial_bridging_report: averages must converge");
    rep.radial = aw.value * std::pow(ad.value, p - 1.0);
    rep.residual = std::abs(rep.ambient - rep.radial) / rep.radial;
    return rep;
}

// ---------------------------------------------------------------------------
// 5. Mixed sphere/radius norms.

struct MixedNormOptions {
    int n_radial = 64;
    double radial_lo = 0.0, radial_hi = 12.0;
    int sphere_degree = -1;  // default: twice the band cutoff plus slack
};

// Generic radial reduction: sphere_square(r) must return the sphere-integrated
// square at radius r; the measure density is w(r) r^{2 alpha + 1} dr.
inline double mixed_norm_radial(const std::function<double(double)>& sphere_square, double alpha,
                                double p, const WeightSpec& w,
                                const MixedNormOptions& opt = {}) {
    require(p > 0.0, "mixed_norm_radial: exponent must be positive");
    require(opt.radial_hi > opt.radial_lo && opt.radial_lo >= 0.0,
            "mixed_norm_radial: bad radial window");
    const auto rad = gauss_interval(opt.n_radial, opt.radial_lo, opt.radial_hi);
    double acc = 0.0;
    for (std::size_t i = 0; i < rad.size(); ++i) {
        const double r = rad.node(i)[0];
        const double inner = std::max(0.0, sphere_square(r));
        acc += rad.weights[i] * w.value(r) * std::pow(r, 2.0 * alpha + 1.0) *
               std::pow(inner, 0.5 * p);
    }
    return std::pow(acc, 1.0 / p);
}

inline double mixed_norm(const HermiteBand& f, double p, const WeightSpec& w,
                         MixedNormOptions opt = {}) {
    require(f.d >= 2 && f.d <= 4, "mixed_norm: ambient dimension must be 2..4");
    const int degree = opt.sphere_degree > 0 ? opt.sphere_degree : 2 * f.cutoff;
    const auto sph = sphere_rule(f.d, degree);
    std::vector<double> x(static_cast<std::size_t>(f.d));
    auto sphere_square = [&](double r) {
        double acc = 0.0;
        for (std::size_t s = 0; s < sph.size(); ++s) {
            const double* om = sph.node(s);
            for (int q = 0; q < f.d; ++q) x[static_cast<std::size_t>(q)] = r * om[q];
            acc += sph.weights[s] * sqr(hermite_eval(f, x));
        }
        return acc;
    };
    return mixed_norm_radial(sphere_square, 0.5 * f.d - 1.0, p, w, opt);
}

inline double mixed_norm(const SpecialBand& f, double p, const WeightSpec& w,
                         MixedNormOptions opt = {}) {
    const auto prof = special_band_profiles(f);
    auto sphere_square = [&](double r) {
        double acc = 0.0;
        for (const auto& [key, F] : prof) {
            (void)key;
            acc += std::norm(F.value(r));
        }
        return acc;
    };
    return mixed_norm_radial(sphere_square, f.d - 1.0, p, w, opt);
}

// ---------------------------------------------------------------------------
// 6. Exact polynomial calculus for twisted bands: every band-limited function
// of the twisted family is a bigraded polynomial times exp(-|z|^2/4), so
// annihilation-type derivatives and sphere integrals close in polynomial
// arithmetic with no quadrature at all.

namespace detail {

// Coefficients c_i with L_k^delta(|z|^2 / 2) = sum_i c_i (|z|^2)^i.
inline std::vector<double> laguerre_zsq_coefficients(int k, int delta) {
    std::vector<double> c(static_cast<std::size_t>(k) + 1);
    double factorial = 1.0;
    for (int i = 0; i <= k; ++i) {
        if (i > 0) factorial *= i;
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        c[static_cast<std::size_t>(i)] =
            sign / (factorial * std::pow(2.0, i)) * binomial(k + delta, k - i);
    }
    return c;
}

}  // namespace detail

// The polynomial Q with f(z) = Q(z, conj z) exp(-|z|^2 / 4).
inline CplxPoly special_band_polynomial(const SpecialBand& f) {
    CplxPoly q;
    for (const auto& mode : special_compile(f)) {
        const int delta = static_cast<int>(std::lround(mode.delta));
        const auto c = detail::laguerre_zsq_coefficients(mode.k, delta);
        const double norm_factor = phi_small_norm(mode.k, mode.delta);
        CplxPoly shell = mode.poly;  // times (|z|^2)^i below
        for (int i = 0; i <= mode.k; ++i) {
            if (i > 0) shell = cp_mul_zsq(shell);
            cp_add_scaled(q, shell, mode.coeff * norm_factor * c[static_cast<std::size_t>(i)]);
        }
    }
    return q;
}

// Coefficients s_k with  int_{S^{2d-1}} |q(r zeta)|^2 dsigma(zeta) = sum_k s_k r^{2k}.
inline std::vector<double> radial_square_profile(const CplxPoly& q) {
    int maxdeg = 0;
    for (const auto& [e, c] : q) {
        (void)c;
        maxdeg = std::max(maxdeg, mi_order(e.first) + mi_order(e.second));
    }
    std::vector<double> out(static_cast<std::size_t>(maxdeg) + 1, 0.0);
    for (const auto& [e, c] : q)
        for (const auto& [f, g] : q) {
            MultiIndex zg = e.first, zh = e.second;
            for (std::size_t j = 0; j < zg.size(); ++j) {
                zg[j] += f.second[j];
                zh[j] += f.first[j];
            }
            const double I = complex_sphere_monomial_integral(zg, zh);
            if (I == 0.0) continue;
            const int degsum = mi_order(e.first) + mi_order(e.second) + mi_order(f.first) +
                               mi_order(f.second);
            out[static_cast<std::size_t>(degsum / 2)] += (c * std::conj(g) * I).real();
        }
    return out;
}

inline double radial_profile_eval(const std::vector<double>& coeffs, double r) {
    const double r2 = r * r;
    double acc = 0.0, pw = 1.0;
    for (double c : coeffs) {
        acc += c * pw;
        pw *= r2;
    }
    return acc;
}

// Annihilation-type derivative through the Gaussian: with f = Q e^{-|z|^2/4},
// (d/dz_j + conj(z_j)/4) f = (d/dz_j Q) e^{-|z|^2/4}.
inline CplxPoly annihilation_polynomial(const CplxPoly& q, int j) { return cp_dz(q, j); }

// Conjugate side: (d/dconj(z_j) - z_j/4) f = (d/dconj(z_j) Q - z_j Q / 2) e^{-|z|^2/4}.
inline CplxPoly conjugate_annihilation_polynomial(const CplxPoly& q, int j) {
    CplxPoly out = cp_dzbar(q, j);
    cp_add_scaled(out, cp_mul_z(q, j), cplx(-0.5, 0.0));
    return out;
}

// ---------------------------------------------------------------------------
// 7. Kernel-decay report: normalized off-diagonal ratios for the oscillator
// first-order kernel (pointwise and gradient), its sphere-operator proxy, and
// the harmonic-projected half-line kernels.

struct DecayStat {
    double sup = 0.0;
    double min = std::numeric_limits<double>::infinity();
    std::size_t n_samples = 0;
    double argmax_separation = 0.0;

    void absorb(double ratio, double separation) {
        if (ratio > sup) {
            sup = ratio;
            argmax_separation = separation;
        }
        min = std::min(min, ratio);
        ++n_samples;
    }
};

struct KernelDecayOptions {
    int n_pointwise = 1000;
    std::uint64_t seed = 2024;
    double box_halfwidth = 3.0;
    double min_separation = 0.08;  // relative floor, scaled by 1 + |x|
    int m_max = 6;
    int sphere_degree = 48;
    int n_time_nodes = 0;  // 0: library default
    bool with_gradient = true;
    bool with_operator_proxy = true;
    bool with_projected = true;
};

struct KernelDecayReport {
    int d = 2;
    std::uint64_t seed = 0;
    int n_pointwise = 0;
    double min_separation = 0.0;
    int rejected = 0;  // near-diagonal draws discarded by the separation floor
    DecayStat pointwise;        // |K_1(x,y)| |x-y|^d
    DecayStat gradient;         // |grad_x K_1(x,y)| |x-y|^{d+1}
    DecayStat operator_proxy;   // sup_w int |K_1(r w, s w')| dw' * mu(B(r,|r-s|))
    double intermediate_constant = 0.0;  // sup of proxy / (|r-s|^{-1} (r^2+s^2)^{-(d-1)/2})
    std::vector<DecayStat> projected_value;  // m = 0..m_max: |(d_r + r) K_m| mu(B)
    std::vector<DecayStat> projected_deriv;  // |d_r (d_r + r) K_m| |r-s| mu(B)
};

inline KernelDecayReport kernel_decay_report(int d, KernelDecayOptions opt = {}) {
    require(d >= 1 && d <= 4, "kernel_decay_report: dimension must be 1..4");
    require(opt.n_pointwise >= 1, "kernel_decay_report: need at least one sample");
    KernelDecayReport rep;
    rep.d = d;
    rep.seed = opt.seed;
    rep.n_pointwise = opt.n_pointwise;
    rep.min_separation = opt.min_separation;

    const auto rule =
        halfline_subordination(static_cast<double>(d), 1e-12, opt.n_time_nodes);
    const double alpha = 0.5 * d - 1.0;

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> box(-opt.box_halfwidth, opt.box_halfwidth);

    auto norm_of = [](const std::vector<double>& v) {
        double acc = 0.0;
        for (double c : v) acc += sqr(c);
        return std::sqrt(acc);
    };

    std::vector<double> x(static_cast<std::size_t>(d)), y(static_cast<std::size_t>(d));
    for (int s = 0; s < opt.n_pointwise; ++s) {
        double sep, floor_sep;
        do {
            double xs2 = 0.0, sep2 = 0.0;
            for (int q = 0; q < d; ++q) {
                x[static_cast<std::size_t>(q)] = box(rng);
                y[static_cast<std::size_t>(q)] = box(rng);
                xs2 += sqr(x[static_cast<std::size_t>(q)]);
                sep2 += sqr(x[static_cast<std::size_t>(q)] - y[static_cast<std::size_t>(q)]);
            }
            sep = std::sqrt(sep2);
            floor_sep = opt.min_separation * (1.0 + std::sqrt(xs2));
            if (sep < floor_sep) ++rep.rejected;
        } while (sep < floor_sep);

        const double k1 = std::abs(hermite_riesz_kernel_with_rule(d, x, y, rule)[0]);
        rep.pointwise.absorb(k1 * std::pow(sep, d), sep);

        if (opt.with_gradient) {
            double xs2 = 0.0;
            for (int q = 0; q < d; ++q) xs2 += sqr(x[static_cast<std::size_t>(q)]);
            const double h = 1e-5 * (1.0 + std::sqrt(xs2));
            std::vector<double> g(static_cast<std::size_t>(d));
            for (int q = 0; q < d; ++q) {
                auto at = [&](double step) {
                    auto xx = x;
                    xx[static_cast<std::size_t>(q)] += step;
                    return hermite_riesz_kernel_with_rule(d, xx, y, rule)[0];
                };
                g[static_cast<std::size_t>(q)] =
                    (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h);
            }
            rep.gradient.absorb(norm_of(g) * std::pow(sep, d + 1.0), sep);
        }
    }

    // log-spaced radial grid shared by the operator proxy and projected cases
    auto log_grid = [](double lo, double hi, int n) {
        std::vector<double> g(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            g[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, double(i) / (n - 1));
        return g;
    };

    if (opt.with_operator_proxy && d >= 2) {
        const auto sph = sphere_rule(d, opt.sphere_degree);
        std::vector<std::vector<double>> dirs;
        if (d == 2)
            dirs = {{1.0, 0.0}, {std::cos(0.7), std::sin(0.7)}};
        else {
            std::vector<double> a(static_cast<std::size_t>(d), 0.0), b(static_cast<std::size_t>(d));
            a.back() = 1.0;
            double nb = 0.0;
            for (int q = 0; q < d; ++q) {
                b[static_cast<std::size_t>(q)] = 1.0 + 0.5 * q;
                nb += sqr(b[static_cast<std::size_t>(q)]);
            }
            for (auto& v : b) v /= std::sqrt(nb);
            dirs = {a, b};
        }
        const auto radii = log_grid(0.3, 3.0, 10);
        std::vector<double> xp(static_cast<std::size_t>(d)), yp(static_cast<std::size_t>(d));
        for (double r : radii)
            for (double s2 : radii) {
                const double sep = std::abs(r - s2);
                if (sep < 1.5 * opt.min_separation * (1.0 + std::max(r, s2))) continue;
                double proxy = 0.0;
                for (const auto& om : dirs) {
                    for (int q = 0; q < d; ++q) xp[static_cast<std::size_t>(q)] = r * om[q];
                    double acc = 0.0;
                    for (std::size_t si = 0; si < sph.size(); ++si) {
                        const double* omp = sph.node(si);
                        for (int q = 0; q < d; ++q)
                            yp[static_cast<std::size_t>(q)] = s2 * omp[q];
                        acc += sph.weights[si] *
                               std::abs(hermite_riesz_kernel_with_rule(d, xp, yp, rule)[0]);
                    }
                    proxy = std::max(proxy, acc);
                }
                rep.operator_proxy.absorb(proxy * ball_measure(alpha, r, sep), sep);
                const double intermediate =
                    std::pow(sep, -1.0) * std::pow(r * r + s2 * s2, -0.5 * (d - 1.0));
                rep.intermediate_constant =
                    std::max(rep.intermediate_constant, proxy / intermediate);
            }
    }

    if (opt.with_projected && d >= 2) {
        const auto proj_rule = halfline_subordination(
            static_cast<double>(d), 1e-12, opt.n_time_nodes > 0 ? opt.n_time_nodes : 200);
        rep.projected_value.resize(static_cast<std::size_t>(opt.m_max) + 1);
        rep.projected_deriv.resize(static_cast<std::size_t>(opt.m_max) + 1);
        // pair grid: a coarse far-field sweep plus near-diagonal offsets,
        // where the normalized ratio approaches its local constant
        const auto radii = log_grid(0.4, 2.8, 8);
        std::vector<std::pair<double, double>> pairs;
        for (double r : radii) {
            for (double s2 : radii) {
                const double sep = std::abs(r - s2);
                if (sep < 1.5 * opt.min_separation * (1.0 + std::max(r, s2))) continue;
                pairs.emplace_back(r, s2);
            }
            for (double delta : {0.05, 0.12, 0.3}) pairs.emplace_back(r, r + delta);
        }
        for (int m = 0; m <= opt.m_max; ++m)
            for (const auto& [r, s2] : pairs) {
                const double sep = std::abs(r - s2);
                const double ball = ball_measure(alpha, r, sep);
                const double v = projected_kernel_dr_with_rule(d, m, r, s2, proj_rule);
                rep.projected_value[static_cast<std::size_t>(m)].absorb(std::abs(v) * ball,
                                                                        sep);
                const double h = 1e-4 * (1.0 + r);
                auto at = [&](double step) {
                    return projected_kernel_dr_with_rule(d, m, r + step, s2, proj_rule);
                };
                const double dv =
                    (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h);
                rep.projected_deriv[static_cast<std::size_t>(m)].absorb(std::abs(dv) * sep * ball,
                                                                        sep);
            }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// 8. Normalized half-line integral  int_0^1 (1-u)^{c-1/2} (A - B u)^{-(c+lambda+1/2)} du,
// reported together with its scale-free normalization A^{c+1/2} (A-B)^lambda.

struct HalfLineIntegralReport {
    double c = 0.5, big_a = 1.0, big_b = 0.0, lambda = 1.0;
    int n_nodes = 0;
    double integral = 0.0;
    double normalized = 0.0;  // integral * A^{c+1/2} * (A-B)^lambda
};

inline HalfLineIntegralReport half_line_integral_report(double c, double big_a, double big_b,
                                                        double lambda, int n_nodes = 0) {
    require(c >= 0.5, "half_line_integral_report: first index must be >= 1/2");
    require(lambda > 0.0, "half_line_integral_report: decay order must be positive");
    require(big_a > 0.0 && big_b >= 0.0 && big_b < big_a,
            "half_line_integral_report: need 0 <= B < A");
    if (n_nodes <= 0) n_nodes = 96;
    const auto rule = gauss_jacobi(n_nodes, c - 0.5, 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double u = 0.5 * (rule.nodes[i] + 1.0);
        acc += rule.weights[i] * std::pow(big_a - big_b * u, -(c + lambda + 0.5));
    }
    HalfLineIntegralReport rep;
    rep.c = c;
    rep.big_a = big_a;
    rep.big_b = big_b;
    rep.lambda = lambda;
    rep.n_nodes = n_nodes;
    rep.integral = acc * std::pow(2.0, -(c + 0.5));
    rep.normalized = rep.integral * std::pow(big_a, c + 0.5) * std::pow(big_a - big_b, lambda);
    return rep;
}

struct HalfLineIntegralSweep {
    int n_tuples = 0;
    std::uint64_t seed = 0;
    int n_nodes = 0;
    double max_normalized = 0.0;
    double mean_normalized = 0.0;
};

inline HalfLineIntegralSweep half_line_integral_sweep(int n_tuples, std::uint64_t seed,
                                                      int n_nodes = 0) {
    require(n_tuples >= 1, "half_line_integral_sweep: need at least one tuple");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uc(0.5, 3.0), ul(0.1, 2.0), ua(0.1, 5.0),
        uq(0.01, 0.95);
    HalfLineIntegralSweep sweep;
    sweep.n_tuples = n_tuples;
    sweep.seed = seed;
    sweep.n_nodes = n_nodes;
    double acc = 0.0;
    for (int i = 0; i < n_tuples; ++i) {
        const double c = uc(rng), lambda = ul(rng), A = ua(rng), B = A * uq(rng);
        const double v = half_line_integral_report(c, A, B, lambda, n_nodes).normalized;
        sweep.max_normalized = std::max(sweep.max_normalized, v);
        acc += v;
    }
    sweep.mean_normalized = acc / n_tuples;
    return sweep;
}

// ---------------------------------------------------------------------------
// 9. Hormander-type smoothness integral for the sphere-operator proxy:
// integrate the proxy norm of K(., s) - K(., t) over {|r - s| > 2|s - t|}
// against r^{d-1} dr, in both slot orders, with a documented outer truncation.

struct HormanderOptions {
    int n_radial = 20;       // quadrature nodes per radial segment
    int sphere_degree = 16;  // integration rule over the second sphere slot
    int n_time_nodes = 80;
    double tail_fraction = 1e-14;
    double radial_margin = 10.0;  // initial outer limit beyond max(s, t)
};

struct HormanderReport {
    int d = 3;
    double s = 0.0, t = 0.0;
    double forward = 0.0, transposed = 0.0;
    double forward_doubled = 0.0, transposed_doubled = 0.0;
    double truncation_radius = 0.0;  // integrand below tail_fraction of its peak beyond this
    double outer_limit = 0.0, doubled_limit = 0.0;
    int n_radial = 0, sphere_nodes = 0;
};

inline HormanderReport hormander_report(int d, double s, double t, HormanderOptions opt = {}) {
    require(d >= 2 && d <= 4, "hormander_report: dimension must be 2..4");
    require(s > 0.0 && t > 0.0, "hormander_report: radii must be positive");
    HormanderReport rep;
    rep.d = d;
    rep.s = s;
    rep.t = t;
    rep.n_radial = opt.n_radial;
    const double delta = std::abs(s - t);
    if (delta == 0.0) return rep;
    require(delta >= 5e-3, "hormander_report: radii too close for the off-diagonal guard");

    const auto rule = halfline_subordination(static_cast<double>(d), 1e-12, opt.n_time_nodes);
    const auto sph = sphere_rule(d, opt.sphere_degree);
    rep.sphere_nodes = static_cast<int>(sph.size());

    std::vector<std::vector<double>> dirs;
    if (d == 2)
        dirs = {{1.0, 0.0}, {std::cos(0.9), std::sin(0.9)}};
    else {
        std::vector<double> a(static_cast<std::size_t>(d), 0.0), b(static_cast<std::size_t>(d));
        a.back() = 1.0;
        double nb = 0.0;
        for (int q = 0; q < d; ++q) {
            b[static_cast<std::size_t>(q)] = 1.0 + 0.7 * q;
            nb += sqr(b[static_cast<std::size_t>(q)]);
        }
        for (auto& v : b) v /= std::sqrt(nb);
        dirs = {a, b};
    }

    // proxy norm of the kernel difference between source radii (a, b), viewed
    // from radius r; transposed = difference sits in the first slot instead.
    std::vector<double> xp(static_cast<std::size_t>(d)), ya(static_cast<std::size_t>(d)),
        yb(static_cast<std::size_t>(d));
    auto difference_proxy = [&](double r, bool transposed) {
        double best = 0.0;
        for (const auto& om : dirs) {
            double acc = 0.0;
            for (std::size_t si = 0; si < sph.size(); ++si) {
                const double* omp = sph.node(si);
                // a sample point pair caught by the kernel's off-diagonal
                // guard sits outside the admissible region and contributes 0
                try {
                    if (!transposed) {
                        for (int q = 0; q < d; ++q) {
                            xp[static_cast<std::size_t>(q)] = r * om[q];
                            ya[static_cast<std::size_t>(q)] = s * omp[q];
                            yb[static_cast<std::size_t>(q)] = t * omp[q];
                        }
                        acc += sph.weights[si] *
                               std::abs(hermite_riesz_kernel_with_rule(d, xp, ya, rule)[0] -
                                        hermite_riesz_kernel_with_rule(d, xp, yb, rule)[0]);
                    } else {
                        for (int q = 0; q < d; ++q) {
                            xp[static_cast<std::size_t>(q)] = r * omp[q];
                            ya[static_cast<std::size_t>(q)] = s * om[q];
                            yb[static_cast<std::size_t>(q)] = t * om[q];
                        }
                        acc += sph.weights[si] *
                               std::abs(hermite_riesz_kernel_with_rule(d, ya, xp, rule)[0] -
                                        hermite_riesz_kernel_with_rule(d, yb, xp, rule)[0]);
                    }
                } catch (const near_diagonal_error&) {
                }
            }
            best = std::max(best, acc);
        }
        return best;
    };

    // the off-diagonal guard caps how far out the kernel may be sampled
    const double guard_cap = 2000.0 * delta - 1.0 - 0.01;
    const double maxst = std::max(s, t);
    const double outer0 = std::min(maxst + opt.radial_margin, guard_cap);
    require(outer0 > s + 2.0 * delta,
            "hormander_report: admissible region is empty at this resolution");
    rep.outer_limit = outer0;

    auto integrate = [&](bool transposed, double outer_hi, int n_outer, double* trunc_radius) {
        double acc = 0.0, peak = 0.0;
        std::vector<std::pair<double, double>> outer_samples;
        const double inner_hi = s - 2.0 * delta;
        if (inner_hi > 1e-9) {
            const auto seg = gauss_interval(opt.n_radial, 0.0, inner_hi);
            for (std::size_t i = 0; i < seg.size(); ++i) {
                const double r = seg.node(i)[0];
                const double g = difference_proxy(r, transposed);
                peak = std::max(peak, g);
                acc += seg.weights[i] * g * std::pow(r, d - 1.0);
            }
        }
        const auto seg = gauss_interval(n_outer, s + 2.0 * delta, outer_hi);
        for (std::size_t i = 0; i < seg.size(); ++i) {
            const double r = seg.node(i)[0];
            const double g = difference_proxy(r, transposed);
            peak = std::max(peak, g);
            outer_samples.emplace_back(r, g);
            acc += seg.weights[i] * g * std::pow(r, d - 1.0);
        }
        if (trunc_radius != nullptr) {
            double radius = outer_hi;
            for (auto it = outer_samples.rbegin(); it != outer_samples.rend(); ++it) {
                if (it->second >= opt.tail_fraction * peak) {
                    radius = it->first;
                    break;
                }
            }
            *trunc_radius = radius;
        }
        return acc;
    };

    rep.forward = integrate(false, outer0, opt.n_radial, &rep.truncation_radius);
    rep.transposed = integrate(true, outer0, opt.n_radial, nullptr);

    const double outer2 = std::min(2.0 * outer0, guard_cap);
    rep.doubled_limit = outer2;
    rep.forward_doubled = integrate(false, outer2, 2 * opt.n_radial, nullptr);
    rep.transposed_doubled = integrate(true, outer2, 2 * opt.n_radial, nullptr);
    return rep;
}

// ---------------------------------------------------------------------------
// 10. Seeded norm-ratio experiments: random band-limited inputs, mixed-norm
// ratios of an operator family against its input, per-trial seeds derived
// from one master seed.

enum class OperatorTag {
    riesz_vector,          // oscillator first-order family, all components
    twisted_riesz,         // twisted annihilation family, both orientations
    laguerre_vector,       // half-line family across harmonic degrees
    square_terms,          // five radial square-function channels (holomorphic half)
    gradient_aggregate,    // (r + d/dr) of the half-power inverse, summed profiles
    angular_aggregate,     // spherical-gradient aggregate of the half-power inverse
    weighted_half_inverse  // degree-over-radius aggregate of the half-power inverse
};

inline const char* operator_tag_name(OperatorTag tag) {
    switch (tag) {
        case OperatorTag::riesz_vector: return "riesz_vector";
        case OperatorTag::twisted_riesz: return "twisted_riesz";
        case OperatorTag::laguerre_vector: return "laguerre_vector";
        case OperatorTag::square_terms: return "square_terms";
        case OperatorTag::gradient_aggregate: return "gradient_aggregate";
        case OperatorTag::angular_aggregate: return "angular_aggregate";
        case OperatorTag::weighted_half_inverse: return "weighted_half_inverse";
    }
    return "unknown";
}

inline OperatorTag operator_tag_from_name(const std::string& name) {
    for (OperatorTag tag :
         {OperatorTag::riesz_vector, OperatorTag::twisted_riesz, OperatorTag::laguerre_vector,
          OperatorTag::square_terms, OperatorTag::gradient_aggregate,
          OperatorTag::angular_aggregate, OperatorTag::weighted_half_inverse})
        if (name == operator_tag_name(tag)) return tag;
    throw std::invalid_argument("operator_tag_from_name: unknown tag '" + name + "'");
}

struct ExperimentConfig {
    int dim = 3;      // ambient dimension (real side) or complex dimension (twisted side)
    int cutoff = 8;   // band cutoff (mode bound per family, see builders)
    int max_modes = 4;  // harmonic degrees in the half-line vector variant
    int trials = 100;
    std::uint64_t seed = 1234;
    double p = 2.0;
    WeightSpec weight = WeightSpec::power(0.0);
    int n_radial = 48;
    double radial_lo = 0.0, radial_hi = 12.0;
    bool allow_inadmissible = false;
};

// Stage one: weight- and p-independent sphere-square profiles per trial.
// Channel homogeneity 1 stores |A(r)|^2 (functional linear in the input);
// homogeneity 2 stores a signed-degree aggregate that is quadratic in the
// input, so its ratio divides by the squared input norm.
struct TrialProfiles {
    std::string tag;
    int dim = 0, cutoff = 0, trials = 0;
    std::uint64_t seed = 0;
    double alpha = 0.0;  // radial density r^{2 alpha + 1}
    int n_radial = 0;
    double radial_lo = 0.0, radial_hi = 0.0;
    int sphere_degree = -1;  // -1: closed-form sphere integrals
    std::vector<double> radii, radial_weights;

    struct Channel {
        std::string name;
        int homogeneity = 1;
        std::vector<std::vector<double>> inner;  // [trial][radial node]
    };
    std::vector<std::vector<double>> input_inner;  // [trial][radial node]
    std::vector<Channel> outputs;
};

struct ChannelReport {
    std::string name;
    int homogeneity = 1;
    std::vector<double> norms, ratios;
    double max_ratio = 0.0, mean_ratio = 0.0, quantile90 = 0.0;
};

struct RatioReport {
    std::string tag;
    double p = 2.0, alpha = 0.0;
    std::string weight_kind;
    double weight_gamma = 0.0;
    int dim = 0, cutoff = 0, trials = 0;
    std::uint64_t seed = 0;
    int n_radial = 0;
    double radial_lo = 0.0, radial_hi = 0.0;
    int sphere_degree = -1;
    bool weight_admissible = true;
    double weight_ap_bound = 0.0;
    std::vector<double> input_norms;
    std::vector<ChannelReport> channels;
    double max_ratio = 0.0;
};

namespace detail {

inline std::vector<std::uint64_t> trial_seeds(std::uint64_t master, int trials) {
    std::mt19937_64 rng(master);
    std::vector<std::uint64_t> out(static_cast<std::size_t>(trials));
    for (auto& s : out) s = rng();
    return out;
}

inline double quantile_of(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t idx = static_cast<std::size_t>(
        std::min<double>(static_cast<double>(v.size()) - 1.0,
                         std::ceil(q * static_cast<double>(v.size())) - 1.0));
    return v[std::max<std::size_t>(idx, 0)];
}

// Lexicographic enumeration of multi-indices with |mu| <= cutoff.
inline void enumerate_modes(int d, int cutoff, MultiIndex& cur, int pos, int rem,
                            std::vector<MultiIndex>& out) {
    if (pos == d) {
        out.push_back(cur);
        return;
    }
    for (int v = 0; v <= rem; ++v) {
        cur[static_cast<std::size_t>(pos)] = v;
        enumerate_modes(d, cutoff, cur, pos + 1, rem - v, out);
    }
}

struct RealGrid {
    int d = 0, mode_bound = 0;
    QuadratureRule rad, sph;
    std::vector<MultiIndex> modes;
    std::map<MultiIndex, int> index;
    Eigen::MatrixXd values;  // (n_radial * n_sphere) x n_modes
};

inline RealGrid build_real_grid(int d, int mode_bound, int n_radial, double lo, double hi,
                                int sphere_degree) {
    RealGrid g;
    g.d = d;
    g.mode_bound = mode_bound;
    g.rad = gauss_interval(n_radial, lo, hi);
    g.sph = sphere_rule(d, sphere_degree);
    MultiIndex cur(static_cast<std::size_t>(d), 0);
    enumerate_modes(d, mode_bound, cur, 0, mode_bound, g.modes);
    for (std::size_t i = 0; i < g.modes.size(); ++i)
        g.index[g.modes[i]] = static_cast<int>(i);

    const std::size_t n_pts = g.rad.size() * g.sph.size();
    g.values.resize(static_cast<Eigen::Index>(n_pts),
                    static_cast<Eigen::Index>(g.modes.size()));
    std::vector<std::vector<double>> lines(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < g.rad.size(); ++i) {
        const double r = g.rad.node(i)[0];
        for (std::size_t s = 0; s < g.sph.size(); ++s) {
            const double* om = g.sph.node(s);
            for (int q = 0; q < d; ++q)
                lines[static_cast<std::size_t>(q)] = hermite_fn_all(mode_bound, r * om[q]);
            const std::size_t row = i * g.sph.size() + s;
            for (std::size_t mo = 0; mo < g.modes.size(); ++mo) {
                double v = 1.0;
                for (int q = 0; q < d; ++q)
                    v *= lines[static_cast<std::size_t>(q)]
                               [static_cast<std::size_t>(g.modes[mo][static_cast<std::size_t>(q)])];
                g.values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(mo)) = v;
            }
        }
    }
    return g;
}

inline Eigen::MatrixXd pack_bands(const RealGrid& g, const std::vector<HermiteBand>& bands) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g.modes.size()),
                                              static_cast<Eigen::Index>(bands.size()));
    for (std::size_t t = 0; t < bands.size(); ++t)
        for (const auto& [mu, val] : bands[t].coeffs) {
            const auto it = g.index.find(mu);
            require(it != g.index.end(), "pack_bands: mode outside the evaluation grid");
            c(it->second, static_cast<Eigen::Index>(t)) = val;
        }
    return c;
}

// inner[t][i] += sum_s sphere_w[s] * values(i * n_s + s, t)^2
inline void accumulate_sphere_square(const RealGrid& g, const Eigen::MatrixXd& vals,
                                     std::vector<std::vector<double>>& inner) {
    const std::size_t n_r = g.rad.size(), n_s = g.sph.size();
    for (std::size_t t = 0; t < static_cast<std::size_t>(vals.cols()); ++t) {
        const double* col = vals.col(static_cast<Eigen::Index>(t)).data();
        for (std::size_t i = 0; i < n_r; ++i) {
            double acc = 0.0;
            for (std::size_t s = 0; s < n_s; ++s)
                acc += g.sph.weights[s] * sqr(col[i * n_s + s]);
            inner[t][i] += acc;
        }
    }
}

inline TrialProfiles real_trial_profiles(OperatorTag tag, const ExperimentConfig& cfg) {
    require(cfg.dim >= 2 && cfg.dim <= 4,
            "norm_ratio_experiment: ambient dimension must be 2..4 for this family");
    require(cfg.cutoff >= 2 && cfg.trials >= 1, "norm_ratio_experiment: bad configuration");
    const int d = cfg.dim;
    const int mode_bound = cfg.cutoff + 1;        // first-order families raise the degree
    const int sphere_degree = 2 * (cfg.cutoff + 2);  // covers squares of raised bands
    const RealGrid grid =
        build_real_grid(d, mode_bound, cfg.n_radial, cfg.radial_lo, cfg.radial_hi, sphere_degree);
    const std::size_t n_r = grid.rad.size(), n_s = grid.sph.size();

    TrialProfiles tp;
    tp.tag = operator_tag_name(tag);
    tp.dim = d;
    tp.cutoff = cfg.cutoff;
    tp.trials = cfg.trials;
    tp.seed = cfg.seed;
    tp.alpha = 0.5 * d - 1.0;
    tp.n_radial = cfg.n_radial;
    tp.radial_lo = cfg.radial_lo;
    tp.radial_hi = cfg.radial_hi;
    tp.sphere_degree = sphere_degree;
    for (std::size_t i = 0; i < n_r; ++i) {
        tp.radii.push_back(grid.rad.node(i)[0]);
        tp.radial_weights.push_back(grid.rad.weights[i]);
    }

    // random bands: normal coefficients on |mu| <= cutoff, enumeration order
    const auto seeds = trial_seeds(cfg.seed, cfg.trials);
    std::vector<HermiteBand> fs(static_cast<std::size_t>(cfg.trials));
    for (int t = 0; t < cfg.trials; ++t) {
        std::mt19937_64 rng(seeds[static_cast<std::size_t>(t)]);
        std::normal_distribution<double> nd(0.0, 1.0);
        auto& f = fs[static_cast<std::size_t>(t)];
        f.d = d;
        f.cutoff = cfg.cutoff;
        for (const auto& mu : grid.modes)
            if (mi_order(mu) <= cfg.cutoff) f.coeffs[mu] = nd(rng);
    }

    auto blank = [&]() {
        return std::vector<std::vector<double>>(static_cast<std::size_t>(cfg.trials),
                                                std::vector<double>(n_r, 0.0));
    };
    tp.input_inner = blank();
    accumulate_sphere_square(grid, grid.values * pack_bands(grid, fs), tp.input_inner);

    if (tag == OperatorTag::riesz_vector) {
        TrialProfiles::Channel ch;
        ch.name = "riesz_vector";
        ch.inner = blank();
        for (int j = 0; j < d; ++j) {
            std::vector<HermiteBand> rj(static_cast<std::size_t>(cfg.trials));
            for (int t = 0; t < cfg.trials; ++t)
                rj[static_cast<std::size_t>(t)] =
                    hermite_riesz_spectral(fs[static_cast<std::size_t>(t)], j);
            accumulate_sphere_square(grid, grid.values * pack_bands(grid, rj), ch.inner);
        }
        tp.outputs.push_back(std::move(ch));
        return tp;
    }

    // remaining families act on the half-power inverse
    std::vector<HermiteBand> us(static_cast<std::size_t>(cfg.trials));
    for (int t = 0; t < cfg.trials; ++t)
        us[static_cast<std::size_t>(t)] = hermite_half_inverse(fs[static_cast<std::size_t>(t)]);

    if (tag == OperatorTag::weighted_half_inverse) {
        const Eigen::MatrixXd uvals = grid.values * pack_bands(grid, us);
        // sphere-weighted harmonic matrix: (n_s x n_harm), plus degree list
        std::vector<RealPoly> harmonics;
        std::vector<int> degrees;
        for (int m = 0; m <= cfg.cutoff; ++m) {
            const auto basis = real_harmonic_basis(d, m);
            for (const auto& e : basis.elems) {
                harmonics.push_back(e);
                degrees.push_back(m);
            }
        }
        Eigen::MatrixXd yw(static_cast<Eigen::Index>(n_s),
                           static_cast<Eigen::Index>(harmonics.size()));
        for (std::size_t s = 0; s < n_s; ++s) {
            const double* om = grid.sph.node(s);
            const std::vector<double> omega(om, om + d);
            for (std::size_t h = 0; h < harmonics.size(); ++h)
                yw(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(h)) =
                    grid.sph.weights[s] * rp_eval(harmonics[h], omega);
        }
        TrialProfiles::Channel ch;
        ch.name = "degree_over_radius";
        ch.inner = blank();
        for (int t = 0; t < cfg.trials; ++t) {
            Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                           Eigen::RowMajor>>
                ut(uvals.col(t).data(), static_cast<Eigen::Index>(n_r),
                   static_cast<Eigen::Index>(n_s));
            const Eigen::MatrixXd profiles = ut * yw;  // (n_r x n_harm)
            for (std::size_t i = 0; i < n_r; ++i) {
                const double r = tp.radii[i];
                double acc = 0.0;
                for (std::size_t h = 0; h < harmonics.size(); ++h)
                    acc += sqr(degrees[h] / r *
                               profiles(static_cast<Eigen::Index>(i),
                                        static_cast<Eigen::Index>(h)));
                ch.inner[static_cast<std::size_t>(t)][i] =
                    acc / sqr(calibrated::hecke_bochner_constant(d));
            }
        }
        tp.outputs.push_back(std::move(ch));
        return tp;
    }

    // gradient_aggregate / angular_aggregate need the coordinate derivatives
    const Eigen::MatrixXd uvals = grid.values * pack_bands(grid, us);
    std::vector<Eigen::MatrixXd> gvals;
    for (int q = 0; q < d; ++q) {
        std::vector<HermiteBand> gq(static_cast<std::size_t>(cfg.trials));
        for (int t = 0; t < cfg.trials; ++t)
            gq[static_cast<std::size_t>(t)] =
                hermite_derivative(us[static_cast<std::size_t>(t)], q);
        gvals.push_back(grid.values * pack_bands(grid, gq));
    }

    TrialProfiles::Channel ch;
    ch.name = tag == OperatorTag::gradient_aggregate ? "outward_derivative"
                                                     : "spherical_gradient";
    ch.inner = blank();
    for (int t = 0; t < cfg.trials; ++t) {
        for (std::size_t i = 0; i < n_r; ++i) {
            const double r = tp.radii[i];
            double acc = 0.0;
            for (std::size_t s = 0; s < n_s; ++s) {
                const std::size_t row = i * n_s + s;
                const double* om = grid.sph.node(s);
                double radial_part = 0.0, grad2 = 0.0;
                for (int q = 0; q < d; ++q) {
                    const double gq = gvals[static_cast<std::size_t>(q)](
                        static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(t));
                    radial_part += om[q] * gq;
                    grad2 += sqr(gq);
                }
                if (tag == OperatorTag::gradient_aggregate) {
                    const double uv = uvals(static_cast<Eigen::Index>(row),
                                            static_cast<Eigen::Index>(t));
                    acc += grid.sph.weights[s] * sqr(r * uv + radial_part);
                } else {
                    acc += grid.sph.weights[s] * (grad2 - sqr(radial_part));
                }
            }
            ch.inner[static_cast<std::size_t>(t)][i] = acc;
        }
    }
    tp.outputs.push_back(std::move(ch));
    return tp;
}

inline TrialProfiles laguerre_trial_profiles(const ExperimentConfig& cfg) {
    require(cfg.dim >= 2, "norm_ratio_experiment: half-line family needs dimension >= 2");
    require(cfg.max_modes >= 1 && cfg.trials >= 1 && cfg.cutoff >= 1,
            "norm_ratio_experiment: bad configuration");
    const double alpha0 = 0.5 * cfg.dim - 1.0;
    TrialProfiles tp;
    tp.tag = operator_tag_name(OperatorTag::laguerre_vector);
    tp.dim = cfg.dim;
    tp.cutoff = cfg.cutoff;
    tp.trials = cfg.trials;
    tp.seed = cfg.seed;
    tp.alpha = alpha0;
    tp.n_radial = cfg.n_radial;
    tp.radial_lo = cfg.radial_lo;
    tp.radial_hi = cfg.radial_hi;
    const auto rad = gauss_interval(cfg.n_radial, cfg.radial_lo, cfg.radial_hi);
    for (std::size_t i = 0; i < rad.size(); ++i) {
        tp.radii.push_back(rad.node(i)[0]);
        tp.radial_weights.push_back(rad.weights[i]);
    }

    const auto seeds = trial_seeds(cfg.seed, cfg.trials);
    tp.input_inner.assign(static_cast<std::size_t>(cfg.trials),
                          std::vector<double>(rad.size(), 0.0));
    TrialProfiles::Channel ch;
    ch.name = "laguerre_vector";
    ch.inner = tp.input_inner;
    for (int t = 0; t < cfg.trials; ++t) {
        std::mt19937_64 rng(seeds[static_cast<std::size_t>(t)]);
        std::normal_distribution<double> nd(0.0, 1.0);
        for (int m = 0; m < cfg.max_modes; ++m) {
            LaguerreBand band;
            band.alpha = alpha0 + m;
            band.cutoff = cfg.cutoff;
            for (int k = 0; k <= cfg.cutoff; ++k) band.coeffs[k] = nd(rng);
            for (std::size_t i = 0; i < rad.size(); ++i) {
                const double r = tp.radii[i];
                const double rm = std::pow(r, 2.0 * m);
                tp.input_inner[static_cast<std::size_t>(t)][i] +=
                    rm * sqr(laguerre_eval(band, r));
                ch.inner[static_cast<std::size_t>(t)][i] +=
                    rm * sqr(laguerre_riesz_value(band, r));
            }
        }
    }
    tp.outputs.push_back(std::move(ch));
    return tp;
}

inline SpecialBand random_special_band(int d, int cutoff, int max_bidegree,
                                       std::uint64_t seed) {
    SpecialBand f;
    f.d = d;
    f.cutoff = cutoff;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (const auto& mo : special_modes_upto(d, cutoff)) {
        if (mo.m + mo.n > max_bidegree) continue;
        const double re = nd(rng), im = nd(rng);
        f.coeffs[mo] = cplx(re, im);
    }
    return f;
}

inline TrialProfiles twisted_trial_profiles(OperatorTag tag, const ExperimentConfig& cfg) {
    require(cfg.dim >= 1 && cfg.dim <= 2,
            "norm_ratio_experiment: twisted families need complex dimension 1 or 2");
    require(cfg.trials >= 1, "norm_ratio_experiment: bad configuration");
    const int d = cfg.dim;
    const int cutoff = std::min(cfg.cutoff, 7);
    const int max_bidegree = 3;

    TrialProfiles tp;
    tp.tag = operator_tag_name(tag);
    tp.dim = d;
    tp.cutoff = cutoff;
    tp.trials = cfg.trials;
    tp.seed = cfg.seed;
    tp.alpha = d - 1.0;
    tp.n_radial = cfg.n_radial;
    tp.radial_lo = cfg.radial_lo;
    tp.radial_hi = cfg.radial_hi;
    const auto rad = gauss_interval(cfg.n_radial, cfg.radial_lo, cfg.radial_hi);
    for (std::size_t i = 0; i < rad.size(); ++i) {
        tp.radii.push_back(rad.node(i)[0]);
        tp.radial_weights.push_back(rad.weights[i]);
    }

    const auto seeds = trial_seeds(cfg.seed, cfg.trials);
    auto blank = [&]() {
        return std::vector<std::vector<double>>(static_cast<std::size_t>(cfg.trials),
                                                std::vector<double>(rad.size(), 0.0));
    };
    tp.input_inner = blank();

    if (tag == OperatorTag::twisted_riesz) {
        TrialProfiles::Channel ch;
        ch.name = "twisted_riesz";
        ch.inner = blank();
        for (int t = 0; t < cfg.trials; ++t) {
            const auto f =
                random_special_band(d, cutoff, max_bidegree, seeds[static_cast<std::size_t>(t)]);
            const CplxPoly qf = special_band_polynomial(f);
            const CplxPoly qu = special_band_polynomial(special_half_inverse(f));
            const auto in_prof = radial_square_profile(qf);
            std::vector<double> out_prof;
            for (int j = 0; j < d; ++j) {
                for (const auto& poly :
                     {annihilation_polynomial(qu, j), conjugate_annihilation_polynomial(qu, j)}) {
                    const auto prof = radial_square_profile(poly);
                    if (prof.size() > out_prof.size()) out_prof.resize(prof.size(), 0.0);
                    for (std::size_t k = 0; k < prof.size(); ++k) out_prof[k] += prof[k];
                }
            }
            for (std::size_t i = 0; i < rad.size(); ++i) {
                const double r = tp.radii[i];
                const double gauss = std::exp(-0.5 * r * r);
                tp.input_inner[static_cast<std::size_t>(t)][i] =
                    radial_profile_eval(in_prof, r) * gauss;
                ch.inner[static_cast<std::size_t>(t)][i] =
                    radial_profile_eval(out_prof, r) * gauss;
            }
        }
        tp.outputs.push_back(std::move(ch));
        return tp;
    }

    // square_terms: five channels on the holomorphic-type half of the input
    require(tag == OperatorTag::square_terms, "norm_ratio_experiment: unexpected family");
    const std::array<const char*, 5> names = {"outward_half", "inward_half", "pair_constant",
                                              "pair_constant_swapped", "signed_remainder"};
    for (int k = 0; k < 5; ++k) {
        TrialProfiles::Channel ch;
        ch.name = names[static_cast<std::size_t>(k)];
        ch.homogeneity = (k == 4) ? 2 : 1;
        ch.inner = blank();
        tp.outputs.push_back(std::move(ch));
    }
    for (int t = 0; t < cfg.trials; ++t) {
        const auto f =
            random_special_band(d, cutoff, max_bidegree, seeds[static_cast<std::size_t>(t)]);
        const SpecialBand fh = holomorphic_split(f).first;
        const auto in_prof = special_band_profiles(fh);
        const auto half_prof = special_half_inverse_profiles(fh);
        for (std::size_t i = 0; i < rad.size(); ++i) {
            const double r = tp.radii[i];
            double in_acc = 0.0;
            for (const auto& [key, F] : in_prof) {
                (void)key;
                in_acc += std::norm(F.value(r));
            }
            tp.input_inner[static_cast<std::size_t>(t)][i] = in_acc;
            double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0, a5 = 0.0;
            for (const auto& [key, F] : half_prof) {
                const cplx fv = F.value(r), dv = F.deriv(r);
                const double f2 = std::norm(fv);
                a1 += std::norm(0.5 * (dv + 0.5 * r * fv));
                a2 += std::norm(0.5 * (dv - 0.5 * r * fv));
                a3 += bigraded_pairing_constant(d, key[0], key[1]) / (r * r) * f2;
                a4 += bigraded_pairing_constant(d, key[1], key[0]) / (r * r) * f2;
                a5 += 0.5 * (key[0] - key[1]) * f2;
            }
            tp.outputs[0].inner[static_cast<std::size_t>(t)][i] = a1;
            tp.outputs[1].inner[static_cast<std::size_t>(t)][i] = a2;
            tp.outputs[2].inner[static_cast<std::size_t>(t)][i] = a3;
            tp.outputs[3].inner[static_cast<std::size_t>(t)][i] = a4;
            tp.outputs[4].inner[static_cast<std::size_t>(t)][i] = a5;
        }
    }
    return tp;
}

}  // namespace detail

inline TrialProfiles trial_profiles(OperatorTag tag, const ExperimentConfig& cfg) {
    switch (tag) {
        case OperatorTag::riesz_vector:
        case OperatorTag::gradient_aggregate:
        case OperatorTag::angular_aggregate:
        case OperatorTag::weighted_half_inverse:
            return detail::real_trial_profiles(tag, cfg);
        case OperatorTag::laguerre_vector:
            return detail::laguerre_trial_profiles(cfg);
        case OperatorTag::twisted_riesz:
        case OperatorTag::square_terms:
            return detail::twisted_trial_profiles(tag, cfg);
    }
    throw std::invalid_argument("trial_profiles: unknown operator family");
}

// Stage two: mixed norms and per-trial ratios for a given exponent and weight.
inline RatioReport ratio_report(const TrialProfiles& tp, double p, const WeightSpec& w,
                                bool allow_inadmissible = false) {
    require(p > 1.0, "ratio_report: exponent must exceed 1");
    RatioReport rep;
    rep.tag = tp.tag;
    rep.p = p;
    rep.alpha = tp.alpha;
    rep.weight_kind = w.kind_name();
    rep.weight_gamma = w.gamma;
    rep.dim = tp.dim;
    rep.cutoff = tp.cutoff;
    rep.trials = tp.trials;
    rep.seed = tp.seed;
    rep.n_radial = tp.n_radial;
    rep.radial_lo = tp.radial_lo;
    rep.radial_hi = tp.radial_hi;
    rep.sphere_degree = tp.sphere_degree;

    if (w.kind == WeightSpec::Kind::power) {
        rep.weight_admissible = power_weight_admissible(w.gamma, p, tp.alpha);
        if (!rep.weight_admissible) {
            const auto probe = ap_constant(w, p, tp.alpha, shrinking_interval_family(20));
            rep.weight_ap_bound = probe.constant;
            if (!allow_inadmissible) {
                const auto [lo, hi] = power_weight_admissible_range(p, tp.alpha);
                throw std::invalid_argument(
                    "ratio_report: weight exponent " + std::to_string(w.gamma) +
                    " is outside the averaged-product range (" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "); averaged product over the origin family reaches " +
                    std::to_string(probe.constant));
            }
        } else {
            rep.weight_ap_bound = ap_constant(w, p, tp.alpha).constant;
        }
    } else {
        rep.weight_ap_bound = ap_constant(w, p, tp.alpha).constant;
    }

    // weighted radial functional of one nonnegative profile: homogeneity 1
    // profiles hold |A(r)|^2 and integrate as inner^{p/2}; homogeneity 2
    // profiles hold the aggregate itself and integrate as inner^p.
    auto functional = [&](const std::vector<double>& inner, int homogeneity) {
        double acc = 0.0;
        for (std::size_t i = 0; i < tp.radii.size(); ++i) {
            const double r = tp.radii[i];
            const double v = std::max(0.0, inner[i]);
            acc += tp.radial_weights[i] * w.value(r) * std::pow(r, 2.0 * tp.alpha + 1.0) *
                   std::pow(v, homogeneity == 1 ? 0.5 * p : p);
        }
        return std::pow(acc, 1.0 / p);
    };

    for (int t = 0; t < tp.trials; ++t)
        rep.input_norms.push_back(
            functional(tp.input_inner[static_cast<std::size_t>(t)], 1));

    for (const auto& out : tp.outputs) {
        ChannelReport ch;
        ch.name = out.name;
        ch.homogeneity = out.homogeneity;
        for (int t = 0; t < tp.trials; ++t) {
            const double norm_val = functional(out.inner[static_cast<std::size_t>(t)],
                                               out.homogeneity);
            const double in = rep.input_norms[static_cast<std::size_t>(t)];
            require(in > 0.0, "ratio_report: degenerate input norm");
            ch.norms.push_back(norm_val);
            ch.ratios.push_back(norm_val / std::pow(in, out.homogeneity));
        }
        ch.max_ratio = *std::max_element(ch.ratios.begin(), ch.ratios.end());
        double acc = 0.0;
        for (double v : ch.ratios) acc += v;
        ch.mean_ratio = acc / static_cast<double>(ch.ratios.size());
        ch.quantile90 = detail::quantile_of(ch.ratios, 0.9);
        rep.max_ratio = std::max(rep.max_ratio, ch.max_ratio);
        rep.channels.push_back(std::move(ch));
    }
    return rep;
}

inline RatioReport norm_ratio_experiment(OperatorTag tag, const ExperimentConfig& cfg) {
    return ratio_report(trial_profiles(tag, cfg), cfg.p, cfg.weight, cfg.allow_inadmissible);
}

}  // namespace harmosc
