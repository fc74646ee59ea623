#pragma once

// Band-limited functions in the three eigenbases, with exact expansion and
// synthesis. "Band-limited" means finitely many modes below a stated cutoff;
// for such inputs the expansion quadratures below are exact up to roundoff
// (polynomial-times-Gaussian integrands at matching quadrature orders), so
// spectral operator routes built on these types serve as ground truth.
//
// Cutoff conventions (all in "polynomial degree" units):
//   hermite(d):        |mu| <= cutoff
//   laguerre(alpha):   k <= cutoff
//   special(d):        m + n + 2k <= cutoff  (bigraded (m,n), radial index k)

#include <functional>
#include <map>
#include <tuple>

#include "common.hpp"
#include "harmonics.hpp"
#include "quadrature.hpp"
#include "special_functions.hpp"

namespace harmosc {

// ---------------------------------------------------------------------------
// Oscillator eigenbasis on R^d: products of Hermite functions.

struct HermiteBand {
    int d = 1;
    int cutoff = 0;
    std::map<MultiIndex, double> coeffs;
};

inline double band_norm2(const HermiteBand& f) {
    double acc = 0.0;
    for (const auto& [mu, c] : f.coeffs) {
        (void)mu;
        acc += c * c;
    }
    return acc;
}

inline double hermite_eval(const HermiteBand& f, const std::vector<double>& x) {
    require(x.size() == static_cast<std::size_t>(f.d), "hermite_eval: dimension mismatch");
    int K = 0;
    for (const auto& [mu, c] : f.coeffs) {
        (void)c;
        for (int e : mu) K = std::max(K, e);
    }
    std::vector<std::vector<double>> h(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) h[j] = hermite_fn_all(K, x[j]);
    double acc = 0.0;
    for (const auto& [mu, c] : f.coeffs) {
        double prod = c;
        for (std::size_t j = 0; j < x.size(); ++j) prod *= h[j][mu[j]];
        acc += prod;
    }
    return acc;
}

// Exact expansion by tensor Gauss-Hermite: for f with polynomial part of
// degree <= cutoff, f * Phi_mu * e^{|x|^2} is a polynomial of degree
// <= 2*cutoff, integrated exactly with cutoff+1 nodes per axis.
inline HermiteBand hermite_expand(const std::function<double(const std::vector<double>&)>& f,
                                  int d, int cutoff) {
    require(d >= 1 && cutoff >= 0, "hermite_expand: bad arguments");
    HermiteBand out;
    out.d = d;
    out.cutoff = cutoff;
    const auto gh = gauss_hermite(cutoff + 1);
    const auto modes = multi_indices_upto(d, cutoff);
    const std::size_t n = gh.size();

    // per-axis eigenfunction values at nodes
    std::vector<std::vector<double>> hval(n);
    for (std::size_t i = 0; i < n; ++i) hval[i] = hermite_fn_all(cutoff, gh.node(i)[0]);

    std::vector<double> acc(modes.size(), 0.0);
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    std::vector<double> x(static_cast<std::size_t>(d));
    while (true) {
        double w = 1.0, x2 = 0.0;
        for (int j = 0; j < d; ++j) {
            x[j] = gh.node(idx[j])[0];
            w *= gh.weights[idx[j]];
            x2 += x[j] * x[j];
        }
        const double fe = f(x) * std::exp(x2) * w;
        if (fe != 0.0) {
            for (std::size_t mi = 0; mi < modes.size(); ++mi) {
                double prod = fe;
                for (int j = 0; j < d; ++j) prod *= hval[idx[j]][modes[mi][j]];
                acc[mi] += prod;
            }
        }
        int j = 0;
        for (; j < d; ++j) {
            if (++idx[j] < n) break;
            idx[j] = 0;
        }
        if (j == d) break;
    }
    for (std::size_t mi = 0; mi < modes.size(); ++mi)
        if (std::abs(acc[mi]) > 1e-300) out.coeffs[modes[mi]] = acc[mi];
    return out;
}

// ---------------------------------------------------------------------------
// Half-line eigenbasis of type alpha: psi_k, orthonormal against r^{2a+1} dr.

struct LaguerreBand {
    double alpha = 0.0;
    int cutoff = 0;
    std::map<int, double> coeffs;
};

inline double band_norm2(const LaguerreBand& f) {
    double acc = 0.0;
    for (const auto& [k, c] : f.coeffs) {
        (void)k;
        acc += c * c;
    }
    return acc;
}

inline double laguerre_eval(const LaguerreBand& f, double r) {
    double acc = 0.0;
    for (const auto& [k, c] : f.coeffs) acc += c * psi(k, f.alpha, r);
    return acc;
}

// Exact expansion: substituting x = r^2 turns the coefficient integral into a
// Gauss-Laguerre(alpha) form, exact for band-limited inputs.
inline LaguerreBand laguerre_expand(const std::function<double(double)>& f, double alpha,
                                    int cutoff) {
    require(cutoff >= 0, "laguerre_expand: bad arguments");
    LaguerreBand out;
    out.alpha = alpha;
    out.cutoff = cutoff;
    const auto gl = gauss_laguerre(cutoff + 1, alpha);
    for (int k = 0; k <= cutoff; ++k) {
        const double c = 0.5 * gl.integrate([&](double x) {
            const double r = std::sqrt(x);
            return f(r) * psi(k, alpha, r) * std::exp(x);
        });
        if (std::abs(c) > 1e-300) out.coeffs[k] = c;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Twisted eigenbasis on C^d: for a bigraded spherical harmonic Y^j of bidegree
// (m,n) and radial index k, the mode is
//   e_{m,n,j,k}(z) = P_j(z) * phi^delta_k(|z|),   delta = d + m + n - 1,
// where P_j = r^{m+n} Y^j is the solid harmonic. These are orthonormal in
// L^2(C^d) and satisfy L e = (2(k+m) + d) e.

struct SpecialMode {
    int m = 0, n = 0, j = 0, k = 0;
    friend bool operator<(const SpecialMode& a, const SpecialMode& b) {
        return std::tie(a.m, a.n, a.j, a.k) < std::tie(b.m, b.n, b.j, b.k);
    }
    friend bool operator==(const SpecialMode& a, const SpecialMode& b) {
        return std::tie(a.m, a.n, a.j, a.k) == std::tie(b.m, b.n, b.j, b.k);
    }
};

inline double special_eigenvalue(int d, const SpecialMode& mo) { return 2.0 * (mo.k + mo.m) + d; }

struct SpecialBand {
    int d = 1;  // complex dimension
    int cutoff = 0;
    std::map<SpecialMode, cplx> coeffs;
};

inline double band_norm2(const SpecialBand& f) {
    double acc = 0.0;
    for (const auto& [mo, c] : f.coeffs) {
        (void)mo;
        acc += std::norm(c);
    }
    return acc;
}

inline std::vector<SpecialMode> special_modes_upto(int d, int cutoff) {
    std::vector<SpecialMode> out;
    for (int m = 0; m <= cutoff; ++m) {
        for (int n = 0; m + n <= cutoff; ++n) {
            if (d == 1 && m > 0 && n > 0) continue;  // H_{m,n}(C^1) = 0 unless mn = 0
            const auto basis = bigraded_harmonic_basis(d, m, n);
            for (int j = 0; j < basis.rank(); ++j)
                for (int k = 0; 2 * k + m + n <= cutoff; ++k)
                    out.push_back(SpecialMode{m, n, j, k});
        }
    }
    return out;
}

inline cplx special_mode_eval(const BigradedBasis& basis, const SpecialMode& mo,
                              const std::vector<cplx>& z) {
    const double delta = basis.d + mo.m + mo.n - 1.0;
    double r2 = 0.0;
    for (const auto& zj : z) r2 += std::norm(zj);
    return cp_eval(basis.elems[static_cast<std::size_t>(mo.j)], z) *
           phi_small(mo.k, delta, std::sqrt(r2));
}

inline cplx special_eval(const SpecialBand& f, const std::vector<cplx>& z) {
    require(z.size() == static_cast<std::size_t>(f.d), "special_eval: dimension mismatch");
    cplx acc = 0.0;
    int cur_m = -1, cur_n = -1;
    BigradedBasis basis;
    for (const auto& [mo, c] : f.coeffs) {
        if (mo.m != cur_m || mo.n != cur_n) {
            basis = bigraded_harmonic_basis(f.d, mo.m, mo.n);
            cur_m = mo.m;
            cur_n = mo.n;
        }
        acc += c * special_mode_eval(basis, mo, z);
    }
    return acc;
}

// Precompiled form for evaluation-heavy quadrature loops: the angular
// polynomials are resolved once so repeated evaluation avoids rebuilding the
// bigraded bases.
struct CompiledSpecialMode {
    CplxPoly poly;
    double delta = 0.0;
    int k = 0;
    cplx coeff;
};

inline std::vector<CompiledSpecialMode> special_compile(const SpecialBand& f) {
    std::vector<CompiledSpecialMode> out;
    out.reserve(f.coeffs.size());
    int cur_m = -1, cur_n = -1;
    BigradedBasis basis;
    for (const auto& [mo, c] : f.coeffs) {
        if (mo.m != cur_m || mo.n != cur_n) {
            basis = bigraded_harmonic_basis(f.d, mo.m, mo.n);
            cur_m = mo.m;
            cur_n = mo.n;
        }
        out.push_back({basis.elems[static_cast<std::size_t>(mo.j)],
                       f.d + mo.m + mo.n - 1.0, mo.k, c});
    }
    return out;
}

inline cplx special_eval_compiled(const std::vector<CompiledSpecialMode>& modes,
                                  const std::vector<cplx>& z) {
    double r2 = 0.0;
    for (const auto& zj : z) r2 += std::norm(zj);
    const double rho = std::sqrt(r2);
    cplx acc = 0.0;
    for (const auto& mode : modes)
        acc += mode.coeff * cp_eval(mode.poly, z) * phi_small(mode.k, mode.delta, rho);
    return acc;
}

// Expansion: sphere quadrature separates the bigraded angular families
// exactly; the radial coefficient integral becomes Gauss-Laguerre(delta)
// after u = r^2/2. Both stages are exact for band-limited inputs.
inline SpecialBand special_expand(const std::function<cplx(const std::vector<cplx>&)>& f, int d,
                                  int cutoff) {
    require(d >= 1 && cutoff >= 0, "special_expand: bad arguments");
    SpecialBand out;
    out.d = d;
    out.cutoff = cutoff;
    const auto sph = complex_sphere_rule(d, 2 * cutoff + 2);
    const int n_r = cutoff + 2;

    for (int m = 0; m <= cutoff; ++m) {
        for (int n = 0; m + n <= cutoff; ++n) {
            if (d == 1 && m > 0 && n > 0) continue;
            const auto basis = bigraded_harmonic_basis(d, m, n);
            if (basis.rank() == 0) continue;
            const double delta = d + m + n - 1.0;
            const auto gl = gauss_laguerre(n_r, delta);

            for (std::size_t ir = 0; ir < gl.size(); ++ir) {
                const double u = gl.node(ir)[0];
                const double r = std::sqrt(2.0 * u);
                // angular inner products at this radius
                std::vector<cplx> ang(static_cast<std::size_t>(basis.rank()), 0.0);
                for (std::size_t is = 0; is < sph.size(); ++is) {
                    auto zeta = complex_node(sph, is);
                    std::vector<cplx> zz(zeta.size());
                    for (std::size_t q = 0; q < zeta.size(); ++q) zz[q] = r * zeta[q];
                    const cplx fv = f(zz) * sph.weights[is];
                    if (fv == cplx(0.0)) continue;
                    for (int j = 0; j < basis.rank(); ++j)
                        ang[static_cast<std::size_t>(j)] +=
                            fv * std::conj(cp_eval(basis.elems[static_cast<std::size_t>(j)],
                                                   zeta));
                }
                // radial accumulation: coefficient gets
                //   2^delta * w_ir * e^u * [A_j(r)/r^{m+n}] * phi_k(r)
                const double scale =
                    std::pow(2.0, delta) * gl.weights[ir] * std::exp(u) / std::pow(r, m + n);
                for (int j = 0; j < basis.rank(); ++j) {
                    if (ang[static_cast<std::size_t>(j)] == cplx(0.0)) continue;
                    for (int k = 0; 2 * k + m + n <= cutoff; ++k) {
                        const cplx add = scale * ang[static_cast<std::size_t>(j)] *
                                         phi_small(k, delta, r);
                        auto& slot = out.coeffs[SpecialMode{m, n, j, k}];
                        slot += add;
                    }
                }
            }
        }
    }
    // drop numerically-zero entries
    for (auto it = out.coeffs.begin(); it != out.coeffs.end();) {
        if (std::abs(it->second) < 1e-12)
            it = out.coeffs.erase(it);
        else
            ++it;
    }
    return out;
}

}  // namespace harmosc
