#pragma once

// Sparse polynomial arithmetic in d real variables and in (z, conj z) on C^d,
// harmonic projection by repeated Laplacian subtraction, and exact monomial
// integrals over unit spheres. Degrees stay at desk scale, so std::map keyed
// by exponent tuples is plenty.

#include "common.hpp"

#include <map>
#include <utility>

namespace harmosc {

// ---------------------------------------------------------------------------
// Real polynomials: exponent tuple -> coefficient.

using RealPoly = std::map<MultiIndex, double>;

inline void rp_add_scaled(RealPoly& a, const RealPoly& b, double s) {
    for (const auto& [e, c] : b) {
        double& slot = a[e];
        slot += s * c;
        if (std::abs(slot) < 1e-300) a.erase(e);
    }
}

inline int rp_degree(const RealPoly& p) {
    int deg = -1;
    for (const auto& [e, c] : p) deg = std::max(deg, mi_order(e));
    return deg;
}

inline RealPoly rp_partial(const RealPoly& p, int j) {
    RealPoly out;
    for (const auto& [e, c] : p) {
        const int ej = e[static_cast<std::size_t>(j)];
        if (ej == 0) continue;
        MultiIndex f = e;
        --f[static_cast<std::size_t>(j)];
        out[f] += c * ej;
    }
    return out;
}

inline RealPoly rp_laplacian(const RealPoly& p) {
    RealPoly out;
    for (const auto& [e, c] : p)
        for (std::size_t j = 0; j < e.size(); ++j) {
            const int ej = e[j];
            if (ej < 2) continue;
            MultiIndex f = e;
            f[j] -= 2;
            out[f] += c * ej * (ej - 1);
        }
    return out;
}

// p * |x|^2
inline RealPoly rp_mul_r2(const RealPoly& p) {
    RealPoly out;
    for (const auto& [e, c] : p)
        for (std::size_t j = 0; j < e.size(); ++j) {
            MultiIndex f = e;
            f[j] += 2;
            out[f] += c;
        }
    return out;
}

inline RealPoly rp_mul_coord(const RealPoly& p, int j) {
    RealPoly out;
    for (const auto& [e, c] : p) {
        MultiIndex f = e;
        ++f[static_cast<std::size_t>(j)];
        out[f] += c;
    }
    return out;
}

inline double rp_eval(const RealPoly& p, const std::vector<double>& x) {
    double v = 0.0;
    for (const auto& [e, c] : p) {
        double t = c;
        for (std::size_t j = 0; j < e.size(); ++j)
            for (int q = 0; q < e[j]; ++q) t *= x[j];
        v += t;
    }
    return v;
}

// Exact integral of x^e over the unit sphere S^{d-1} (surface measure).
inline double sphere_monomial_integral(const MultiIndex& e) {
    double num = 2.0, den_arg = 0.0;
    for (int ei : e) {
        if (ei % 2 != 0) return 0.0;
        num *= std::tgamma(0.5 * (ei + 1));
        den_arg += 0.5 * (ei + 1);
    }
    return num / std::tgamma(den_arg);
}

// Exact sphere inner product int P Q dsigma without forming the product poly.
inline double rp_sphere_ip(const RealPoly& p, const RealPoly& q) {
    double v = 0.0;
    for (const auto& [e, c] : p)
        for (const auto& [f, g] : q) {
            MultiIndex sum = e;
            for (std::size_t j = 0; j < f.size(); ++j) sum[j] += f[j];
            v += c * g * sphere_monomial_integral(sum);
        }
    return v;
}

// Harmonic component of a homogeneous polynomial of degree N in ambient
// dimension D: h = sum_j c_j r^{2j} Lap^j p with c_0 = 1 and
// c_j = -c_{j-1} / (2j (2N - 2j + D - 2)). The result is the unique harmonic
// degree-N polynomial with p - h divisible by r^2.
inline RealPoly rp_harmonic_part(const RealPoly& p, int D) {
    if (p.empty()) return p;
    const int N = rp_degree(p);
    for (const auto& [e, c] : p) require(mi_order(e) == N, "rp_harmonic_part: polynomial must be homogeneous");
    RealPoly h = p;
    RealPoly lap = p;
    double cj = 1.0;
    for (int j = 1; 2 * j <= N; ++j) {
        lap = rp_laplacian(lap);
        if (lap.empty()) break;
        cj *= -1.0 / (2.0 * j * (2.0 * N - 2.0 * j + D - 2.0));
        RealPoly term = lap;
        for (int q = 0; q < j; ++q) term = rp_mul_r2(term);
        rp_add_scaled(h, term, cj);
    }
    return h;
}

// Tangential derivative along coordinate j of the sphere restriction of a
// homogeneous polynomial, expressed again as a polynomial restriction:
// T_j p = r^2 d_j p - N x_j p.
inline RealPoly rp_tangential(const RealPoly& p, int j) {
    const int N = rp_degree(p);
    RealPoly out = rp_mul_r2(rp_partial(p, j));
    rp_add_scaled(out, rp_mul_coord(p, j), -static_cast<double>(N));
    return out;
}

// ---------------------------------------------------------------------------
// Bigraded polynomials on C^d: keys (alpha, beta) meaning z^alpha conj(z)^beta.

using BigradedKey = std::pair<MultiIndex, MultiIndex>;
using CplxPoly = std::map<BigradedKey, cplx>;

inline void cp_add_scaled(CplxPoly& a, const CplxPoly& b, cplx s) {
    for (const auto& [e, c] : b) {
        cplx& slot = a[e];
        slot += s * c;
        if (std::abs(slot) < 1e-300) a.erase(e);
    }
}

inline int cp_degree(const CplxPoly& p) {
    int deg = -1;
    for (const auto& [e, c] : p) deg = std::max(deg, mi_order(e.first) + mi_order(e.second));
    return deg;
}

inline CplxPoly cp_dz(const CplxPoly& p, int j) {
    CplxPoly out;
    for (const auto& [e, c] : p) {
        const int ej = e.first[static_cast<std::size_t>(j)];
        if (ej == 0) continue;
        BigradedKey f = e;
        --f.first[static_cast<std::size_t>(j)];
        out[f] += c * static_cast<double>(ej);
    }
    return out;
}

inline CplxPoly cp_dzbar(const CplxPoly& p, int j) {
    CplxPoly out;
    for (const auto& [e, c] : p) {
        const int ej = e.second[static_cast<std::size_t>(j)];
        if (ej == 0) continue;
        BigradedKey f = e;
        --f.second[static_cast<std::size_t>(j)];
        out[f] += c * static_cast<double>(ej);
    }
    return out;
}

// Real-coordinate partials through z_j = x_j + i y_j.
inline CplxPoly cp_dx(const CplxPoly& p, int j) {
    CplxPoly out = cp_dz(p, j);
    cp_add_scaled(out, cp_dzbar(p, j), 1.0);
    return out;
}
inline CplxPoly cp_dy(const CplxPoly& p, int j) {
    CplxPoly out;
    cp_add_scaled(out, cp_dz(p, j), cplx(0.0, 1.0));
    cp_add_scaled(out, cp_dzbar(p, j), cplx(0.0, -1.0));
    return out;
}

// Full Laplacian on R^{2d}: 4 sum_j d_{z_j} d_{conj z_j}.
inline CplxPoly cp_laplacian(const CplxPoly& p) {
    CplxPoly out;
    for (const auto& [e, c] : p)
        for (std::size_t j = 0; j < e.first.size(); ++j) {
            const int aj = e.first[j], bj = e.second[j];
            if (aj == 0 || bj == 0) continue;
            BigradedKey f = e;
            --f.first[j];
            --f.second[j];
            out[f] += c * 4.0 * static_cast<double>(aj) * static_cast<double>(bj);
        }
    return out;
}

inline CplxPoly cp_mul_zsq(const CplxPoly& p) {  // p * |z|^2
    CplxPoly out;
    for (const auto& [e, c] : p)
        for (std::size_t j = 0; j < e.first.size(); ++j) {
            BigradedKey f = e;
            ++f.first[j];
            ++f.second[j];
            out[f] += c;
        }
    return out;
}

inline CplxPoly cp_mul_z(const CplxPoly& p, int j) {
    CplxPoly out;
    for (const auto& [e, c] : p) {
        BigradedKey f = e;
        ++f.first[static_cast<std::size_t>(j)];
        out[f] += c;
    }
    return out;
}

inline CplxPoly cp_mul_zbar(const CplxPoly& p, int j) {
    CplxPoly out;
    for (const auto& [e, c] : p) {
        BigradedKey f = e;
        ++f.second[static_cast<std::size_t>(j)];
        out[f] += c;
    }
    return out;
}

inline CplxPoly cp_conj(const CplxPoly& p) {
    CplxPoly out;
    for (const auto& [e, c] : p) out[{e.second, e.first}] = std::conj(c);
    return out;
}

inline cplx cp_eval(const CplxPoly& p, const std::vector<cplx>& z) {
    cplx v = 0.0;
    for (const auto& [e, c] : p) {
        cplx t = c;
        for (std::size_t j = 0; j < z.size(); ++j) {
            for (int q = 0; q < e.first[j]; ++q) t *= z[j];
            for (int q = 0; q < e.second[j]; ++q) t *= std::conj(z[j]);
        }
        v += t;
    }
    return v;
}

// Exact integral of z^g conj(z)^h over the unit sphere S^{2d-1}: zero unless
// g == h, else 2 pi^d g! / (d - 1 + |g|)!.
inline double complex_sphere_monomial_integral(const MultiIndex& g, const MultiIndex& h) {
    if (g != h) return 0.0;
    const int d = static_cast<int>(g.size());
    double logv = d * std::log(pi) + std::log(2.0);
    for (int gi : g) logv += std::lgamma(gi + 1.0);
    logv -= std::lgamma(d + static_cast<double>(mi_order(g)));
    return std::exp(logv);
}

// Hermitian sphere inner product int P conj(Q) dsigma.
inline cplx cp_sphere_ip(const CplxPoly& p, const CplxPoly& q) {
    cplx v = 0.0;
    for (const auto& [e, c] : p)
        for (const auto& [f, g] : q) {
            // term z^{a+b'} conj(z)^{b+a'} where e = (a,b), f = (a',b')
            MultiIndex zg = e.first, zh = e.second;
            for (std::size_t j = 0; j < zg.size(); ++j) {
                zg[j] += f.second[j];
                zh[j] += f.first[j];
            }
            const double I = complex_sphere_monomial_integral(zg, zh);
            if (I != 0.0) v += c * std::conj(g) * I;
        }
    return v;
}

inline CplxPoly cp_harmonic_part(const CplxPoly& p, int d_complex) {
    if (p.empty()) return p;
    const int N = cp_degree(p);
    for (const auto& [e, c] : p)
        require(mi_order(e.first) + mi_order(e.second) == N, "cp_harmonic_part: polynomial must be homogeneous");
    const int D = 2 * d_complex;
    CplxPoly h = p;
    CplxPoly lap = p;
    double cj = 1.0;
    for (int j = 1; 2 * j <= N; ++j) {
        lap = cp_laplacian(lap);
        if (lap.empty()) break;
        cj *= -1.0 / (2.0 * j * (2.0 * N - 2.0 * j + D - 2.0));
        CplxPoly term = lap;
        for (int q = 0; q < j; ++q) term = cp_mul_zsq(term);
        cp_add_scaled(h, term, cj);
    }
    return h;
}

}  // namespace harmosc
