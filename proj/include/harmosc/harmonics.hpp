#pragma once

// Orthonormal bases of spherical harmonics (real, degree m) and of bigraded
// harmonics on the complex sphere (bidegree (m,n)). Construction: harmonic
// projection of monomials in lexicographic order, then Gram-Schmidt with the
// exact monomial sphere integrals; rank deficiency is detected by residual
// norm, so empty spaces (e.g. d = 1 with m n > 0) come out empty rather than
// asserted from a closed-form dimension.

#include "common.hpp"
#include "polynomials.hpp"

#include <Eigen/Dense>

namespace harmosc {

struct RealHarmonicBasis {
    int d = 0;  // ambient dimension
    int m = 0;  // degree
    std::vector<RealPoly> elems;
    int rank() const { return static_cast<int>(elems.size()); }
};

struct BigradedBasis {
    int d = 0;  // complex dimension
    int m = 0, n = 0;
    std::vector<CplxPoly> elems;
    int rank() const { return static_cast<int>(elems.size()); }
};

inline int real_harmonic_dim(int d, int m) {
    const double a = binomial(m + d - 1.0, d - 1.0);
    const double b = (m >= 2) ? binomial(m + d - 3.0, d - 1.0) : 0.0;
    return static_cast<int>(std::llround(a - b));
}

inline RealHarmonicBasis real_harmonic_basis(int d, int m) {
    require(d >= 2 && d <= 4, "real_harmonic_basis: ambient dimension must be 2..4");
    require(m >= 0 && m <= 16, "real_harmonic_basis: degree out of desk range");
    RealHarmonicBasis basis;
    basis.d = d;
    basis.m = m;

    const std::vector<MultiIndex> monos = multi_indices_exact(d, m);
    const int M = static_cast<int>(monos.size());
    std::map<MultiIndex, int> slot;
    for (int i = 0; i < M; ++i) slot[monos[static_cast<std::size_t>(i)]] = i;

    Eigen::MatrixXd G(M, M);
    for (int i = 0; i < M; ++i)
        for (int j = i; j < M; ++j) {
            MultiIndex s = monos[static_cast<std::size_t>(i)];
            for (std::size_t q = 0; q < s.size(); ++q) s[q] += monos[static_cast<std::size_t>(j)][q];
            G(i, j) = G(j, i) = sphere_monomial_integral(s);
        }

    std::vector<Eigen::VectorXd> accepted;
    for (int i = 0; i < M; ++i) {
        RealPoly mono;
        mono[monos[static_cast<std::size_t>(i)]] = 1.0;
        const RealPoly h = rp_harmonic_part(mono, d);
        Eigen::VectorXd v = Eigen::VectorXd::Zero(M);
        for (const auto& [e, c] : h) v(slot.at(e)) = c;

        double n2 = v.dot(G * v);
        if (n2 <= 1e-20) continue;
        v /= std::sqrt(n2);
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXd Gv = G * v;
            Eigen::VectorXd corr = Eigen::VectorXd::Zero(M);
            for (const auto& u : accepted) corr += u.dot(Gv) * u;
            v -= corr;
        }
        n2 = v.dot(G * v);
        if (n2 <= 1e-12) continue;
        v /= std::sqrt(n2);
        accepted.push_back(v);

        RealPoly elem;
        const double scale = v.cwiseAbs().maxCoeff();
        for (int q = 0; q < M; ++q)
            if (std::abs(v(q)) > 1e-14 * scale) elem[monos[static_cast<std::size_t>(q)]] = v(q);
        basis.elems.push_back(std::move(elem));
    }
    return basis;
}

inline BigradedBasis bigraded_harmonic_basis(int d, int m, int n) {
    require(d >= 1 && d <= 2, "bigraded_harmonic_basis: complex dimension must be 1 or 2");
    require(m >= 0 && n >= 0 && m + n <= 16, "bigraded_harmonic_basis: bidegree out of desk range");
    BigradedBasis basis;
    basis.d = d;
    basis.m = m;
    basis.n = n;

    const std::vector<MultiIndex> am = multi_indices_exact(d, m);
    const std::vector<MultiIndex> bn = multi_indices_exact(d, n);
    std::vector<BigradedKey> monos;
    for (const auto& a : am)
        for (const auto& b : bn) monos.push_back({a, b});
    const int M = static_cast<int>(monos.size());
    std::map<BigradedKey, int> slot;
    for (int i = 0; i < M; ++i) slot[monos[static_cast<std::size_t>(i)]] = i;

    // G_{ij} = int mono_i conj(mono_j) over S^{2d-1}; real symmetric entries,
    // stored complex so Eigen products against complex coefficient vectors work
    Eigen::MatrixXcd G(M, M);
    for (int i = 0; i < M; ++i)
        for (int j = i; j < M; ++j) {
            const auto& [ai, bi] = monos[static_cast<std::size_t>(i)];
            const auto& [aj, bj] = monos[static_cast<std::size_t>(j)];
            MultiIndex zg = ai, zh = bi;
            for (std::size_t q = 0; q < zg.size(); ++q) {
                zg[q] += bj[q];
                zh[q] += aj[q];
            }
            G(i, j) = G(j, i) = complex_sphere_monomial_integral(zg, zh);
        }

    std::vector<Eigen::VectorXcd> accepted;
    for (int i = 0; i < M; ++i) {
        CplxPoly mono;
        mono[monos[static_cast<std::size_t>(i)]] = 1.0;
        const CplxPoly h = cp_harmonic_part(mono, d);
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(M);
        for (const auto& [e, c] : h) v(slot.at(e)) = c;

        double n2 = std::real(v.dot(G * v));
        if (n2 <= 1e-20) continue;
        v /= std::sqrt(n2);
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXcd Gv = G * v;
            Eigen::VectorXcd corr = Eigen::VectorXcd::Zero(M);
            for (const auto& u : accepted) corr += u.dot(Gv) * u;
            v -= corr;
        }
        n2 = std::real(v.dot(G * v));
        if (n2 <= 1e-12) continue;
        v /= std::sqrt(n2);
        accepted.push_back(v);

        CplxPoly elem;
        const double scale = v.cwiseAbs().maxCoeff();
        for (int q = 0; q < M; ++q)
            if (std::abs(v(q)) > 1e-14 * scale) elem[monos[static_cast<std::size_t>(q)]] = v(q);
        basis.elems.push_back(std::move(elem));
    }
    return basis;
}

}  // namespace harmosc
