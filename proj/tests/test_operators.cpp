// Operator layer: expansions, ladders, semigroups, half powers, Riesz
// transforms (spectral vs quadrature routes), twisted convolution, rotations,
// and finite-difference eigenvalue confirmations.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <harmosc/operators.hpp>

#include "oracles.hpp"

using harmosc::cplx;
using harmosc::MultiIndex;

namespace {

harmosc::HermiteBand unit_hermite(int d, const MultiIndex& mu) {
    harmosc::HermiteBand f;
    f.d = d;
    f.cutoff = harmosc::mi_order(mu);
    f.coeffs[mu] = 1.0;
    return f;
}

harmosc::SpecialBand unit_special(int d, const harmosc::SpecialMode& mo) {
    harmosc::SpecialBand f;
    f.d = d;
    f.cutoff = mo.m + mo.n + 2 * mo.k;
    f.coeffs[mo] = 1.0;
    return f;
}

double rel_gap(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

// L2 norm squared over C^1 of a sampled field, by polar quadrature exact for
// band-limited integrands: radial Gauss-Laguerre in u = r^2/2, circle rule.
double cfield_norm2(const std::function<cplx(const std::vector<cplx>&)>& f, int n_radial,
                    int circle_degree) {
    const auto gl = harmosc::gauss_laguerre(n_radial, 0.0);
    const auto circ = harmosc::complex_sphere_rule(1, circle_degree);
    double acc = 0.0;
    for (std::size_t iu = 0; iu < gl.size(); ++iu) {
        const double u = gl.node(iu)[0];
        const double r = std::sqrt(2.0 * u);
        double ang = 0.0;
        for (std::size_t is = 0; is < circ.size(); ++is) {
            const auto zeta = harmosc::complex_node(circ, is);
            ang += circ.weights[is] * std::norm(f({r * zeta[0]}));
        }
        acc += gl.weights[iu] * std::exp(u) * ang;
    }
    return acc;
}

}  // namespace

TEST_CASE("oscillator-basis expansion: orthonormality, round trip, Parseval", "[operators]") {
    // expanding a pure mode gives a unit coefficient and nothing else
    const MultiIndex mu{2, 1};
    const auto mode = unit_hermite(2, mu);
    auto g = [&](const std::vector<double>& x) { return hermite_eval(mode, x); };
    const auto ex = harmosc::hermite_expand(g, 2, 4);
    for (const auto& [nu, c] : ex.coeffs) {
        if (nu == mu)
            REQUIRE(std::abs(c - 1.0) < 1e-10);
        else
            REQUIRE(std::abs(c) < 1e-10);
    }
    REQUIRE(ex.coeffs.count(mu) == 1);

    // random 5-mode synthesis round-trips through expand
    oracles::Rng rng(401);
    harmosc::HermiteBand f;
    f.d = 2;
    f.cutoff = 4;
    const std::vector<MultiIndex> support{{0, 0}, {1, 2}, {3, 0}, {2, 2}, {0, 4}};
    for (const auto& m : support) f.coeffs[m] = rng.uniform();
    const auto back =
        harmosc::hermite_expand([&](const std::vector<double>& x) { return hermite_eval(f, x); },
                                2, 4);
    for (const auto& m : support) REQUIRE(std::abs(back.coeffs.at(m) - f.coeffs.at(m)) < 1e-10);
    for (const auto& [nu, c] : back.coeffs)
        if (!f.coeffs.count(nu)) REQUIRE(std::abs(c) < 1e-10);

    // Parseval: quadrature L2 norm matches the coefficient sum of squares
    const auto gh = harmosc::gauss_hermite(12);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < gh.size(); ++i) {
        const double xi = gh.node(i)[0];
        for (std::size_t j = 0; j < gh.size(); ++j) {
            const double xj = gh.node(j)[0];
            const double v = hermite_eval(f, {xi, xj});
            norm2 += gh.weights[i] * gh.weights[j] * v * v * std::exp(xi * xi + xj * xj);
        }
    }
    REQUIRE(rel_gap(norm2, band_norm2(f)) < 1e-10);
}

TEST_CASE("half-line basis expansion round trip", "[operators]") {
    const double alpha = 0.75;
    const auto ex = harmosc::laguerre_expand(
        [&](double r) { return harmosc::psi(2, alpha, r); }, alpha, 4);
    for (const auto& [k, c] : ex.coeffs) {
        if (k == 2)
            REQUIRE(std::abs(c - 1.0) < 1e-10);
        else
            REQUIRE(std::abs(c) < 1e-10);
    }

    oracles::Rng rng(402);
    harmosc::LaguerreBand f;
    f.alpha = alpha;
    f.cutoff = 5;
    for (int k : {0, 1, 3, 5}) f.coeffs[k] = rng.uniform();
    const auto back = harmosc::laguerre_expand(
        [&](double r) { return laguerre_eval(f, r); }, alpha, 5);
    for (const auto& [k, c] : f.coeffs) REQUIRE(std::abs(back.coeffs.at(k) - c) < 1e-10);

    // Parseval against the radial measure r^{2a+1} dr
    const auto gl = harmosc::gauss_laguerre(12, alpha);
    const double norm2 = 0.5 * gl.integrate([&](double u) {
        const double v = laguerre_eval(f, std::sqrt(u));
        return v * v * std::exp(u);
    });
    REQUIRE(rel_gap(norm2, band_norm2(f)) < 1e-10);
}

TEST_CASE("special-basis expansion round trip and Parseval", "[operators]") {
    oracles::Rng rng(403);
    harmosc::SpecialBand f;
    f.d = 1;
    f.cutoff = 4;
    const auto modes = harmosc::special_modes_upto(1, 4);
    REQUIRE(modes.size() >= 6);
    for (std::size_t i = 0; i < modes.size(); i += 2) f.coeffs[modes[i]] = rng.uniform_c();

    auto field = [&](const std::vector<cplx>& z) { return special_eval(f, z); };
    const auto back = harmosc::special_expand(field, 1, 4);
    for (const auto& [mo, c] : f.coeffs) {
        REQUIRE(back.coeffs.count(mo) == 1);
        REQUIRE(std::abs(back.coeffs.at(mo) - c) < 1e-10);
    }
    for (const auto& [mo, c] : back.coeffs)
        if (!f.coeffs.count(mo)) REQUIRE(std::abs(c) < 1e-10);

    REQUIRE(rel_gap(cfield_norm2(field, 8, 12), band_norm2(f)) < 1e-10);
}

TEST_CASE("ladder operators fix the oscillator algebra", "[operators]") {
    // ground state is annihilated
    const auto ground = unit_hermite(1, {0});
    REQUIRE(harmosc::hermite_ladder(ground, 0, false).coeffs.empty());

    // (d/dx + x) h_1 = sqrt(2) h_0 pointwise, finite-difference derivative
    const auto h1 = unit_hermite(1, {1});
    const auto h0 = unit_hermite(1, {0});
    for (double x : {-1.4, -0.3, 0.6, 1.8}) {
        const double lhs =
            oracles::fd_first([&](double s) { return hermite_eval(h1, {s}); }, x, 1e-4) +
            x * hermite_eval(h1, {x});
        REQUIRE(std::abs(lhs - std::sqrt(2.0) * hermite_eval(h0, {x})) < 1e-7);
    }

    // ladder coefficients agree with the operator identity
    //   (1/2) sum_j (A_j A_j* + A_j* A_j) = diagonal with eigenvalue 2|mu|+d
    for (const MultiIndex mu : {MultiIndex{1, 2}, MultiIndex{0, 3}, MultiIndex{2, 0}}) {
        const auto f = unit_hermite(2, mu);
        harmosc::HermiteBand acc;
        acc.d = 2;
        acc.cutoff = f.cutoff;
        for (int j = 0; j < 2; ++j) {
            const auto ann_cre = harmosc::hermite_ladder(harmosc::hermite_ladder(f, j, true), j, false);
            const auto cre_ann = harmosc::hermite_ladder(harmosc::hermite_ladder(f, j, false), j, true);
            acc = band_add(acc, band_add(ann_cre, cre_ann, 0.5, 0.5), 1.0, 1.0);
        }
        const double lambda = 2.0 * harmosc::mi_order(mu) + 2.0;
        REQUIRE(acc.coeffs.size() == 1);
        REQUIRE(std::abs(acc.coeffs.at(mu) - lambda) < 1e-12);
    }

    // derivative + position recombine into the annihilation map (the
    // creation parts cancel, possibly leaving explicit zero entries)
    const auto f = unit_hermite(2, {2, 1});
    const auto viaparts = band_add(harmosc::hermite_derivative(f, 0),
                                   harmosc::hermite_position(f, 0), 1.0, 1.0);
    const auto direct = harmosc::hermite_ladder(f, 0, false);
    for (const auto& [m, c] : viaparts.coeffs) {
        const auto hit = direct.coeffs.find(m);
        const double want = (hit == direct.coeffs.end()) ? 0.0 : hit->second;
        REQUIRE(std::abs(c - want) < 1e-14);
    }
    for (const auto& [m, c] : direct.coeffs) REQUIRE(viaparts.coeffs.count(m) == 1);
}

TEST_CASE("oscillator heat semigroup: spectral and kernel routes agree", "[operators]") {
    // spectral factor on a pure mode
    {
        const auto f = unit_hermite(2, {1, 0});
        const auto ft = harmosc::hermite_heat(f, 0.4);
        REQUIRE(rel_gap(ft.coeffs.at({1, 0}), std::exp(-4.0 * 0.4)) < 1e-15);
        REQUIRE_THROWS_AS(harmosc::hermite_heat(f, 0.0), std::invalid_argument);
    }

    // d=1, f = h_0 + h_3, t = 0.3: kernel quadrature vs exact spectral answer
    harmosc::HermiteBand f;
    f.d = 1;
    f.cutoff = 3;
    f.coeffs[{0}] = 1.0;
    f.coeffs[{3}] = 1.0;
    const double t = 0.3;
    const auto ft = harmosc::hermite_heat(f, t);
    const std::vector<std::vector<double>> pts{{-1.3}, {0.2}, {0.7}, {1.9}};
    const auto vals = harmosc::hermite_heat_kernel_values(f, t, pts);
    for (std::size_t i = 0; i < pts.size(); ++i)
        REQUIRE(std::abs(vals[i] - hermite_eval(ft, pts[i])) < 1e-7);
}

TEST_CASE("twisted heat semigroup via twisted convolution", "[operators]") {
    const auto f = unit_special(1, {0, 0, 0, 1});
    const double t = 0.5;
    const auto ft = harmosc::special_heat_band(f, t);
    REQUIRE(rel_gap(std::abs(ft.coeffs.at({0, 0, 0, 1})), std::exp(-3.0 * t)) < 1e-14);

    auto ffield = [&](const std::vector<cplx>& z) { return special_eval(f, z); };
    auto ptfield = [&](const std::vector<cplx>& z) {
        return cplx(harmosc::special_heat_kernel(1, t, std::abs(z[0])), 0.0);
    };
    for (const cplx z0 : {cplx(0.3, 0.4), cplx(-0.8, 0.1), cplx(1.1, -0.6)}) {
        const cplx conv = harmosc::twisted_convolve(ffield, ptfield, 1, {z0});
        const cplx expect = std::exp(-3.0 * t) * special_eval(f, {z0});
        REQUIRE(std::abs(conv - expect) < 1e-6 * std::max(1.0, std::abs(expect)));
    }
}

TEST_CASE("negative half power: subordination route matches the spectral one", "[operators]") {
    // oscillator: pure mode picks up (2|mu|+d)^{-1/2}
    {
        const auto f = unit_hermite(2, {1, 1});
        const auto h = harmosc::hermite_half_inverse(f);
        REQUIRE(rel_gap(h.coeffs.at({1, 1}), 1.0 / std::sqrt(6.0)) < 1e-15);
        const auto hs = harmosc::hermite_half_inverse_subordinated(f);
        REQUIRE(std::abs(hs.coeffs.at({1, 1}) - h.coeffs.at({1, 1})) < 1e-8);
    }

    // half-line type alpha = 1, f = psi_0 + 2 psi_2
    harmosc::LaguerreBand g;
    g.alpha = 1.0;
    g.cutoff = 2;
    g.coeffs[0] = 1.0;
    g.coeffs[2] = 2.0;
    const auto spec = harmosc::laguerre_half_inverse(g);
    const auto sub = harmosc::laguerre_half_inverse_subordinated(g);
    for (const auto& [k, c] : spec.coeffs) REQUIRE(std::abs(sub.coeffs.at(k) - c) < 1e-8);

    // linearity on random 4-mode inputs
    oracles::Rng rng(404);
    harmosc::HermiteBand a, b;
    a.d = b.d = 1;
    a.cutoff = b.cutoff = 6;
    for (int k : {0, 2, 3, 6}) a.coeffs[{k}] = rng.uniform();
    for (int k : {1, 2, 4, 5}) b.coeffs[{k}] = rng.uniform();
    const auto lhs = harmosc::hermite_half_inverse(band_add(a, b, 2.0, -3.0));
    const auto rhs = band_add(harmosc::hermite_half_inverse(a),
                              harmosc::hermite_half_inverse(b), 2.0, -3.0);
    for (const auto& [m, c] : lhs.coeffs) REQUIRE(std::abs(rhs.coeffs.at(m) - c) < 1e-14);
}

TEST_CASE("oscillator Riesz transform: spectral route and contractivity", "[operators]") {
    // ground state is annihilated
    REQUIRE(harmosc::hermite_riesz_spectral(unit_hermite(1, {0}), 0).coeffs.empty());

    // d=2: R_1 Phi_(1,0) = (1/sqrt 2) Phi_(0,0)
    const auto r10 = harmosc::hermite_riesz_spectral(unit_hermite(2, {1, 0}), 0);
    REQUIRE(r10.coeffs.size() == 1);
    REQUIRE(rel_gap(r10.coeffs.at({0, 0}), 1.0 / std::sqrt(2.0)) < 1e-15);

    // adjoint side on the ground state: sqrt(2/d) at mu + e_j
    const auto a0 = harmosc::hermite_riesz_adjoint_spectral(unit_hermite(1, {0}), 0);
    REQUIRE(rel_gap(a0.coeffs.at({1}), std::sqrt(2.0)) < 1e-15);

    // L2 contractivity on random band-limited inputs
    oracles::Rng rng(907);
    for (int trial = 0; trial < 20; ++trial) {
        harmosc::HermiteBand f;
        f.d = 2;
        f.cutoff = 5;
        const auto mus = harmosc::multi_indices_upto(2, 5);
        for (int pick = 0; pick < 8; ++pick) {
            const auto& mu = mus[static_cast<std::size_t>(
                (rng.uniform() * 0.5 + 0.5) * static_cast<double>(mus.size() - 1))];
            f.coeffs[mu] += rng.uniform();
        }
        const double n2 = band_norm2(f);
        for (int j = 0; j < 2; ++j)
            REQUIRE(band_norm2(harmosc::hermite_riesz_spectral(f, j)) <= n2 * (1.0 + 1e-12));
    }
}

TEST_CASE("oscillator Riesz transform: kernel route matches spectral", "[operators]") {
    // d=2, f = Phi_(1,0): kernel-quadrature route vs exact coefficient map
    {
        const auto f = unit_hermite(2, {1, 0});
        const auto spec = harmosc::hermite_riesz_spectral(f, 0);
        const std::vector<std::vector<double>> pts{{0.4, -0.3}, {1.0, 0.8}, {-1.2, 0.5}};
        const auto vals = harmosc::hermite_riesz_kernel_values(f, 0, pts);
        for (std::size_t i = 0; i < pts.size(); ++i)
            REQUIRE(std::abs(vals[i] - hermite_eval(spec, pts[i])) < 1e-5);
    }

    // d=1, second excited mode, both components of the check above
    {
        const auto f = unit_hermite(1, {2});
        const auto spec = harmosc::hermite_riesz_spectral(f, 0);
        const std::vector<std::vector<double>> pts{{0.5}, {-1.1}};
        const auto vals = harmosc::hermite_riesz_kernel_values(f, 0, pts);
        for (std::size_t i = 0; i < pts.size(); ++i)
            REQUIRE(std::abs(vals[i] - hermite_eval(spec, pts[i])) < 1e-5);
    }

    // refining the quadrature shrinks the dual-route error
    {
        const auto f = unit_hermite(1, {1});
        const auto spec = harmosc::hermite_riesz_spectral(f, 0);
        const std::vector<std::vector<double>> pts{{0.7}};
        harmosc::RieszRouteOptions coarse;
        coarse.n_axis = 10;
        coarse.halfwidth = 4.0;
        coarse.sub.n_nodes = 40;
        harmosc::RieszRouteOptions fine;
        const double want = hermite_eval(spec, pts[0]);
        const double e_coarse =
            std::abs(harmosc::hermite_riesz_kernel_values(f, 0, pts, coarse)[0] - want);
        const double e_fine =
            std::abs(harmosc::hermite_riesz_kernel_values(f, 0, pts, fine)[0] - want);
        REQUIRE(e_fine <= e_coarse + 1e-12);
        REQUIRE(e_fine < 1e-6);
    }
}

TEST_CASE("half-line Riesz transform of type alpha", "[operators]") {
    // ground state is annihilated: (d/dr + r) psi_0 = 0
    harmosc::LaguerreBand g0;
    g0.alpha = 0.5;
    g0.cutoff = 0;
    g0.coeffs[0] = 1.0;
    for (double r : {0.3, 1.0, 2.2})
        REQUIRE(std::abs(harmosc::laguerre_riesz_value(g0, r)) < 1e-12);

    // alpha = 0.5, g = psi_1: analytic route vs finite differences on the
    // synthesized half-inverse
    harmosc::LaguerreBand g;
    g.alpha = 0.5;
    g.cutoff = 1;
    g.coeffs[1] = 1.0;
    const auto half = harmosc::laguerre_half_inverse(g);
    for (double r : {0.4, 0.9, 1.7}) {
        const double fd =
            oracles::fd_first([&](double s) { return laguerre_eval(half, s); }, r, 1e-4) +
            r * laguerre_eval(half, r);
        REQUIRE(std::abs(harmosc::laguerre_riesz_value(g, r) - fd) < 1e-7);
    }

    // linearity
    harmosc::LaguerreBand mix;
    mix.alpha = 0.5;
    mix.cutoff = 2;
    mix.coeffs[0] = 2.0;
    mix.coeffs[2] = -3.0;
    harmosc::LaguerreBand g2;
    g2.alpha = 0.5;
    g2.cutoff = 2;
    g2.coeffs[2] = 1.0;
    for (double r : {0.6, 1.3})
        REQUIRE(std::abs(harmosc::laguerre_riesz_value(mix, r) -
                         (2.0 * harmosc::laguerre_riesz_value(g0, r) -
                          3.0 * harmosc::laguerre_riesz_value(g2, r))) < 1e-12);
}

TEST_CASE("twisted convolution: Gaussian value and projection algebra", "[operators]") {
    auto phi = [](int k) {
        return [k](const std::vector<cplx>& w) {
            return cplx(harmosc::phi_fock(k, 1, std::abs(w[0])), 0.0);
        };
    };

    // phi_0 x phi_0 (0) is the plane Gaussian integral 2 pi
    const cplx at0 = harmosc::twisted_convolve(phi(0), phi(0), 1, {cplx(0.0, 0.0)});
    REQUIRE(std::abs(at0 - cplx(2.0 * harmosc::pi, 0.0)) < 1e-9 * 2.0 * harmosc::pi);

    // (2 pi)^{-1} phi_k x phi_k = phi_k and cross terms vanish
    const std::vector<cplx> samples{cplx(0.4, 0.2), cplx(-0.9, 0.7)};
    for (int k = 0; k <= 3; ++k) {
        for (const cplx z0 : samples) {
            const cplx diag = harmosc::twisted_convolve(phi(k), phi(k), 1, {z0});
            const double want = harmosc::phi_fock(k, 1, std::abs(z0));
            REQUIRE(std::abs(diag / (2.0 * harmosc::pi) - want) < 1e-7);
        }
    }
    for (const auto& [k, l] : std::vector<std::pair<int, int>>{{0, 1}, {1, 3}, {2, 0}}) {
        for (const cplx z0 : samples) {
            const cplx cross = harmosc::twisted_convolve(phi(k), phi(l), 1, {z0});
            REQUIRE(std::abs(cross) < 1e-7);
        }
    }
}

TEST_CASE("twisted Riesz transform: dual routes, annihilation, contractivity", "[operators]") {
    // S(phi_0-mode) = 0: the annihilation derivative kills the ground mode
    {
        const auto f = unit_special(1, {0, 0, 0, 0});
        const auto vals = harmosc::special_riesz_spectral_values(
            f, 0, {{cplx(0.4, 0.1)}, {cplx(-0.7, 0.5)}});
        for (const auto& v : vals) REQUIRE(std::abs(v) < 1e-8);
    }

    // f = phi_1-mode: spectral (finite-difference) route vs kernel route
    {
        const auto f = unit_special(1, {0, 0, 0, 1});
        const std::vector<std::vector<cplx>> pts{
            {cplx(0.5, 0.3)}, {cplx(-0.8, 0.6)}, {cplx(1.2, -0.4)}};
        const auto spec = harmosc::special_riesz_spectral_values(f, 0, pts);
        const auto kern = harmosc::special_riesz_kernel_values(f, 0, pts);
        for (std::size_t i = 0; i < pts.size(); ++i)
            REQUIRE(std::abs(spec[i] - kern[i]) < 1e-5);

        // conjugate side as well
        const auto spec_bar = harmosc::special_riesz_spectral_values(f, 0, pts, true);
        const auto kern_bar = harmosc::special_riesz_kernel_values(f, 0, pts, true);
        for (std::size_t i = 0; i < pts.size(); ++i)
            REQUIRE(std::abs(spec_bar[i] - kern_bar[i]) < 1e-5);
    }

    // quadrature Parseval: ||S f||_2 <= ||f||_2 on random band-limited inputs
    oracles::Rng rng(613);
    for (int trial = 0; trial < 3; ++trial) {
        harmosc::SpecialBand f;
        f.d = 1;
        f.cutoff = 3;
        const auto modes = harmosc::special_modes_upto(1, 3);
        for (std::size_t i = 0; i < modes.size(); i += 2) f.coeffs[modes[i]] = rng.uniform_c();
        const double fn2 = band_norm2(f);
        auto sfield = [&](const std::vector<cplx>& z) {
            return harmosc::special_riesz_spectral_values(f, 0, {z})[0];
        };
        REQUIRE(cfield_norm2(sfield, 10, 14) <= fn2 * (1.0 + 1e-6));
    }
}

TEST_CASE("finite-difference operators reproduce eigenvalues", "[operators]") {
    // oscillator Hamiltonian in d = 1, 2, 3
    const std::vector<std::pair<int, MultiIndex>> cases{
        {1, {4}}, {2, {2, 1}}, {3, {1, 0, 2}}};
    const std::vector<std::vector<double>> probes{
        {0.37}, {0.37, -0.61}, {0.37, -0.61, 0.23}};
    for (std::size_t c = 0; c < cases.size(); ++c) {
        const auto& [d, mu] = cases[c];
        const auto f = unit_hermite(d, mu);
        const double lambda = 2.0 * harmosc::mi_order(mu) + d;
        auto g = [&](const std::vector<double>& x) { return hermite_eval(f, x); };
        const double val = g(probes[c]);
        REQUIRE(std::abs(val) > 1e-2);
        const double ratio = harmosc::fd_oscillator_apply(g, probes[c]) / val;
        REQUIRE(std::abs(ratio - lambda) < 1e-6 * lambda);
    }

    // radial operator of type alpha on psi_k
    for (int k = 0; k <= 3; ++k) {
        const double alpha = 0.5;
        auto g = [&](double r) { return harmosc::psi(k, alpha, r); };
        const double lambda = 4.0 * k + 2.0 * alpha + 2.0;
        for (double r : {0.6, 1.4}) {
            if (std::abs(g(r)) < 1e-2) continue;
            const double ratio = harmosc::fd_laguerre_apply(g, alpha, r) / g(r);
            REQUIRE(std::abs(ratio - lambda) < 1e-6 * lambda);
        }
    }

    // twisted Laplacian on the phi_k-modes, d = 1, k <= 4, plus one bigraded
    // mode exercising the rotation term
    for (int k = 0; k <= 4; ++k) {
        const auto f = unit_special(1, {0, 0, 0, k});
        auto g = [&](const std::vector<cplx>& z) { return special_eval(f, z); };
        const std::vector<cplx> z0{cplx(0.52, 0.31)};
        const cplx val = g(z0);
        REQUIRE(std::abs(val) > 1e-3);
        const cplx ratio = harmosc::fd_twisted_apply(g, z0) / val;
        const double lambda = 2.0 * k + 1.0;
        REQUIRE(std::abs(ratio - lambda) < 1e-6 * lambda);
    }
    {
        const auto f = unit_special(1, {1, 0, 0, 0});
        auto g = [&](const std::vector<cplx>& z) { return special_eval(f, z); };
        const std::vector<cplx> z0{cplx(0.52, 0.31)};
        const cplx ratio = harmosc::fd_twisted_apply(g, z0) / g(z0);
        REQUIRE(std::abs(ratio - harmosc::special_eigenvalue(1, {1, 0, 0, 0})) < 1e-6 * 3.0);
    }
}

TEST_CASE("twisted projections resolve the identity on band-limited inputs", "[operators]") {
    oracles::Rng rng(715);
    harmosc::SpecialBand f;
    f.d = 1;
    f.cutoff = 2;
    for (const auto& mo : harmosc::special_modes_upto(1, 2)) f.coeffs[mo] = 0.5 * rng.uniform_c();
    auto ffield = [&](const std::vector<cplx>& z) { return special_eval(f, z); };

    for (const cplx z0 : {cplx(0.3, -0.2), cplx(-0.6, 0.5)}) {
        cplx acc = 0.0;
        for (int k = 0; k <= 2; ++k) {
            auto phik = [k](const std::vector<cplx>& w) {
                return cplx(harmosc::phi_fock(k, 1, std::abs(w[0])), 0.0);
            };
            acc += harmosc::twisted_convolve(ffield, phik, 1, {z0}) / (2.0 * harmosc::pi);
        }
        REQUIRE(std::abs(acc - special_eval(f, {z0})) < 1e-6);
    }
}

TEST_CASE("rotations act by substitution and preserve the expansion", "[operators]") {
    oracles::Rng rng(816);
    harmosc::HermiteBand f;
    f.d = 2;
    f.cutoff = 3;
    for (const auto& mu : harmosc::multi_indices_upto(2, 3)) f.coeffs[mu] = 0.3 * rng.uniform();

    // identity matrix: coefficients unchanged
    const std::vector<std::vector<double>> eye{{1.0, 0.0}, {0.0, 1.0}};
    const auto fid = harmosc::rotate_hermite(f, eye);
    for (const auto& [mu, c] : f.coeffs) REQUIRE(std::abs(fid.coeffs.at(mu) - c) < 1e-12);

    auto rot = [](double th) {
        return std::vector<std::vector<double>>{{std::cos(th), -std::sin(th)},
                                                {std::sin(th), std::cos(th)}};
    };

    // norm preservation
    const auto fr = harmosc::rotate_hermite(f, rot(0.7));
    REQUIRE(rel_gap(band_norm2(fr), band_norm2(f)) < 1e-12);

    // rho(k1 k2) = rho(k2) after rho(k1)
    const auto k1 = rot(0.4), k2 = rot(-1.1);
    const auto lhs = harmosc::rotate_hermite(f, rot(0.4 - 1.1));
    const auto rhs = harmosc::rotate_hermite(harmosc::rotate_hermite(f, k1), k2);
    for (const auto& [mu, c] : lhs.coeffs)
        REQUIRE(std::abs(rhs.coeffs.at(mu) - c) < 1e-11);

    // non-orthogonal input is rejected
    REQUIRE_THROWS_AS(
        harmosc::rotate_hermite(f, {{1.0, 0.1}, {0.0, 1.0}}), std::invalid_argument);

    // complex side: a unitary phase multiplies each mode by e^{i(m-n)theta}
    harmosc::SpecialBand s;
    s.d = 1;
    s.cutoff = 3;
    for (const auto& mo : harmosc::special_modes_upto(1, 3)) s.coeffs[mo] = 0.4 * rng.uniform_c();
    const double th = 0.9;
    const auto su = harmosc::rotate_special(s, {{std::exp(cplx(0.0, th))}});
    REQUIRE(rel_gap(band_norm2(su), band_norm2(s)) < 1e-11);
    for (const auto& [mo, c] : s.coeffs) {
        const cplx factor = std::exp(cplx(0.0, th * (mo.m - mo.n)));
        REQUIRE(std::abs(su.coeffs.at(mo) - factor * c) < 1e-11);
    }
    REQUIRE_THROWS_AS(harmosc::rotate_special(s, {{cplx(1.1, 0.0)}}), std::invalid_argument);
}
