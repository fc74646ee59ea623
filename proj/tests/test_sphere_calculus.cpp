// Polar-coordinate layer: coefficient fields and Parseval, weighted profile
// families, Funk-Hecke, Hecke-Bochner transport, the polar Riesz-square
// identity, the Laguerre link, complex gradient splits, the bigraded
// tangential-gradient identity suite (with the Dirichlet-constant
// certification), twisted profile transport routes, the five-term
// square-function decomposition, the holomorphic coefficient split, and
// rotation covariance of both Riesz families.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <harmosc/sphere_calculus.hpp>

#include "oracles.hpp"

using harmosc::cplx;
using harmosc::CplxPoly;
using harmosc::MultiIndex;

namespace {

harmosc::SpecialBand unit_special(int d, const harmosc::SpecialMode& mo) {
    harmosc::SpecialBand f;
    f.d = d;
    f.cutoff = mo.m + mo.n + 2 * mo.k;
    f.coeffs[mo] = 1.0;
    return f;
}

std::vector<double> grid(double lo, double hi, double step) {
    std::vector<double> out;
    for (double r = lo; r <= hi + 1e-12; r += step) out.push_back(r);
    return out;
}

}  // namespace

TEST_CASE("spherical projection recovers harmonic components and Parseval", "[sphere]") {
    // g(r) Y_{2,j0}: every other profile vanishes, the (2,j0) profile is g
    const int d = 3, j0 = 1;
    const auto basis = harmosc::real_harmonic_basis(d, 2);
    auto f = [&](const std::vector<double>& x) {
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        // solid harmonic of degree 2 times a Gaussian bump in r^2
        return std::exp(-0.7 * r2) * harmosc::rp_eval(basis.elems[j0], x);
    };
    const auto field = harmosc::project(f, d, 3, 10);
    for (const auto& [key, vals] : field.profiles) {
        double top = 0.0;
        for (double v : vals) top = std::max(top, std::abs(v));
        if (key == std::pair<int, int>{2, j0}) {
            REQUIRE(top > 0.1);
            // profile value = r^2 e^{-0.7 r^2} (solid harmonic restricted to
            // radius r picks up r^2; the basis is orthonormal on the sphere)
            for (std::size_t i = 0; i < vals.size(); ++i) {
                const double r = field.radial.node(i)[0];
                REQUIRE(std::abs(vals[i] - r * r * std::exp(-0.7 * r * r)) < 1e-10);
            }
        } else {
            REQUIRE(top < 1e-10);
        }
    }
}

TEST_CASE("coefficient Parseval identities", "[sphere]") {
    // oscillator band, random three-mode input
    harmosc::HermiteBand f;
    f.d = 3;
    f.cutoff = 4;
    f.coeffs[{1, 0, 0}] = 0.9;
    f.coeffs[{0, 2, 1}] = -0.4;
    f.coeffs[{1, 1, 2}] = 0.3;
    const auto field = harmosc::project(f);
    REQUIRE(std::abs(field.parseval_sum() - harmosc::band_norm2(f)) <
            1e-8 * harmosc::band_norm2(f));

    // twisted band: exact coefficient transport and quadrature route agree
    harmosc::SpecialBand s;
    s.d = 2;
    s.cutoff = 4;
    s.coeffs[{1, 0, 0, 0}] = cplx(0.8, 0.1);
    s.coeffs[{0, 1, 1, 1}] = cplx(-0.2, 0.6);
    s.coeffs[{1, 1, 2, 0}] = cplx(0.4, 0.0);
    const auto exact = harmosc::bigraded_project(s);
    REQUIRE(std::abs(exact.parseval_sum() - harmosc::band_norm2(s)) <
            1e-10 * harmosc::band_norm2(s));
    const auto quad = harmosc::bigraded_project(
        [&](const std::vector<cplx>& z) { return harmosc::special_eval(s, z); }, s.d, s.cutoff);
    REQUIRE(std::abs(quad.parseval_sum() - harmosc::band_norm2(s)) <
            1e-8 * harmosc::band_norm2(s));
    for (const auto& [key, vals] : exact.profiles) {
        const auto& qv = quad.profiles.at(key);
        for (std::size_t i = 0; i < vals.size(); ++i)
            REQUIRE(std::abs(vals[i] - qv[i]) < 1e-10);
    }
}

TEST_CASE("weighted profiles carry consistent analytic derivatives", "[sphere]") {
    harmosc::WeightedLaguerreProfile wl;
    wl.m = 2;
    wl.alpha = 1.5;
    wl.coeffs[0] = 0.7;
    wl.coeffs[2] = -0.4;
    harmosc::WeightedTwistedProfile wt;
    wt.m = 1;
    wt.n = 0;
    wt.delta = 2.0;
    wt.coeffs[0] = cplx(0.5, -0.3);
    wt.coeffs[1] = cplx(0.2, 0.8);
    for (double r : grid(0.3, 2.3, 0.4)) {
        REQUIRE(std::abs(wl.deriv(r) -
                         oracles::fd_first([&](double s) { return wl.value(s); }, r, 1e-4)) <
                1e-8);
        REQUIRE(std::abs(wt.deriv(r) - oracles::fd_first_c(
                                           [&](double s) { return wt.value(s); }, r, 1e-4)) <
                1e-8);
    }
}

TEST_CASE("oscillator band profiles rebuild the band on the sphere", "[sphere]") {
    harmosc::HermiteBand f;
    f.d = 3;
    f.cutoff = 4;
    f.coeffs[{1, 0, 0}] = 0.9;
    f.coeffs[{0, 2, 1}] = -0.4;
    f.coeffs[{1, 1, 2}] = 0.3;
    f.coeffs[{0, 0, 0}] = 0.5;
    const auto prof = harmosc::hermite_band_profiles(f);
    // tabulate harmonics at a few directions and compare the profile sum
    oracles::Rng rng(404);
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<double> w(3);
        double nn = 0.0;
        for (auto& v : w) {
            v = rng.uniform();
            nn += v * v;
        }
        for (auto& v : w) v /= std::sqrt(nn);
        for (double r : {0.4, 1.0, 1.9}) {
            std::vector<double> x{r * w[0], r * w[1], r * w[2]};
            double rebuilt = 0.0;
            for (const auto& [key, F] : prof) {
                const auto basis = harmosc::real_harmonic_basis(3, key.first);
                rebuilt += F.value(r) *
                           harmosc::rp_eval(basis.elems[static_cast<std::size_t>(key.second)], w);
            }
            REQUIRE(std::abs(rebuilt - harmosc::hermite_eval(f, x)) < 1e-10);
        }
    }
}

TEST_CASE("Funk-Hecke eigenvalue action", "[sphere]") {
    // phi == 1 acts on constants with the full sphere area
    const double lam0 = harmosc::funk_hecke([](double) { return 1.0; }, 0, 3);
    REQUIRE(std::abs(lam0 - 4.0 * harmosc::pi) < 1e-12);
    // phi(u) = u on degree 1, d = 3: |S^1| * int u^2 du = 4 pi / 3
    const double lam1 = harmosc::funk_hecke([](double u) { return u; }, 1, 3);
    REQUIRE(std::abs(lam1 - 4.0 * harmosc::pi / 3.0) < 1e-12);
    // brute sphere quadrature certificate across dimensions and degrees
    auto phi = [](double u) { return std::exp(0.8 * u) + 0.2 * u * u; };
    for (int d : {2, 3, 4})
        for (int m : {0, 1, 2, 3})
            REQUIRE(harmosc::funk_hecke_sphere_residual(phi, m, d) < 1e-6);
}

TEST_CASE("Hecke-Bochner transport constant", "[sphere]") {
    auto gt = [](double s) { return std::exp(-0.5 * s * s) * (1.0 + 0.3 * s * s); };
    const auto radii = grid(0.2, 3.0, 0.35);
    for (int m : {0, 1, 2}) {
        const auto basis = harmosc::real_harmonic_basis(3, m);
        for (double t : {0.2, 0.5, 1.0}) {
            const auto rep = harmosc::hecke_bochner_hermite(gt, basis.elems[0], m, 3, t, radii);
            REQUIRE(rep.spread < 1e-8);
            REQUIRE(std::abs(rep.c_estimate - harmosc::calibrated::hecke_bochner_constant(3)) <
                    1e-8);
        }
    }
    // the estimate is stable across the radial factor, harmonic, and time
    const auto basis = harmosc::real_harmonic_basis(3, 1);
    auto gt2 = [](double s) { return s * s * std::exp(-0.8 * s * s) + std::exp(-s * s); };
    const auto rep = harmosc::hecke_bochner_hermite(gt2, basis.elems[2], 1, 3, 0.7, radii);
    REQUIRE(std::abs(rep.c_estimate - 1.0) < 1e-8);
}

TEST_CASE("polar identity for the oscillator Riesz vector", "[sphere]") {
    const auto radii = grid(0.3, 2.5, 0.2);
    harmosc::HermiteBand one;
    one.d = 3;
    one.cutoff = 3;
    one.coeffs[{1, 0, 0}] = 1.0;
    REQUIRE(harmosc::riesz_polar_identity(one, radii).sup_residual < 1e-7);

    harmosc::HermiteBand f;
    f.d = 3;
    f.cutoff = 4;
    f.coeffs[{1, 0, 0}] = 0.9;
    f.coeffs[{0, 2, 1}] = -0.4;
    f.coeffs[{1, 1, 2}] = 0.3;
    f.coeffs[{0, 0, 0}] = 0.5;
    f.coeffs[{2, 2, 0}] = 0.21;
    const auto rep = harmosc::riesz_polar_identity(f, radii);
    REQUIRE(rep.sup_residual < 1e-7);
    // both sides are genuinely nonzero
    double top = 0.0;
    for (double v : rep.lhs) top = std::max(top, std::abs(v));
    REQUIRE(top > 1e-3);
}

TEST_CASE("Laguerre link on a single harmonic component", "[sphere]") {
    const auto radii = grid(0.3, 2.5, 0.2);
    // m = 1, d = 3, ftilde = first weighted Laguerre eigenfunction
    harmosc::LaguerreBand ft;
    ft.alpha = 0.5 * 3 - 1.0 + 1.0;
    ft.cutoff = 1;
    ft.coeffs[1] = 1.0;
    const auto rep = harmosc::laguerre_link(ft, 1, 3, radii);
    REQUIRE(rep.sup_residual < 1e-6);
    REQUIRE(rep.substitution_residual < 1e-8);

    // two-mode input at m = 2 with a different harmonic index
    harmosc::LaguerreBand f2;
    f2.alpha = 0.5 * 3 - 1.0 + 2.0;
    f2.cutoff = 2;
    f2.coeffs[0] = 0.6;
    f2.coeffs[2] = -0.3;
    const auto rep2 = harmosc::laguerre_link(f2, 2, 3, radii, 1);
    REQUIRE(rep2.sup_residual < 1e-6);
    REQUIRE(rep2.substitution_residual < 1e-8);

    REQUIRE_THROWS_AS(harmosc::laguerre_link(ft, 2, 3, radii), std::invalid_argument);
}

TEST_CASE("complex gradient split", "[sphere]") {
    std::vector<cplx> z{cplx(0.6, -0.3), cplx(-0.2, 0.9)};
    // constants: everything vanishes
    CplxPoly c;
    c[{MultiIndex{0, 0}, MultiIndex{0, 0}}] = cplx(2.0, 1.0);
    const auto spc = harmosc::complex_gradient_split(c, z);
    REQUIRE(std::abs(spc.grad_z[0]) + std::abs(spc.grad_z[1]) == 0.0);
    REQUIRE(std::abs(spc.radial) == 0.0);

    // P = z_1 in d = 2: gradient is the first basis vector
    CplxPoly p1;
    p1[{MultiIndex{1, 0}, MultiIndex{0, 0}}] = 1.0;
    const auto sp1 = harmosc::complex_gradient_split(p1, z);
    REQUIRE(std::abs(sp1.grad_z[0] - 1.0) < 1e-14);
    REQUIRE(std::abs(sp1.grad_z[1]) < 1e-14);
    REQUIRE(sp1.reconstruction < 1e-14);

    // random bigraded harmonics: exact reconstruction, FD route agrees
    oracles::Rng rng(777);
    for (auto [m, n] : std::vector<std::pair<int, int>>{{2, 1}, {1, 3}, {4, 0}}) {
        const auto basis = harmosc::bigraded_harmonic_basis(2, m, n);
        CplxPoly P;
        for (const auto& el : basis.elems) harmosc::cp_add_scaled(P, el, rng.uniform_c());
        const auto sp = harmosc::complex_gradient_split(P, z);
        REQUIRE(sp.reconstruction < 1e-10);
        const auto spf = harmosc::complex_gradient_split(
            [&](const std::vector<cplx>& w) { return harmosc::cp_eval(P, w); }, z);
        REQUIRE(spf.reconstruction < 1e-6);
        for (int j = 0; j < 2; ++j) {
            REQUIRE(std::abs(sp.grad_z[static_cast<std::size_t>(j)] -
                             spf.grad_z[static_cast<std::size_t>(j)]) < 1e-6);
            REQUIRE(std::abs(sp.grad0_z[static_cast<std::size_t>(j)] -
                             spf.grad0_z[static_cast<std::size_t>(j)]) < 1e-6);
        }
    }
}

TEST_CASE("bigraded identity suite passes the six pair identities", "[sphere]") {
    for (int d : {1, 2}) {
        const auto rep = harmosc::bigraded_identity_suite(d, 4);
        CAPTURE(d, rep.pairs);
        REQUIRE(rep.pairs > 0);
        REQUIRE(rep.worst.conjugate_pairing < 1e-8);
        REQUIRE(rep.worst.tangential_pairing < 1e-8);
        REQUIRE(rep.worst.sphere_pairing < 1e-8);
        REQUIRE(rep.worst.gradient_expansion < 1e-8);
        REQUIRE(rep.worst.pointwise_split < 1e-8);
        REQUIRE(rep.worst.parts_identity < 1e-8);
        // the Dirichlet integral matches its own constant on every pair ...
        REQUIRE(rep.worst.dirichlet_integral < 1e-10);
        // ... and provably deviates from the five-term pairing constant on
        // bidegrees with m != n (the deviation is (m-n)/4; see below)
        REQUIRE(rep.worst.dirichlet_split > 1e-3);
    }
}

TEST_CASE("bigraded identity spot checks", "[sphere]") {
    // degenerate pair of constants: every residual vanishes
    const auto b00 = harmosc::bigraded_harmonic_basis(2, 0, 0);
    const auto r00 = harmosc::bigraded_identity_residuals(2, b00.elems[0], 0, 0, b00.elems[0], 0,
                                                          0);
    REQUIRE(r00.conjugate_pairing < 1e-14);
    REQUIRE(r00.dirichlet_split < 1e-14);
    REQUIRE(r00.dirichlet_integral < 1e-14);

    // P = z_1 in d = 2: conjugate pairing holds with m = 1
    const auto b10 = harmosc::bigraded_harmonic_basis(2, 1, 0);
    const auto r10 = harmosc::bigraded_identity_residuals(2, b10.elems[0], 1, 0, b10.elems[0], 1,
                                                          0);
    REQUIRE(r10.conjugate_pairing < 1e-12);
    REQUIRE(r10.tangential_pairing < 1e-12);

    // bidegree (1,1) in d = 2: both constants equal 2 and the quadrature
    // matches to 1e-8
    REQUIRE(harmosc::bigraded_pairing_constant(2, 1, 1) == 2.0);
    REQUIRE(harmosc::bigraded_dirichlet_constant(2, 1, 1) == 2.0);
    const auto b11 = harmosc::bigraded_harmonic_basis(2, 1, 1);
    for (int j = 0; j < b11.rank(); ++j) {
        const auto r11 = harmosc::bigraded_identity_residuals(
            2, b11.elems[static_cast<std::size_t>(j)], 1, 1,
            b11.elems[static_cast<std::size_t>(j)], 1, 1);
        REQUIRE(r11.dirichlet_split < 1e-8);
        REQUIRE(r11.dirichlet_integral < 1e-8);
    }
}

TEST_CASE("Dirichlet integral of the tangential holomorphic gradient", "[sphere]") {
    // Independent certification of the constant by brute sphere quadrature of
    // the gradient split: ratio = int |grad0^z P|^2 / int |P|^2.
    auto dirichlet_ratio = [](int d, const CplxPoly& P) {
        const auto sph = harmosc::complex_sphere_rule(d, 16);
        double num = 0.0, den = 0.0;
        for (std::size_t s = 0; s < sph.size(); ++s) {
            const auto zeta = harmosc::complex_node(sph, s);
            const auto split = harmosc::complex_gradient_split(P, zeta);
            double g2 = 0.0;
            for (const auto& g : split.grad0_z) g2 += std::norm(g);
            num += sph.weights[s] * g2;
            den += sph.weights[s] * std::norm(harmosc::cp_eval(P, zeta));
        }
        return num / den;
    };

    struct Case {
        int d, m, n;
    };
    for (const auto& cs : {Case{1, 1, 0}, Case{1, 0, 1}, Case{1, 2, 0}, Case{2, 1, 0},
                           Case{2, 0, 2}, Case{2, 2, 1}, Case{2, 1, 1}}) {
        const auto basis = harmosc::bigraded_harmonic_basis(cs.d, cs.m, cs.n);
        const double ratio = dirichlet_ratio(cs.d, basis.elems[0]);
        const double have = harmosc::bigraded_dirichlet_constant(cs.d, cs.m, cs.n);
        const double split = harmosc::bigraded_pairing_constant(cs.d, cs.m, cs.n);
        CAPTURE(cs.d, cs.m, cs.n, ratio);
        // the quadrature lands exactly on the Dirichlet constant ...
        REQUIRE(std::abs(ratio - have) < 1e-10);
        // ... which sits (m-n)/4 away from the five-term pairing constant
        REQUIRE(std::abs((split - have) - 0.25 * (cs.m - cs.n)) < 1e-12);
    }

    // hand values: d=1 z -> 1/4, d=1 conj(z) -> 1/4, d=2 z_1 -> 5/4
    REQUIRE(harmosc::bigraded_dirichlet_constant(1, 1, 0) == 0.25);
    REQUIRE(harmosc::bigraded_dirichlet_constant(1, 0, 1) == 0.25);
    REQUIRE(harmosc::bigraded_dirichlet_constant(2, 1, 0) == 1.25);
    // the symmetric sums of the two constants agree (the five-term identity
    // consumes only this combination)
    for (int d : {1, 2})
        for (int m = 0; m <= 4; ++m)
            for (int n = 0; m + n <= 4; ++n)
                REQUIRE(std::abs((harmosc::bigraded_pairing_constant(d, m, n) +
                                  harmosc::bigraded_pairing_constant(d, n, m)) -
                                 (harmosc::bigraded_dirichlet_constant(d, m, n) +
                                  harmosc::bigraded_dirichlet_constant(d, n, m))) < 1e-14);
}

TEST_CASE("twisted profile transport", "[sphere]") {
    const std::vector<double> radii{0.3, 0.7, 1.1, 1.6, 2.2};

    // equal bidegrees: the twist factor is 1
    harmosc::SpecialBand fe;
    fe.d = 2;
    fe.cutoff = 4;
    fe.coeffs[{1, 1, 0, 0}] = cplx(0.7, -0.2);
    fe.coeffs[{1, 1, 0, 1}] = cplx(0.1, 0.4);
    REQUIRE(harmosc::heat_profile_transport_residual(fe, 0.5, 1, 1, 0, radii) < 1e-10);

    // unequal bidegrees carry e^{-t(m-n)}
    harmosc::SpecialBand f;
    f.d = 1;
    f.cutoff = 5;
    f.coeffs[{1, 0, 0, 0}] = cplx(0.8, 0.1);
    f.coeffs[{1, 0, 0, 2}] = cplx(-0.3, 0.45);
    for (double t : {0.2, 0.5, 1.0})
        REQUIRE(harmosc::heat_profile_transport_residual(f, t, 1, 0, 0, radii) < 1e-10);
    harmosc::SpecialBand g;
    g.d = 2;
    g.cutoff = 4;
    g.coeffs[{0, 1, 0, 0}] = cplx(0.5, -0.2);
    g.coeffs[{0, 1, 0, 1}] = cplx(0.3, 0.3);
    REQUIRE(harmosc::heat_profile_transport_residual(g, 0.35, 0, 1, 0, radii) < 1e-10);
}

TEST_CASE("half-inverse profiles: spectral vs subordinated routes", "[sphere]") {
    const std::vector<double> radii{0.3, 0.7, 1.1, 1.6, 2.2};
    harmosc::SpecialBand f;
    f.d = 1;
    f.cutoff = 5;
    f.coeffs[{1, 0, 0, 0}] = cplx(0.8, 0.1);
    f.coeffs[{1, 0, 0, 2}] = cplx(-0.3, 0.45);
    REQUIRE(harmosc::special_half_inverse_profile_check(f, 1, 0, 0, radii).sup_residual < 1e-7);

    harmosc::SpecialBand g;
    g.d = 2;
    g.cutoff = 4;
    g.coeffs[{0, 1, 0, 0}] = cplx(0.5, -0.2);
    g.coeffs[{0, 1, 0, 1}] = cplx(0.3, 0.3);
    REQUIRE(harmosc::special_half_inverse_profile_check(g, 0, 1, 0, radii).sup_residual < 1e-7);

    // single eigenmode: the half-inverse profile is the input profile divided
    // by the square root of the eigenvalue
    const auto e = unit_special(1, {1, 0, 0, 1});
    const auto ip = harmosc::special_band_profiles(e);
    const auto hp = harmosc::special_half_inverse_profiles(e);
    const double lam = harmosc::special_eigenvalue(1, {1, 0, 0, 1});
    for (double r : radii)
        REQUIRE(std::abs(hp.at({1, 0, 0}).value(r) - ip.at({1, 0, 0}).value(r) / std::sqrt(lam)) <
                1e-12);
}

TEST_CASE("circle projection of the twisted heat kernel", "[sphere]") {
    // both consistent orientations of the projection identity hold; the
    // forward one carries the decaying twist on the unconjugated harmonic
    for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 0}, {0, 1}, {2, 0}, {0, 0}}) {
        const auto rep = harmosc::sphere_kernel_projection_residual(m, n, 0.9, 1.3, 0.4);
        CAPTURE(m, n);
        REQUIRE(rep.forward_residual < 1e-7);
        REQUIRE(rep.conjugate_residual < 1e-7);
    }
    const auto rep = harmosc::sphere_kernel_projection_residual(1, 0, 1.4, 0.6, 0.25, 1.9);
    REQUIRE(rep.forward_residual < 1e-7);
    REQUIRE(rep.conjugate_residual < 1e-7);
    REQUIRE_THROWS_AS(harmosc::sphere_kernel_projection_residual(1, 1, 1.0, 1.0, 0.5),
                      std::invalid_argument);
}

TEST_CASE("five-term square-function decomposition", "[sphere]") {
    const auto radii = grid(0.3, 2.0, 0.17);

    // radial input: the angular and twist terms vanish identically
    harmosc::SpecialBand rad;
    rad.d = 1;
    rad.cutoff = 4;
    rad.coeffs[{0, 0, 0, 0}] = 1.0;
    rad.coeffs[{0, 0, 0, 2}] = cplx(0.3, 0.3);
    const auto rrep = harmosc::five_term(rad, radii);
    REQUIRE(rrep.sup_residual < 1e-7);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        REQUIRE(rrep.a3sq[i] == 0.0);
        REQUIRE(rrep.a4sq[i] == 0.0);
        REQUIRE(rrep.a5[i] == 0.0);
    }

    // holomorphic-type band (m >= n): identity holds and the twist term is
    // nonnegative at every grid point
    harmosc::SpecialBand f;
    f.d = 1;
    f.cutoff = 5;
    f.coeffs[{1, 0, 0, 0}] = cplx(0.8, 0.1);
    f.coeffs[{1, 0, 0, 1}] = cplx(-0.3, 0.2);
    f.coeffs[{2, 0, 0, 0}] = cplx(0.25, -0.4);
    f.coeffs[{0, 0, 0, 1}] = cplx(0.5, 0.0);
    const auto hrep = harmosc::five_term(f, radii);
    REQUIRE(hrep.sup_residual < 1e-7);
    for (double v : hrep.a5) REQUIRE(v >= 0.0);

    // mixed band including m < n modes: the identity still closes
    harmosc::SpecialBand gmix;
    gmix.d = 1;
    gmix.cutoff = 5;
    gmix.coeffs[{1, 0, 0, 0}] = cplx(0.8, 0.1);
    gmix.coeffs[{0, 1, 0, 0}] = cplx(0.25, -0.4);
    gmix.coeffs[{0, 1, 0, 1}] = cplx(-0.15, 0.3);
    const auto mrep = harmosc::five_term(gmix, radii);
    REQUIRE(mrep.sup_residual < 1e-7);
}

TEST_CASE("holomorphic coefficient split", "[sphere]") {
    harmosc::SpecialBand f;
    f.d = 1;
    f.cutoff = 3;
    f.coeffs[{1, 0, 0, 0}] = cplx(1, 1);
    f.coeffs[{0, 1, 0, 0}] = cplx(2, 0);
    f.coeffs[{0, 0, 0, 1}] = cplx(0, 3);
    const auto [h, a] = harmosc::holomorphic_split(f);
    for (const auto& [mo, c] : h.coeffs) REQUIRE(mo.m >= mo.n);
    for (const auto& [mo, c] : a.coeffs) REQUIRE(mo.m < mo.n);
    // the two halves sum back to the input exactly
    harmosc::SpecialBand sum = h;
    for (const auto& [mo, c] : a.coeffs) sum.coeffs[mo] += c;
    REQUIRE(sum.coeffs == f.coeffs);
    // splitting a half changes nothing; a radial band is entirely the first half
    const auto [hh, ha] = harmosc::holomorphic_split(h);
    REQUIRE(hh.coeffs == h.coeffs);
    REQUIRE(ha.coeffs.empty());
    harmosc::SpecialBand radial;
    radial.d = 1;
    radial.cutoff = 2;
    radial.coeffs[{0, 0, 0, 1}] = cplx(0.4, 0.4);
    const auto [rh, ra] = harmosc::holomorphic_split(radial);
    REQUIRE(rh.coeffs == radial.coeffs);
    REQUIRE(ra.coeffs.empty());
}

TEST_CASE("rotation covariance of the Riesz families", "[sphere]") {
    // oscillator side, d = 2, quarter turn in the (x1, x2) plane
    harmosc::HermiteBand f;
    f.d = 2;
    f.cutoff = 3;
    f.coeffs[{1, 0}] = 0.8;
    f.coeffs[{2, 1}] = -0.35;
    f.coeffs[{0, 3}] = 0.15;
    f.coeffs[{1, 1}] = 0.4;
    const std::vector<std::vector<double>> quarter{{0.0, -1.0}, {1.0, 0.0}};
    const std::vector<std::vector<double>> pts{
        {0.3, 0.8}, {-1.0, 0.4}, {0.9, -0.7}, {0.2, 0.1}};
    REQUIRE(harmosc::rotation_covariance_hermite(f, quarter, {1.0, 0.0}, pts) < 1e-5);
    const std::vector<std::vector<double>> eye{{1.0, 0.0}, {0.0, 1.0}};
    REQUIRE(harmosc::rotation_covariance_hermite(f, eye, {1.0, 0.0}, pts) < 1e-12);

    // twisted side, d = 1, scalar unitary e^{i theta}
    harmosc::SpecialBand s;
    s.d = 1;
    s.cutoff = 4;
    s.coeffs[{1, 0, 0, 0}] = cplx(0.7, 0.2);
    s.coeffs[{0, 1, 0, 1}] = cplx(-0.4, 0.5);
    s.coeffs[{0, 0, 0, 1}] = cplx(0.3, 0.0);
    const std::vector<std::vector<cplx>> phase{{std::polar(1.0, 0.6)}};
    const std::vector<std::vector<cplx>> zpts{
        {cplx(0.7, 0.3)}, {cplx(-0.5, 0.9)}, {cplx(1.1, -0.2)}};
    REQUIRE(harmosc::rotation_covariance_special(s, phase, {cplx(1.0, 0.0)}, zpts) < 1e-5);
    const std::vector<std::vector<cplx>> ceye{{cplx(1.0, 0.0)}};
    REQUIRE(harmosc::rotation_covariance_special(s, ceye, {cplx(1.0, 0.0)}, zpts) < 1e-12);
}

TEST_CASE("polar layer rejects unsupported inputs", "[sphere]") {
    REQUIRE_THROWS(harmosc::project([](const std::vector<double>&) { return 0.0; }, 5, 2));
    REQUIRE_THROWS(harmosc::bigraded_project(
        [](const std::vector<cplx>&) { return cplx(0.0); }, 3, 2));
    REQUIRE_THROWS_AS(harmosc::project([](const std::vector<double>&) { return 0.0; }, 3, 4, 2),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(harmosc::bigraded_identity_suite(3, 2), std::invalid_argument);
    harmosc::SpecialBand f;
    f.d = 1;
    f.cutoff = 2;
    f.coeffs[{1, 0, 0, 0}] = 1.0;
    REQUIRE_THROWS_AS(harmosc::heat_profile_transport_residual(f, 0.5, 0, 1, 0, {1.0}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(harmosc::special_half_inverse_profile_check(f, 2, 0, 0, {1.0}),
                      std::invalid_argument);
}
