#pragma once

// Gauss rules (interval, Jacobi, Hermite, Laguerre), subordination rules on the
// half-line, and tensor-product sphere rules. Every other module funnels its
// numerical integration through the rules built here.

#include "common.hpp"

#include <Eigen/Dense>

namespace harmosc {

struct QuadratureRule {
    enum class Domain { interval, halfline_subordinated, sphere };

    Domain domain = Domain::interval;
    int point_dim = 1;   // doubles per node
    int exactness = -1;  // guaranteed polynomial (or spherical-polynomial) degree

    std::vector<double> nodes;  // flattened, point_dim entries per node
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
    const double* node(std::size_t i) const { return nodes.data() + i * static_cast<std::size_t>(point_dim); }

    // One-dimensional rules: f(double) -> double or complex.
    template <class F>
    auto integrate(F&& f) const -> decltype(f(0.0)) {
        decltype(f(0.0)) acc{};
        for (std::size_t i = 0; i < size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }

    // Multi-dimensional rules: f(const double*) -> double or complex.
    template <class F>
    auto integrate_points(F&& f) const -> decltype(f(static_cast<const double*>(nullptr))) {
        decltype(f(static_cast<const double*>(nullptr))) acc{};
        for (std::size_t i = 0; i < size(); ++i) acc += weights[i] * f(node(i));
        return acc;
    }
};

namespace detail {

// Golub-Welsch: nodes are eigenvalues of the symmetric tridiagonal Jacobi matrix
// built from the recurrence p_{k+1} = (x - a_k) p_k - b_k p_{k-1}; the weight of
// node i is mu0 times the squared first eigenvector component.
inline void golub_welsch(const std::vector<double>& a, const std::vector<double>& b, double mu0,
                         std::vector<double>& nodes, std::vector<double>& weights) {
    const int n = static_cast<int>(a.size());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        J(i, i) = a[static_cast<std::size_t>(i)];
        if (i + 1 < n) {
            const double sb = std::sqrt(b[static_cast<std::size_t>(i + 1)]);
            J(i, i + 1) = sb;
            J(i + 1, i) = sb;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    nodes.resize(static_cast<std::size_t>(n));
    weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        weights[static_cast<std::size_t>(i)] = mu0 * sqr(es.eigenvectors()(0, i));
    }
}

}  // namespace detail

// Gauss-Jacobi on [-1,1] with weight (1-x)^el (1+x)^er; exponents must exceed -1.
inline QuadratureRule gauss_jacobi(int n, double exp_left, double exp_right) {
    require(n >= 1, "gauss_jacobi: need at least one node");
    require(exp_left > -1.0 && exp_right > -1.0, "gauss_jacobi: endpoint exponents must exceed -1");
    const double A = exp_left, B = exp_right;
    std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n), 0.0);
    a[0] = (B - A) / (A + B + 2.0);
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + A + B;
        a[static_cast<std::size_t>(k)] = (B * B - A * A) / (s * (s + 2.0));
        if (k == 1)
            b[1] = 4.0 * (A + 1.0) * (B + 1.0) / (sqr(A + B + 2.0) * (A + B + 3.0));
        else
            b[static_cast<std::size_t>(k)] =
                4.0 * k * (k + A) * (k + B) * (k + A + B) / (sqr(s) * (s + 1.0) * (s - 1.0));
    }
    const double mu0 = std::exp((A + B + 1.0) * std::log(2.0) + std::lgamma(A + 1.0) +
                                std::lgamma(B + 1.0) - std::lgamma(A + B + 2.0));
    QuadratureRule rule;
    rule.domain = QuadratureRule::Domain::interval;
    rule.exactness = 2 * n - 1;
    detail::golub_welsch(a, b, mu0, rule.nodes, rule.weights);
    if (exp_left == exp_right) {
        // the exact rule is symmetric; remove the eigensolver's rounding skew
        const std::size_t un = rule.nodes.size();
        for (std::size_t i = 0; i < un / 2; ++i) {
            const std::size_t j = un - 1 - i;
            const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
            rule.nodes[i] = -x;
            rule.nodes[j] = x;
            const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
            rule.weights[i] = rule.weights[j] = w;
        }
        if (un % 2 == 1) rule.nodes[un / 2] = 0.0;
    }
    return rule;
}

// Gauss-Legendre on [lo, hi].
inline QuadratureRule gauss_interval(int n, double lo, double hi) {
    require(n >= 1, "gauss_interval: need at least one node");
    require(hi > lo, "gauss_interval: empty interval");
    QuadratureRule rule = gauss_jacobi(n, 0.0, 0.0);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (auto& x : rule.nodes) x = mid + half * x;
    for (auto& w : rule.weights) w *= half;
    return rule;
}

// Gauss-Hermite, weight exp(-x^2) on the whole line.
inline QuadratureRule gauss_hermite(int n) {
    require(n >= 1, "gauss_hermite: need at least one node");
    std::vector<double> a(static_cast<std::size_t>(n), 0.0), b(static_cast<std::size_t>(n), 0.0);
    for (int k = 1; k < n; ++k) b[static_cast<std::size_t>(k)] = 0.5 * k;
    QuadratureRule rule;
    rule.exactness = 2 * n - 1;
    detail::golub_welsch(a, b, std::sqrt(pi), rule.nodes, rule.weights);
    return rule;
}

// Gauss-Laguerre, weight x^alpha exp(-x) on the half-line.
inline QuadratureRule gauss_laguerre(int n, double alpha) {
    require(n >= 1, "gauss_laguerre: need at least one node");
    require(alpha > -1.0, "gauss_laguerre: alpha must exceed -1");
    std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) {
        a[static_cast<std::size_t>(k)] = 2.0 * k + alpha + 1.0;
        if (k >= 1) b[static_cast<std::size_t>(k)] = k * (k + alpha);
    }
    QuadratureRule rule;
    rule.exactness = 2 * n - 1;
    detail::golub_welsch(a, b, std::exp(std::lgamma(alpha + 1.0)), rule.nodes, rule.weights);
    return rule;
}

// Rule for integrals of the form  int_0^inf g(t) t^{-1/2} dt  where g is smooth
// with |g| decaying like exp(-decay*t). Substitutes t = u^2 (the integrand
// becomes 2 g(u^2), analytic through u = 0) and applies Gauss-Legendre on
// [0, sqrt(T)] with the tail cut at T chosen so the neglected mass is below
// tol/100 even with polynomial growth factors. Stored nodes are t-values and
// the weights absorb the full measure, so rule.integrate(g) approximates the
// subordination integral directly.
inline QuadratureRule halfline_subordination(double decay, double tol, int n_nodes = 0) {
    require(decay > 0.0, "halfline_subordination: decay rate must be positive");
    require(tol > 0.0, "halfline_subordination: tolerance must be positive");
    if (tol < 1e-14)
        throw resolution_error("halfline_subordination: requested tolerance below double-precision resolution");
    double T = std::log(100.0 / tol) / decay;
    while (sqr(1.0 + T) * std::exp(-decay * T) > 0.01 * tol) T *= 1.15;
    int n = n_nodes;
    if (n <= 0) n = std::max(120, static_cast<int>(std::ceil(20.0 * std::sqrt(decay * T))));
    QuadratureRule base = gauss_interval(n, 0.0, std::sqrt(T));
    QuadratureRule rule;
    rule.domain = QuadratureRule::Domain::halfline_subordinated;
    rule.exactness = -1;
    rule.nodes.resize(base.size());
    rule.weights.resize(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        rule.nodes[i] = sqr(base.nodes[i]);
        rule.weights[i] = 2.0 * base.weights[i];
    }
    return rule;
}

// Tensor-product rule on the unit sphere in R^d, d in {2,3,4}, integrating all
// spherical polynomials of total degree <= degree exactly: uniform angles on the
// circle, Gauss-Jacobi((d-3)/2) in the polar coordinate recursively above that.
inline QuadratureRule sphere_rule(int d, int degree) {
    if (d < 2 || d > 4) throw unsupported_dimension("sphere_rule: supported ambient dimensions are 2, 3, 4");
    require(degree >= 0 && degree <= 256, "sphere_rule: degree out of range");
    QuadratureRule rule;
    rule.domain = QuadratureRule::Domain::sphere;
    rule.point_dim = d;
    rule.exactness = degree;
    if (d == 2) {
        const int n = std::max(4, degree + 1);
        const double w = 2.0 * pi / n;
        for (int i = 0; i < n; ++i) {
            const double th = (2.0 * pi * i) / n;
            rule.nodes.push_back(std::cos(th));
            rule.nodes.push_back(std::sin(th));
            rule.weights.push_back(w);
        }
        return rule;
    }
    const QuadratureRule inner = sphere_rule(d - 1, degree);
    const QuadratureRule polar = gauss_jacobi(degree / 2 + 1, 0.5 * (d - 3), 0.5 * (d - 3));
    for (std::size_t iu = 0; iu < polar.size(); ++iu) {
        const double u = polar.nodes[iu];
        const double rho = std::sqrt(std::max(0.0, 1.0 - u * u));
        for (std::size_t iy = 0; iy < inner.size(); ++iy) {
            const double* y = inner.node(iy);
            for (int c = 0; c < d - 1; ++c) rule.nodes.push_back(rho * y[c]);
            rule.nodes.push_back(u);
            rule.weights.push_back(polar.weights[iu] * inner.weights[iy]);
        }
    }
    return rule;
}

// Same nodes viewed as points of the unit sphere in C^d (pairs of coordinates
// (Re z_1, Im z_1, ..., Re z_d, Im z_d)); d in {1,2}.
inline QuadratureRule complex_sphere_rule(int d_complex, int degree) {
    if (d_complex < 1 || d_complex > 2)
        throw unsupported_dimension("complex_sphere_rule: supported complex dimensions are 1, 2");
    return sphere_rule(2 * d_complex, degree);
}

// View node i of a complex sphere rule as a complex vector.
inline std::vector<cplx> complex_node(const QuadratureRule& rule, std::size_t i) {
    std::vector<cplx> z(static_cast<std::size_t>(rule.point_dim / 2));
    const double* p = rule.node(i);
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = cplx(p[2 * j], p[2 * j + 1]);
    return z;
}

}  // namespace harmosc
