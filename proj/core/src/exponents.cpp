#include "hesslv/exponents.hpp"

#include <cmath>
#include <limits>

#include "hesslv/errors.hpp"

namespace hesslv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// d/dq of f_ksigma; f is strictly decreasing in q on (k, inf).
double f_ksigma_deriv(double q, const Params& p) {
    const double m = 2.0 * p.k + p.sigma;
    const double d = q - p.k;
    return -m * (p.k + 1.0 + std::sqrt(d / q)) / (d * d);
}

} // namespace

const char* to_string(Regime r) {
    switch (r) {
        case Regime::Center: return "Center";
        case Regime::Spiral: return "Spiral";
        case Regime::StableNode: return "StableNode";
        case Regime::UnstableExcluded: return "UnstableExcluded";
    }
    return "?";
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b *= static_cast<double>(n - k + i) / i;
    return b;
}

double c_nk(const Params& p) { return binomial(p.n, p.k) / p.n; }

double tau_sigma(const Params& p) { return (2.0 * p.k + p.sigma) / (p.q - p.k); }

double a_sigma(const Params& p) { return p.q * (p.n - 2.0 * p.k) - (p.n + p.sigma) * p.k; }

double q_star(const Params& p) {
    return ((p.n + 2.0) * p.k + p.sigma * (p.k + 1.0)) / (p.n - 2.0 * p.k);
}

double f_ksigma(double q, const Params& p) {
    if (!(q > p.k)) throw DomainError("q <= k");
    const double m = 2.0 * p.k + p.sigma;
    const double d = q - p.k;
    return 2.0 * q * m / (p.k * d) + (2.0 * m / p.k) * std::sqrt(q / d) +
           m * (p.k - 1.0) / d;
}

double q_joseph_lundgren(const Params& p) {
    const double k = p.k;
    const double s = p.sigma;
    const double n = p.n;
    if (n <= 2.0 * k + 8.0 + 4.0 * s / k) return kInf;

    const double root = std::sqrt(k * (2.0 * k + s) * ((k + 1.0) * n - k * (2.0 - s)));
    const double num = k * (k + 1.0) * n - k * k * (2.0 - s) + 2.0 * k + s - 2.0 * root;
    const double den = k * (k + 1.0) * n - 2.0 * k * k * (k + 3.0) - 2.0 * k * s - 2.0 * root;
    double q = k * num / den;

    // Newton-polish as the root of f_ksigma(q) = n-2k; the closed form and
    // the root must agree, polishing guards against cancellation in `den`.
    const double target = n - 2.0 * k;
    for (int it = 0; it < 6; ++it) {
        const double g = f_ksigma(q, p) - target;
        const double step = g / f_ksigma_deriv(q, p);
        q -= step;
        if (std::abs(step) <= 1e-16 * q) break;
    }
    return q;
}

double lambda_tilde(const Params& p) { return c_nk(p) * lambda_bar(p); }

double lambda_bar(const Params& p) {
    const double tau = tau_sigma(p);
    return std::pow(tau, p.k) * (p.n - 2.0 * p.k - p.k * tau);
}

double mu_star(const Params& p) {
    return binomial(p.n, p.k) * ((p.n + p.sigma) / p.n) *
           std::pow(p.n - 2.0 * p.k, p.k) / std::pow(p.k + 1.0, p.k + 1);
}

double interior_discriminant(const Params& p) {
    const double m = 2.0 * p.k + p.sigma;
    const double a = a_sigma(p);
    const double d = p.q - p.k;
    return ((m - a) * (m - a) - 4.0 * m * d * a / p.k) / (d * d);
}

Regime classify_regime(const Params& p) {
    const double qs = q_star(p);
    if (std::abs(p.q - qs) < 1e-12 * std::max(1.0, p.q)) return Regime::Center;
    if (p.q < qs) return Regime::UnstableExcluded;
    if (p.q < q_joseph_lundgren(p)) return Regime::Spiral;
    return Regime::StableNode;
}

ExponentReport exponent_report(const Params& p) {
    ExponentReport r;
    r.c_nk = c_nk(p);
    r.tau_sigma = tau_sigma(p);
    r.a_sigma = a_sigma(p);
    r.q_star = q_star(p);
    r.q_jl = q_joseph_lundgren(p);
    r.lambda_tilde = lambda_tilde(p);
    r.mu_star = mu_star(p);
    const double m = 2.0 * p.k + p.sigma;
    r.trace_j = (m - r.a_sigma) / (p.q - p.k);
    r.det_j = m * r.a_sigma / (p.k * (p.q - p.k));
    r.discriminant = interior_discriminant(p);
    r.regime = classify_regime(p);
    return r;
}

} // namespace hesslv
