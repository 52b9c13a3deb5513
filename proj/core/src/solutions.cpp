#include "hesslv/solutions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hesslv/errors.hpp"
#include "hesslv/exponents.hpp"
#include "series.hpp"

namespace hesslv {

namespace {

double smoothstep5(double x) {
    x = std::clamp(x, 0.0, 1.0);
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

// Evaluator for the normalized IVP solution v (v(0) = -1) along an orbit:
// singular-end series near s = 0, the phase-plane formula (normalized gauge)
// elsewhere, blended over [0.3,1]*s_hand so finite differences of the output
// see no kink.
struct OrbitV {
    const Orbit* orbit;
    Params params;
    double lb;  // lambda_bar
    detail::SingularSeries series;
    double s_hand;  // series -> formula handoff (normalized s)
    double shift;   // gauge shift

    explicit OrbitV(const Orbit& orb, const Params& p)
        : orbit(&orb), params(p), lb(lambda_bar(p)), series(p, lb) {
        shift = orb.gauge_shift;
        // Series is accurate while q b1 s^m stays below 1e-3; keep the
        // handoff above the first orbit sample so the formula path is defined.
        s_hand = std::pow(1e-3 / (p.q * series.b1), 1.0 / series.m);
        const double s_first = std::exp(orb.t_begin() + shift);
        s_hand = std::max(s_hand, 1.5 * s_first);
    }

    double formula(double s) const {
        const double t = std::log(s) - shift;
        const PhasePoint p = orbit->at(t);
        return -std::exp((std::log(p.x) + params.k * std::log(p.y) - std::log(lb) -
                          (2.0 * params.k + params.sigma) * std::log(s)) /
                         (params.q - params.k));
    }

    double operator()(double s) const {
        if (s <= 0.0) return -1.0;
        const double s_lo = 0.3 * s_hand;
        if (s <= s_lo) return series.v(s);
        if (s >= s_hand) return formula(s);
        const double w = smoothstep5((s - s_lo) / (s_hand - s_lo));
        return (1.0 - w) * series.v(s) + w * formula(s);
    }
};

double critical_K(const Params& p) {
    return binomial(p.n, p.k) *
           std::pow((p.n - 2.0 * p.k) / p.k, p.k) * (p.n + p.sigma) / p.n;
}

void require_critical_q(const Params& p) {
    const double qs = q_star(p);
    if (std::abs(p.q - qs) > 1e-9 * std::max(1.0, qs))
        throw DomainError("params.q != q*(k,sigma)");
}

// Value, first and second derivative at x of the Newton-form interpolant
// through (xs[i], ys[i]), i = 0..w-1.
struct FitDerivs {
    double value, d1, d2;
};

FitDerivs polyfit_derivs(const double* xs, const double* ys, int w, double x) {
    double dd[9];
    double coef[9];
    for (int i = 0; i < w; ++i) dd[i] = ys[i];
    coef[0] = dd[0];
    for (int order = 1; order < w; ++order) {
        for (int i = 0; i < w - order; ++i)
            dd[i] = (dd[i + 1] - dd[i]) / (xs[i + order] - xs[i]);
        coef[order] = dd[0];
    }
    double nf = 1.0, nd = 0.0, ndd = 0.0;
    FitDerivs out{coef[0], 0.0, 0.0};
    for (int i = 1; i < w; ++i) {
        const double dx = x - xs[i - 1];
        ndd = ndd * dx + 2.0 * nd;
        nd = nd * dx + nf;
        nf = nf * dx;
        out.value += coef[i] * nf;
        out.d1 += coef[i] * nd;
        out.d2 += coef[i] * ndd;
    }
    return out;
}

} // namespace

const char* to_string(SolutionSource s) {
    switch (s) {
        case SolutionSource::Reconstructed: return "Reconstructed";
        case SolutionSource::ClosedFormMinus: return "ClosedFormMinus";
        case SolutionSource::ClosedFormPlus: return "ClosedFormPlus";
        case SolutionSource::ClosedFormExtremal: return "ClosedFormExtremal";
        case SolutionSource::Singular: return "Singular";
    }
    return "?";
}

RadialSolution reconstruct_solution(const Orbit& orbit, double t0,
                                    const Params& params, std::size_t n_points) {
    if (n_points < 8) throw DomainError("n_points too small");
    const LambdaProfile lam = lambda_profile(orbit, params);
    const double lambda = lam(t0);
    if (!(lambda > 0.0)) throw DomainError("Lambda(t0) <= 0");

    const OrbitV v(orbit, params);
    const double s0 = std::exp(t0 + v.shift);
    const double v0 = v.formula(s0);
    const double one_minus_a = -1.0 / v0;
    const double a = 1.0 - one_minus_a;

    RadialSolution sol;
    sol.lambda = lambda;
    sol.u0 = a;
    sol.source = SolutionSource::Reconstructed;
    sol.samples.reserve(n_points + 40);
    sol.samples.push_back({0.0, a});

    auto push = [&](double r, bool exact_end) {
        const double u = exact_end ? 0.0 : 1.0 + one_minus_a * v(s0 * r);
        sol.samples.push_back({r, u});
    };

    // Geometric grid refined toward r = 0 to resolve the u'(0) = 0 flatness.
    // The first radius balances two floors that scale together with the
    // profile curvature: small enough that the difference slope at 0 stays
    // below 1e-3, large enough that the r^m variation is not lost to float
    // quantization. Below the knee the tail is log-sparse so second
    // differences over wide stencils stay above the quantization floor.
    const double m = v.series.m;
    const double slope_coef =
        std::abs(one_minus_a) * v.series.b1 * std::pow(s0, m) * m;
    const double r_slope =
        slope_coef > 0.0 ? std::pow(1e-3 / slope_coef, 1.0 / (m - 1.0)) : 1.0;
    const double r_min = std::clamp(0.5 * r_slope, 1e-9, 1e-5);
    const double r_knee = 2e-3;
    const int tail_points = 8;
    const double tail_step = std::log(r_knee / r_min) / tail_points;
    for (int j = 0; j < tail_points; ++j)
        push(r_min * std::exp(tail_step * j), false);
    const std::size_t grid = n_points;
    for (std::size_t j = 0; j < grid; ++j) {
        const double frac = static_cast<double>(j) / (grid - 1);
        const bool last = j + 1 == grid;
        push(last ? 1.0 : r_knee * std::pow(1.0 / r_knee, frac), last);
    }
    return sol;
}

CountResult count_solutions(const Orbit& orbit, double lambda,
                            const Params& params) {
    if (!(lambda > 0.0)) throw DomainError("lambda <= 0");
    const std::vector<double> times = level_crossings(orbit, lambda, params);
    CountResult res{static_cast<int>(times.size()), false};
    if (times.empty()) return res;

    // Saturation: crossings still occurring at the end of the window mean the
    // count is a lower bound, not a total.
    double window = 0.05 * (orbit.t_end() - orbit.t_begin());
    if (orbit.regime == Regime::Spiral) {
        const CriticalPoint cp = interior_jacobian(params);
        const double im = std::abs(cp.eig1.imag());
        if (im > 0.0) window = std::max(window, 2.5 * std::numbers::pi / im);
    }
    res.saturated = orbit.t_end() - times.back() <= window;
    return res;
}

std::vector<BifurcationSample> bifurcation_diagram(const Orbit& orbit,
                                                   const Params& params,
                                                   const std::vector<double>& t_grid) {
    const LambdaProfile lam = lambda_profile(orbit, params);
    const OrbitV v(orbit, params);
    std::vector<BifurcationSample> out;
    out.reserve(t_grid.size());
    for (const double t0 : t_grid) {
        const double s0 = std::exp(t0 + v.shift);
        const double v0 = v.formula(s0);
        out.push_back({t0, lam(t0), 1.0 + 1.0 / v0});
    }
    return out;
}

double SingularSolution::operator()(double r) const {
    return 1.0 - std::pow(r, -tau);
}

double SingularSolution::u_prime(double r) const {
    return tau * std::pow(r, -tau - 1.0);
}

SingularSolution singular_solution(const Params& params) {
    const double qs = q_star(params);
    if (!(params.q > qs + 1e-12 * std::max(1.0, qs)))
        throw DomainError("singular solution requires q > q*(k,sigma)");
    return {tau_sigma(params), lambda_tilde(params)};
}

PhasePoint CriticalOrbit::operator()(double t) const {
    const double g = c * std::exp(-omega * t);
    if (std::isinf(g)) return {n_plus_sigma, 0.0};
    return {n_plus_sigma * g / (1.0 + g), y_limit / (1.0 + g)};
}

PhasePoint CriticalOrbit::derivative(double t) const {
    const double g = c * std::exp(-omega * t);
    if (std::isinf(g)) return {0.0, 0.0};
    const double den = (1.0 + g) * (1.0 + g);
    return {-n_plus_sigma * omega * g / den, y_limit * omega * g / den};
}

CriticalOrbit critical_orbit(double c, const Params& params) {
    if (!(c > 0.0)) throw DomainError("c <= 0");
    require_critical_q(params);
    // Time exponent (2k+sigma)/k: the unique rate for which the closed form
    // satisfies the critical system (and the only one consistent with the
    // c + r^{(2k+sigma)/k} denominator of the Bliss profile under r = e^t).
    return {c, params.n + params.sigma,
            (params.n - 2.0 * params.k) / params.k,
            (2.0 * params.k + params.sigma) / params.k};
}

std::vector<double> d_roots(double lambda, const Params& params) {
    if (!(lambda > 0.0)) throw DomainError("lambda <= 0");
    const double K = critical_K(params);
    const double k = params.k;

    auto g = [&](double d) {
        return lambda * std::pow(d + 1.0, k + 1.0) - K * std::pow(d, k);
    };
    auto gp = [&](double d) {
        return lambda * (k + 1.0) * std::pow(d + 1.0, k) -
               K * k * std::pow(d, k - 1.0);
    };

    const double scale =
        std::max(lambda * std::pow(k + 1.0, k + 1.0), K * std::pow(k, k));
    if (std::abs(g(k)) < 1e-10 * scale) return {k};  // double root at lambda = mu*
    if (g(k) > 0.0) return {};                       // lambda > mu*

    auto polish = [&](double lo, double hi) {
        double glo = g(lo);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double gm = g(mid);
            if ((glo < 0.0) == (gm < 0.0)) {
                lo = mid;
                glo = gm;
            } else {
                hi = mid;
            }
            if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
        }
        double d = 0.5 * (lo + hi);
        for (int it = 0; it < 4; ++it) {
            const double step = g(d) / gp(d);
            if (!std::isfinite(step)) break;
            d -= step;
        }
        return d;
    };

    // g(0) = lambda > 0 > g(k), and g -> +inf as d -> inf.
    double hi = k * 1e6;
    while (g(hi) <= 0.0) hi *= 10.0;
    return {polish(0.0, k), polish(k, hi)};
}

double BlissProfile::operator()(double r) const {
    return -amplitude / std::pow(c + std::pow(r, m), p);
}

BlissProfile bliss_profile(double c, double lambda, const Params& params) {
    if (!(c > 0.0)) throw DomainError("c <= 0");
    if (!(lambda > 0.0)) throw DomainError("lambda <= 0");
    const double K = critical_K(params);
    const double expo = (params.n - 2.0 * params.k) /
                        ((2.0 * params.k + params.sigma) * (params.k + 1.0));
    return {std::pow(c * K / lambda, expo), c,
            (2.0 * params.k + params.sigma) / params.k,
            (params.n - 2.0 * params.k) / (2.0 * params.k + params.sigma)};
}

std::vector<RadialSolution> critical_solutions(double lambda, const Params& params,
                                               std::size_t n_points) {
    require_critical_q(params);
    if (!(lambda > 0.0)) throw DomainError("lambda <= 0");
    const double mu = mu_star(params);
    if (lambda > mu * (1.0 + 1e-12))
        throw DomainError("lambda > mu*(k,sigma): no solution of the critical problem");
    if (n_points < 8) throw DomainError("n_points too small");

    const std::vector<double> roots = d_roots(lambda, params);
    std::vector<RadialSolution> out;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const BlissProfile w = bliss_profile(1.0 / roots[i], lambda, params);
        RadialSolution sol;
        sol.lambda = lambda;
        sol.source = roots.size() == 1 ? SolutionSource::ClosedFormExtremal
                     : i == 0          ? SolutionSource::ClosedFormMinus
                                       : SolutionSource::ClosedFormPlus;
        sol.samples.reserve(n_points);
        for (std::size_t j = 0; j < n_points; ++j) {
            const double r = static_cast<double>(j) / (n_points - 1);
            sol.samples.push_back({r, 1.0 + w(r)});
        }
        sol.u0 = sol.samples.front().u;
        out.push_back(std::move(sol));
    }
    return out;
}

double khessian_residual(const RadialSolution& solution, const Params& params) {
    const auto& ss = solution.samples;
    if (ss.size() < 5) throw DomainError("solution has fewer than 5 samples");
    const double lambda = solution.lambda;
    const double c = c_nk(params);

    std::size_t lo = 0;
    while (lo < ss.size() && ss[lo].r <= 0.0) ++lo;
    const std::size_t count = ss.size() - lo;
    const int w = count >= 9 ? 7 : 5;
    const int half = w / 2;
    if (count < static_cast<std::size_t>(w)) throw DomainError("too few positive-r samples");

    double worst = 0.0;
    double source_scale = 0.0;
    for (std::size_t j = lo; j < ss.size(); ++j)
        source_scale = std::max(source_scale,
                                lambda * std::pow(ss[j].r, params.sigma) *
                                    std::pow(1.0 - ss[j].u, params.q));

    double xs[9], ys[9];
    for (std::size_t j = lo + half; j + half < ss.size(); ++j) {
        for (int i = 0; i < w; ++i) {
            xs[i] = ss[j - half + i].r;
            ys[i] = ss[j - half + i].u;
        }
        const double r = ss[j].r;
        const FitDerivs fd = polyfit_derivs(xs, ys, w, r);
        const double up = fd.d1;
        const double upp = fd.d2;
        const double lhs =
            c * ((params.n - params.k) * std::pow(r, -params.k) * std::pow(up, params.k) +
                 params.k * std::pow(r, 1.0 - params.k) * std::pow(up, params.k - 1.0) * upp);
        const double rhs = lambda * std::pow(r, params.sigma) *
                           std::pow(1.0 - ss[j].u, params.q);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst / std::max(1.0, source_scale);
}

} // namespace hesslv
