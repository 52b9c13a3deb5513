#include "hesslv/ivp.hpp"

#include <algorithm>
#include <cmath>

#include "dopri5.hpp"
#include "hesslv/errors.hpp"
#include "hesslv/exponents.hpp"
#include "series.hpp"

namespace hesslv {

namespace {

double flux_of(double s, double v_prime, const Params& p) {
    if (s <= 0.0 || v_prime <= 0.0) return 0.0;
    return std::exp((p.n - p.k) * std::log(s) + p.k * std::log(v_prime));
}

// Derivative at xs[mid] of the interpolating quartic through 5 points.
double quartic_derivative_at(const double* xs, const double* ys, double x) {
    double c[5];
    double dd[5];
    for (int i = 0; i < 5; ++i) dd[i] = ys[i];
    c[0] = dd[0];
    for (int order = 1; order < 5; ++order) {
        for (int i = 0; i < 5 - order; ++i)
            dd[i] = (dd[i + 1] - dd[i]) / (xs[i + order] - xs[i]);
        c[order] = dd[0];
    }
    double nf = 1.0, nd = 0.0;   // Newton basis value and derivative
    double deriv = 0.0;
    for (int i = 1; i < 5; ++i) {
        nd = nd * (x - xs[i - 1]) + nf;
        nf = nf * (x - xs[i - 1]);
        deriv += c[i] * nd;
    }
    return deriv;
}

} // namespace

RadialProfile solve_ivp(const Params& params, double s_max,
                        const IntegratorConfig& cfg) {
    if (!(s_max > 0.0)) throw DomainError("s_max <= 0");
    const double qs = q_star(params);
    if (params.q < qs - 1e-12 * std::max(1.0, qs))
        throw RegimeError("q < q*(k,sigma): global existence not guaranteed, IVP refused");

    RadialProfile profile;
    profile.lambda_bar = lambda_bar(params);
    const double lb = profile.lambda_bar;
    const detail::SingularSeries series(params, lb);

    // The equation is singular at s = 0; start from the series at s0 chosen
    // so the neglected next-order term is below abs_tol.
    const double s0 = std::min(
        {1e-3, std::pow(cfg.abs_tol, params.k / (2.0 * (2.0 * params.k + params.sigma))),
         0.25 * s_max});

    profile.samples.push_back({0.0, -1.0, 0.0});
    profile.samples.push_back({s0, series.v(s0), series.v_prime(s0)});

    // State is (v, ln F): the flux spans hundreds of orders of magnitude, so
    // its log keeps the error control relative throughout.
    auto field = [&](double s, const detail::State<2>& y, detail::State<2>& dydt) {
        const double v = y[0];
        const double log_flux = y[1];
        if (!std::isfinite(log_flux)) throw NonConvergence("flux degenerated");
        if (v >= 0.0) throw NonConvergence("v reached zero");
        dydt[0] = std::exp((log_flux - (params.n - params.k) * std::log(s)) / params.k);
        dydt[1] = lb * std::exp((params.n - 1.0 + params.sigma) * std::log(s) +
                                params.q * std::log(-v) - log_flux);
    };

    detail::StepOptions opt;
    opt.rel_tol = cfg.rel_tol;
    opt.abs_tol = cfg.abs_tol;
    opt.max_step = s_max;  // step growth follows the power-law scale
    opt.max_steps = cfg.max_steps;
    opt.initial_step = s0 / 20.0;

    auto on_accept = [&](double s, const detail::State<2>& y,
                         const detail::State<2>& f) {
        profile.samples.push_back({s, y[0], f[0]});
        return detail::StepFlow::Continue;
    };

    const double log_flux0 = (params.n - params.k) * std::log(s0) +
                             params.k * std::log(series.v_prime(s0));
    detail::dopri5_integrate<2>(field, {series.v(s0), log_flux0}, s0, s_max, opt,
                                on_accept);
    return profile;
}

std::vector<std::pair<double, PhasePoint>> to_phase(const RadialProfile& profile,
                                                    const Params& params) {
    const double lb = profile.lambda_bar;
    std::vector<std::pair<double, PhasePoint>> out;
    out.reserve(profile.samples.size());
    for (const auto& smp : profile.samples) {
        if (smp.s <= 0.0) continue;
        if (smp.v_prime <= 0.0)
            throw DegenerateInput("v' = 0 at s > 0: phase transform undefined");
        const double t = std::log(smp.s);
        const double x =
            std::exp(std::log(lb) + (params.k + params.sigma) * t +
                     params.q * std::log(-smp.v) - params.k * std::log(smp.v_prime));
        const double y = smp.s * smp.v_prime / (-smp.v);
        out.push_back({t, PhasePoint{x, y}});
    }
    return out;
}

double ivp_residual(const RadialProfile& profile, const Params& params) {
    const auto& ss = profile.samples;
    if (ss.size() < 5) throw DomainError("profile has fewer than 5 samples");
    const double lb = profile.lambda_bar;

    // First positive-s sample index.
    std::size_t lo = 0;
    while (lo < ss.size() && ss[lo].s <= 0.0) ++lo;

    double worst = 0.0;
    for (std::size_t j = lo + 2; j + 2 < ss.size(); ++j) {
        double xs[5], fs[5];
        for (int i = 0; i < 5; ++i) {
            const auto& smp = ss[j - 2 + i];
            xs[i] = smp.s;
            fs[i] = flux_of(smp.s, smp.v_prime, params);
        }
        const double dflux = quartic_derivative_at(xs, fs, xs[2]);
        const double mv = -ss[j].v;
        const double rhs =
            mv > 0.0 ? lb * std::exp((params.n - 1.0 + params.sigma) * std::log(ss[j].s) +
                                     params.q * std::log(mv))
                     : 0.0;
        worst = std::max(worst, std::abs(dflux - rhs));
    }
    return worst;
}

} // namespace hesslv
