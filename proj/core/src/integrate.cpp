#include "hesslv/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "dopri5.hpp"
#include "hesslv/errors.hpp"

namespace hesslv {

namespace {

void validate_config(const IntegratorConfig& cfg, const Params& params) {
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0))
        throw DomainError("tolerances must be positive");
    if (cfg.rel_tol > 1e-6 || cfg.abs_tol > 1e-6)
        throw DomainError("tolerances must be <= 1e-6");
    if (!(cfg.t_max > 0.0)) throw DomainError("t_max <= 0");
    if (!(cfg.sink_radius > 0.0)) throw DomainError("sink_radius <= 0");
    if (!(cfg.max_step > 0.0)) throw DomainError("max_step <= 0");
    if (cfg.max_steps <= 0) throw DomainError("max_steps <= 0");
    if (cfg.epsilon_launch) {
        const double cap = 1e-4 * (params.n + params.sigma);
        if (!(*cfg.epsilon_launch > 0.0) || *cfg.epsilon_launch > cap)
            throw DomainError("epsilon_launch outside (0, 1e-4*(n+sigma)]");
    }
}

double dist(const PhasePoint& a, const PhasePoint& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Two-point quintic Hermite using position, velocity and acceleration at
// both ends of an accepted step.
double hermite5(double y0, double f0, double d0, double y1, double f1, double d1,
                double h, double th) {
    const double t2 = th * th, t3 = t2 * th, t4 = t3 * th, t5 = t4 * th;
    const double h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    const double h1 = th - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    const double h2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
    const double h3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    const double h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    const double h5 = 0.5 * (t3 - 2.0 * t4 + t5);
    return y0 * h0 + h * f0 * h1 + h * h * d0 * h2 + y1 * h3 + h * f1 * h4 +
           h * h * d1 * h5;
}

PhasePoint apply(const Mat2& m, const PhasePoint& v) {
    return {m.a11 * v.x + m.a12 * v.y, m.a21 * v.x + m.a22 * v.y};
}

} // namespace

const char* to_string(Termination t) {
    switch (t) {
        case Termination::ReachedSink: return "ReachedSink";
        case Termination::TimeLimit: return "TimeLimit";
        case Termination::LeftQuadrant: return "LeftQuadrant";
    }
    return "?";
}

PhasePoint Orbit::at(double t) const {
    const double tol = 1e-9 * std::max(1.0, std::abs(t_end()));
    if (t < t_begin() - tol || t > t_end() + tol)
        throw DomainError("dense evaluation outside the orbit window");
    t = std::clamp(t, t_begin(), t_end());

    auto it = std::upper_bound(samples.begin(), samples.end(), t,
                               [](double v, const OrbitSample& s) { return v < s.t; });
    const std::size_t hi = std::min<std::size_t>(
        std::max<std::ptrdiff_t>(1, it - samples.begin()), samples.size() - 1);
    const OrbitSample& s0 = samples[hi - 1];
    const OrbitSample& s1 = samples[hi];
    const double h = s1.t - s0.t;
    const double th = h > 0.0 ? (t - s0.t) / h : 0.0;
    return {hermite5(s0.p.x, s0.f.x, s0.fd.x, s1.p.x, s1.f.x, s1.fd.x, h, th),
            hermite5(s0.p.y, s0.f.y, s0.fd.y, s1.p.y, s1.f.y, s1.fd.y, h, th)};
}

Orbit integrate_orbit(const Params& params, const IntegratorConfig& cfg) {
    validate_config(cfg, params);

    const Regime regime = classify_regime(params);
    if (regime == Regime::UnstableExcluded)
        throw RegimeError("q < q*(k,sigma): no global solution, orbit integration refused");

    Orbit orbit;
    orbit.params = params;
    orbit.regime = regime;

    const double ns = params.n + params.sigma;
    const double eps = cfg.epsilon_launch.value_or(1e-8 * ns);
    const PhasePoint dir = launch_direction(params);
    orbit.launch = {ns + eps * dir.x, eps * dir.y};
    orbit.epsilon = eps;

    const double lb = lambda_bar(params);

    double stop_radius = cfg.sink_radius;
    if (regime == Regime::Center) {
        // The launch lies on the invariant line; the orbit is the heteroclinic
        // connection ending at (0, (n-2k)/k). Stop before the saddle deflects
        // the trajectory off the line.
        orbit.terminal = {0.0, (params.n - 2.0 * params.k) / params.k};
        stop_radius = std::max(cfg.sink_radius,
                               1e-4 * std::hypot(ns, orbit.terminal.y));
    } else {
        orbit.terminal = interior_point(params);
    }

    auto field = [&params](double, const detail::State<2>& y, detail::State<2>& dydt) {
        const PhasePoint f = vector_field({y[0], y[1]}, params);
        dydt[0] = f.x;
        dydt[1] = f.y;
    };

    auto record = [&](double t, const PhasePoint& p) {
        const PhasePoint f = vector_field(p, params);
        const PhasePoint fd = apply(field_jacobian(p, params), f);
        orbit.samples.push_back({t, p, f, fd});
    };

    record(0.0, orbit.launch);

    bool done = false;
    auto on_accept = [&](double t, const detail::State<2>& y,
                         const detail::State<2>&) {
        const PhasePoint p{y[0], y[1]};
        record(t, p);
        if (p.x < 0.0 || p.y < 0.0) {
            orbit.terminated = Termination::LeftQuadrant;
            done = true;
            return detail::StepFlow::Stop;
        }
        if (dist(p, orbit.terminal) <= stop_radius) {
            orbit.terminated = Termination::ReachedSink;
            done = true;
            return detail::StepFlow::Stop;
        }
        return detail::StepFlow::Continue;
    };

    detail::StepOptions opt;
    opt.rel_tol = cfg.rel_tol;
    opt.abs_tol = cfg.abs_tol;
    opt.max_step = cfg.max_step;
    opt.max_steps = cfg.max_steps;
    opt.initial_step = std::min(cfg.max_step, 1e-4);

    detail::dopri5_integrate<2>(field, {orbit.launch.x, orbit.launch.y}, 0.0,
                                cfg.t_max, opt, on_accept);
    if (!done) orbit.terminated = Termination::TimeLimit;

    // Gauge: the normalized IVP solution has g(t) = x y^k e^{-(2k+sigma)t} ->
    // lambda_bar a^{2k+sigma} as t -> -inf. Near the saddle g is analytic in
    // the distance d, g = g_inf + G1 d + O(d^2); extrapolating from two early
    // samples removes the O(eps) launch bias.
    {
        const double msig = 2.0 * params.k + params.sigma;
        auto g_of = [&](const OrbitSample& s) {
            return s.p.x * std::pow(s.p.y, params.k) * std::exp(-msig * s.t);
        };
        auto d_of = [&](const OrbitSample& s) {
            return std::hypot(s.p.x - ns, s.p.y);
        };
        const OrbitSample& first = orbit.samples.front();
        double g_inf = g_of(first);
        for (const auto& s : orbit.samples) {
            if (d_of(s) >= 8.0 * eps) {
                const double da = d_of(first), db = d_of(s);
                g_inf = (g_of(first) * db - g_of(s) * da) / (db - da);
                break;
            }
        }
        orbit.gauge_shift = std::log(g_inf / lb) / msig;
    }
    return orbit;
}

double LambdaProfile::operator()(double t) const {
    const PhasePoint p = orbit->at(t);
    return c * p.x * std::pow(p.y, k);
}

LambdaProfile lambda_profile(const Orbit& orbit, const Params& params) {
    if (orbit.samples.size() < 2) throw DomainError("orbit has fewer than 2 samples");
    return {&orbit, c_nk(params), params.k};
}

std::vector<double> level_crossings(const Orbit& orbit, double level,
                                    const Params& params) {
    const LambdaProfile lam = lambda_profile(orbit, params);
    const double tol = 1e-10 * std::max(1.0, level);
    std::vector<double> out;

    auto refine = [&](double a, double b, double ga) {
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            const double gm = lam(mid) - level;
            if (std::abs(gm) <= tol ||
                (b - a) <= 1e-15 * std::max(1.0, std::abs(mid)))
                return mid;
            if ((ga < 0.0) != (gm < 0.0)) {
                b = mid;
            } else {
                a = mid;
                ga = gm;
            }
        }
        return 0.5 * (a + b);
    };

    // Scan at sub-step resolution so a pair of crossings inside one accepted
    // step is not missed.
    constexpr double scan_dt = 0.01;
    double t_prev = orbit.t_begin();
    double g_prev = lam(t_prev) - level;
    for (std::size_t i = 1; i < orbit.samples.size(); ++i) {
        const double t1 = orbit.samples[i - 1].t;
        const double t2 = orbit.samples[i].t;
        const int pieces = std::max(1, static_cast<int>(std::ceil((t2 - t1) / scan_dt)));
        for (int j = 1; j <= pieces; ++j) {
            const double t = t1 + (t2 - t1) * j / pieces;
            const double g = lam(t) - level;
            if ((g_prev < 0.0) != (g < 0.0))
                out.push_back(refine(t_prev, t, g_prev));
            t_prev = t;
            g_prev = g;
        }
    }
    return out;
}

double lambda_star_lower_bound(const Orbit& orbit, const Params& params) {
    const LambdaProfile lam = lambda_profile(orbit, params);
    double best = 0.0;
    constexpr double scan_dt = 0.01;
    for (std::size_t i = 1; i < orbit.samples.size(); ++i) {
        const double t1 = orbit.samples[i - 1].t;
        const double t2 = orbit.samples[i].t;
        const int pieces = std::max(1, static_cast<int>(std::ceil((t2 - t1) / scan_dt)));
        for (int j = 0; j <= pieces; ++j)
            best = std::max(best, lam(t1 + (t2 - t1) * j / pieces));
    }
    return best;
}

} // namespace hesslv
