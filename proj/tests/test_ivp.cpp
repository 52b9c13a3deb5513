#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hesslv/errors.hpp"
#include "hesslv/exponents.hpp"
#include "hesslv/integrate.hpp"
#include "hesslv/ivp.hpp"
#include "hesslv/params.hpp"
#include "hesslv/phase.hpp"
#include "support.hpp"

using namespace hesslv;

namespace {
const Params set_a = validate_params(5, 1, 0.0, 3.0);
const Params set_b = validate_params(12, 1, 0.0, 5.0);

// Exact solution of the normalized IVP at q = q*(k,sigma):
//   v(s) = -(c / (c + s^m))^p,  m = (2k+sigma)/k, p = (n-2k)/(2k+sigma),
//   c^k = (n+sigma)(k+1)^{k+1} / (k^k (n-2k)).
struct ExactCritical {
    double c, m, p;
    explicit ExactCritical(const Params& prm) {
        m = (2.0 * prm.k + prm.sigma) / prm.k;
        p = (prm.n - 2.0 * prm.k) / (2.0 * prm.k + prm.sigma);
        c = std::pow((prm.n + prm.sigma) * std::pow(prm.k + 1.0, prm.k + 1) /
                         (std::pow(prm.k, prm.k) * (prm.n - 2.0 * prm.k)),
                     1.0 / prm.k);
    }
    double v(double s) const { return -std::pow(c / (c + std::pow(s, m)), p); }
    double v_prime(double s) const {
        const double sm = std::pow(s, m);
        return -v(s) * p * m * sm / (s * (c + sm));
    }
};
} // namespace

TEST_CASE("initial condition and series behavior near zero") {
    const RadialProfile prof = solve_ivp(set_a, 1.0);
    CHECK(prof.samples.front().s == 0.0);
    CHECK(prof.samples.front().v == -1.0);
    CHECK(prof.samples.front().v_prime == 0.0);
    CHECK(prof.lambda_bar == doctest::Approx(2.0));

    // v(s) ~ -1 + 0.2 s^2 with the next term O(s^4)
    for (const auto& smp : prof.samples) {
        if (smp.s <= 0.0 || smp.s > 0.02) continue;
        CHECK(smp.v == doctest::Approx(-1.0 + 0.2 * smp.s * smp.s).epsilon(1e-8));
    }
    for (std::size_t i = 1; i < prof.samples.size(); ++i) {
        CHECK(prof.samples[i].v > prof.samples[i - 1].v);  // strictly increasing
        CHECK(prof.samples[i].v < 0.0);
        CHECK(prof.samples[i].v >= -1.0);
    }
}

TEST_CASE("solver reproduces the exact critical-exponent solution") {
    for (const Params& p : {validate_params(5, 1, 0.0, 7.0 / 3.0),
                            validate_params(6, 2, 0.0, 8.0)}) {
        const ExactCritical exact(p);
        CHECK(exact.v(0.0) == doctest::Approx(-1.0).epsilon(1e-14));
        const RadialProfile prof = solve_ivp(p, 50.0);
        double worst = 0.0;
        for (const auto& smp : prof.samples)
            worst = std::max(worst, std::abs(smp.v - exact.v(smp.s)));
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("refused below the critical exponent") {
    CHECK_THROWS_AS(solve_ivp(validate_params(5, 1, 0.0, 2.0), 1.0), RegimeError);
    CHECK_THROWS_AS(solve_ivp(set_a, -1.0), DomainError);
}

TEST_CASE("phase image approaches (n+sigma, 0) as s -> 0") {
    IntegratorConfig cfg;
    cfg.abs_tol = 1e-16;  // handoff s0 = abs_tol^{1/4} = 1e-4 for set A
    const RadialProfile prof = solve_ivp(set_a, 1.0, cfg);
    const auto phase = to_phase(prof, set_a);
    REQUIRE(!phase.empty());
    const auto& [t0, p0] = phase.front();
    CHECK(std::exp(t0) == doctest::Approx(1e-4).epsilon(1e-10));
    CHECK(std::abs(p0.x - 5.0) < 1e-2);
    CHECK(p0.y < 1e-3);
    CHECK(p0.y > 0.0);
}

TEST_CASE("phase image matches the launched orbit after gauge alignment") {
    const Orbit orbit = integrate_orbit(set_a);
    const RadialProfile prof = solve_ivp(set_a, 1.0);
    const auto phase = to_phase(prof, set_a);
    // sample at s = 1 (t = 0) is the last one: s_max = 1
    const auto& [t_last, p_last] = phase.back();
    CHECK(t_last == doctest::Approx(0.0));
    const PhasePoint q = orbit.at(t_last - orbit.gauge_shift);
    CHECK(std::hypot(p_last.x - q.x, p_last.y - q.y) < 1e-5);
}

TEST_CASE("to_phase rejects degenerate samples") {
    RadialProfile prof;
    prof.lambda_bar = 2.0;
    prof.samples = {{0.0, -1.0, 0.0}, {0.5, -0.9, 0.0}};
    CHECK_THROWS_AS(to_phase(prof, set_a), DegenerateInput);
}

TEST_CASE("ivp residual: converged, exact, and broken profiles") {
    const Params crit = validate_params(5, 1, 0.0, 7.0 / 3.0);
    const double lb = lambda_bar(crit);

    // converged profile: residual small relative to the flux-derivative scale
    const RadialProfile prof = solve_ivp(set_a, 5.0);
    double max_rhs = 0.0;
    for (const auto& smp : prof.samples)
        if (smp.s > 0.0)
            max_rhs = std::max(max_rhs,
                               2.0 * std::pow(smp.s, 4.0) * std::pow(-smp.v, 3.0));
    CHECK(ivp_residual(prof, set_a) < 1e-4 * max_rhs);

    // exact critical-case closed form sampled densely: discretization-limited
    const ExactCritical exact(crit);
    RadialProfile exact_prof;
    exact_prof.lambda_bar = lb;
    exact_prof.samples.push_back({0.0, -1.0, 0.0});
    for (int i = 1; i <= 3000; ++i) {
        const double s = 3.0 * i / 3000.0;
        exact_prof.samples.push_back({s, exact.v(s), exact.v_prime(s)});
    }
    CHECK(ivp_residual(exact_prof, crit) < 1e-6);

    // constant profile: residual equals the full source term
    RadialProfile flat;
    flat.lambda_bar = lb;
    for (int i = 0; i <= 100; ++i)
        flat.samples.push_back({i / 100.0, -1.0, 0.0});
    const double res = ivp_residual(flat, crit);
    // max over interior samples of lambda_bar s^{n-1+sigma}
    const double expect = lb * std::pow(flat.samples[98].s, 4.0);
    CHECK(res == doctest::Approx(expect).epsilon(1e-12));
    CHECK(res > 0.0);
}

TEST_CASE("scaling invariance: rescaled profiles stay near-solutions") {
    const RadialProfile prof = solve_ivp(set_a, 8.0);
    const double res0 = ivp_residual(prof, set_a);
    const double delta = tau_sigma(set_a);  // (2k+sigma)/(q-k)
    for (const double a : {1.25, 0.8}) {
        RadialProfile scaled;
        scaled.lambda_bar = prof.lambda_bar;
        const double amp = std::pow(a, delta);
        for (const auto& smp : prof.samples)
            scaled.samples.push_back({smp.s / a, amp * smp.v, amp * a * smp.v_prime});
        const double res = ivp_residual(scaled, set_a);
        CHECK(res < 10.0 * res0);
        CHECK(res0 < 10.0 * res);
    }
}

TEST_CASE("phase-image velocity matches the planar field") {
    for (const Params& p : {set_a, set_b}) {
        const RadialProfile prof = solve_ivp(p, 100.0);
        const auto phase = to_phase(prof, p);
        REQUIRE(phase.size() > 11);
        std::vector<double> ts, xs, ys;
        for (const auto& [t, pt] : phase) {
            ts.push_back(t);
            xs.push_back(pt.x);
            ys.push_back(pt.y);
        }
        int checked = 0;
        for (std::size_t j = 2; j + 2 < ts.size(); ++j) {
            const PhasePoint f = vector_field({xs[j], ys[j]}, p);
            const double speed = std::hypot(f.x, f.y);
            if (speed < 1e-2) continue;  // FD meaningless near equilibria
            const double dxdt = testsup::poly_derivative_at(&ts[j - 2], &xs[j - 2], 5, ts[j]);
            const double dydt = testsup::poly_derivative_at(&ts[j - 2], &ys[j - 2], 5, ts[j]);
            CHECK(std::hypot(dxdt - f.x, dydt - f.y) / speed < 1e-3);
            ++checked;
        }
        CHECK(checked > 50);
    }
}
