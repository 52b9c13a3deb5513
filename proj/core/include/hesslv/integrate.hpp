#ifndef HESSLV_INTEGRATE_HPP
#define HESSLV_INTEGRATE_HPP

#include <optional>
#include <vector>

#include "hesslv/exponents.hpp"
#include "hesslv/params.hpp"
#include "hesslv/phase.hpp"

namespace hesslv {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double t_max = 200.0;
    // Offset along the unstable eigenvector; defaults to 1e-8*(n+sigma).
    std::optional<double> epsilon_launch{};
    double sink_radius = 1e-8;
    long max_steps = 1'000'000;
    // Cap on the step size; bounds the dense-output interpolation error.
    double max_step = 5e-3;
};

enum class Termination {
    ReachedSink,   // within sink_radius of the orbit's terminal equilibrium
    TimeLimit,     // integrated to t_max
    LeftQuadrant,  // left the closed first quadrant (never for default launches)
};

const char* to_string(Termination t);

struct OrbitSample {
    double t;
    PhasePoint p;
    PhasePoint f;   // field at p
    PhasePoint fd;  // J(p) f(p), second time derivative
};

// Trajectory of the planar system launched from the saddle (n+sigma, 0) along
// its unstable manifold. Immutable after construction; dense evaluation by
// quintic Hermite interpolation between accepted steps.
struct Orbit {
    std::vector<OrbitSample> samples;
    Termination terminated = Termination::TimeLimit;
    Params params;
    Regime regime = Regime::Spiral;
    PhasePoint launch;    // first state, (n+sigma,0) + eps*direction
    PhasePoint terminal;  // interior sink, or (0,(n-2k)/k) in the center case
    double epsilon = 0.0;
    // Time offset to the gauge of the normalized IVP solution (v(0) = -1):
    // normalized time t' = t + gauge_shift.
    double gauge_shift = 0.0;

    double t_begin() const { return samples.front().t; }
    double t_end() const { return samples.back().t; }

    // State at any t in [t_begin, t_end] (tiny tolerance at the ends).
    PhasePoint at(double t) const;
};

// Integrates from (n+sigma,0) + eps*v^ until the terminal equilibrium is
// reached, t_max elapses, or the quadrant is left. RegimeError below q*;
// NonConvergence when the step budget is exhausted or a step underflows.
Orbit integrate_orbit(const Params& params, const IntegratorConfig& cfg = {});

// The solution-parameter map along the orbit, Lambda(t) = c_nk x(t) y(t)^k.
struct LambdaProfile {
    const Orbit* orbit;
    double c;  // c_nk
    int k;

    double operator()(double t) const;
};

LambdaProfile lambda_profile(const Orbit& orbit, const Params& params);

// Strictly increasing times where Lambda(t) - level changes sign, each
// refined by bisection to |Lambda(t) - level| < 1e-10 max(1, level).
std::vector<double> level_crossings(const Orbit& orbit, double level,
                                    const Params& params);

// sup of Lambda over the computed window; a lower bound for the extremal
// parameter, not a claim of equality.
double lambda_star_lower_bound(const Orbit& orbit, const Params& params);

} // namespace hesslv

#endif
