#ifndef HESSLV_IVP_HPP
#define HESSLV_IVP_HPP

#include <vector>

#include "hesslv/integrate.hpp"
#include "hesslv/params.hpp"
#include "hesslv/phase.hpp"

namespace hesslv {

// Direct solver for the rescaled singular IVP
//   (s^{n-k} (v')^k)' = s^{n-1+sigma} lambda_bar (-v)^q,  v(0) = -1, v'(0) = 0.
// Serves as the independent oracle against the phase-plane pipeline.

struct ProfileSample {
    double s;
    double v;
    double v_prime;
};

struct RadialProfile {
    std::vector<ProfileSample> samples;  // s strictly increasing, starts at 0
    double lambda_bar;
};

// Two-term series start near s = 0 (the equation is singular there), then
// adaptive integration of (v, F) with F = s^{n-k}(v')^k up to s_max.
// RegimeError for q < q* (no global-existence guarantee); NonConvergence on
// step failure or negative flux.
RadialProfile solve_ivp(const Params& params, double s_max,
                        const IntegratorConfig& cfg = {});

// Image of the profile under the phase-plane transform, t = ln s,
//   x = lambda_bar s^{k+sigma} (-v)^q / (v')^k,  y = s v' / (-v).
// Skips s = 0; DegenerateInput if v' = 0 at some s > 0.
std::vector<std::pair<double, PhasePoint>> to_phase(const RadialProfile& profile,
                                                    const Params& params);

// Max over interior samples of |F'(s) - s^{n-1+sigma} lambda_bar (-v)^q|,
// with F'(s) from centered 5-point differences of the stored flux.
double ivp_residual(const RadialProfile& profile, const Params& params);

} // namespace hesslv

#endif
