#ifndef HESSLV_SOLUTIONS_HPP
#define HESSLV_SOLUTIONS_HPP

#include <vector>

#include "hesslv/integrate.hpp"
#include "hesslv/params.hpp"

namespace hesslv {

enum class SolutionSource {
    Reconstructed,
    ClosedFormMinus,     // w_{d-} branch of the critical-exponent problem
    ClosedFormPlus,      // w_{d+} branch
    ClosedFormExtremal,  // unique solution at lambda = mu*
    Singular,
};

const char* to_string(SolutionSource s);

struct RadialSample {
    double r;
    double u;
};

// Sampled radial solution of (P_lambda): u < 0 on (0,1), u(1) = 0,
// u nondecreasing, u(0) = u0.
struct RadialSolution {
    double lambda;
    double u0;
    std::vector<RadialSample> samples;
    SolutionSource source;
};

struct BifurcationSample {
    double t0;
    double lambda;  // Lambda(t0)
    double A;       // u(0) of the reconstructed solution
};

struct CountResult {
    int count;
    bool saturated;  // window/resolution-limited: count is a lower bound
};

// Radial solution of (P_lambda) for lambda = Lambda(t0): u(r) = 1 + (1-A) v(s0 r)
// with v taken along the orbit (normalized gauge) and A from v(s0) = -(1-A)^{-1}.
// DomainError if Lambda(t0) <= 0.
RadialSolution reconstruct_solution(const Orbit& orbit, double t0,
                                    const Params& params,
                                    std::size_t n_points = 1000);

// Number of level crossings of Lambda at lambda within the orbit window.
CountResult count_solutions(const Orbit& orbit, double lambda,
                            const Params& params);

// One (t0, Lambda(t0), A(t0)) record per grid time.
std::vector<BifurcationSample> bifurcation_diagram(const Orbit& orbit,
                                                   const Params& params,
                                                   const std::vector<double>& t_grid);

// The explicit singular solution u(r) = 1 - r^{-(2k+sigma)/(q-k)} at
// lambda = lambda~; defined for q > q*.
struct SingularSolution {
    double tau;     // (2k+sigma)/(q-k)
    double lambda;  // lambda~(k,sigma)

    double operator()(double r) const;
    double u_prime(double r) const;
};

SingularSolution singular_solution(const Params& params);

// The explicit heteroclinic orbit of the critical system (q = q*),
//   x(t) = (n+sigma) c / (c + e^{w t}),  y(t) = ((n-2k)/k) e^{w t} / (c + e^{w t}),
// with w = (2k+sigma)/(2k). Lies on the invariant line.
struct CriticalOrbit {
    double c;
    double n_plus_sigma;
    double y_limit;  // (n-2k)/k
    double omega;    // (2k+sigma)/(2k)

    PhasePoint operator()(double t) const;
    PhasePoint derivative(double t) const;
};

CriticalOrbit critical_orbit(double c, const Params& params);

// Positive roots d of lambda (d+1)^{k+1} = binom(n,k)((n-2k)/k)^k ((n+sigma)/n) d^k:
// {k} iff lambda = mu*, {d-, d+} with d- < k < d+ iff lambda < mu*, else empty.
std::vector<double> d_roots(double lambda, const Params& params);

// Closed-form solutions of the critical-exponent problem for 0 < lambda <= mu*:
// two (Bliss-profile) solutions below mu*, the single extremal one at mu*.
// DomainError above mu* or when q != q*. Params must carry q = q*(k,sigma).
std::vector<RadialSolution> critical_solutions(double lambda, const Params& params,
                                               std::size_t n_points = 1000);

// The Bliss-type entire solution w_c(r) of the critical equation on R^n
// (restriction to the ball gives the closed forms above).
struct BlissProfile {
    double amplitude;  // (c K / lambda)^{1/(q*-k)}
    double c;
    double m;  // (2k+sigma)/k
    double p;  // (n-2k)/(2k+sigma)

    double operator()(double r) const;  // w_c(r), negative
};

BlissProfile bliss_profile(double c, double lambda, const Params& params);

// Max interior finite-difference defect of
//   c_nk r^{1-n} (r^{n-k}(u')^k)' - lambda r^sigma (1-u)^q
// over the sample grid, normalized by max(1, max source magnitude).
double khessian_residual(const RadialSolution& solution, const Params& params);

} // namespace hesslv

#endif
