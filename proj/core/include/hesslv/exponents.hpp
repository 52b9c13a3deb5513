#ifndef HESSLV_EXPONENTS_HPP
#define HESSLV_EXPONENTS_HPP

#include "hesslv/params.hpp"

namespace hesslv {

// Stability regime of the interior equilibrium, classified by q against the
// two critical exponents: Center at q = q*, Spiral on (q*, q_JL), StableNode
// at and above q_JL, UnstableExcluded below q* (no global solution there).
enum class Regime { Center, Spiral, StableNode, UnstableExcluded };

const char* to_string(Regime r);

// Every derived constant of the problem in one record.
struct ExponentReport {
    double c_nk;          // binom(n,k)/n
    double tau_sigma;     // (2k+sigma)/(q-k)
    double a_sigma;       // q(n-2k) - (n+sigma)k
    double q_star;        // Tso / Hardy-Sobolev type exponent
    double q_jl;          // Joseph-Lundgren type exponent (+inf when n <= 2k+8+4 sigma/k)
    double lambda_tilde;  // parameter of the explicit singular solution
    double mu_star;       // extremal parameter of the critical-exponent problem
    double trace_j;       // trace of the Jacobian at the interior point
    double det_j;         // determinant of the Jacobian at the interior point
    double discriminant;  // trace^2 - 4 det
    Regime regime;
};

// binom(n,k) evaluated in floating point via products (n up to ~1e3).
double binomial(int n, int k);

double c_nk(const Params& p);
double tau_sigma(const Params& p);
double a_sigma(const Params& p);

// q*(k,sigma) = ((n+2)k + sigma(k+1)) / (n-2k)
double q_star(const Params& p);

// q_JL(k,sigma): closed-form quotient polished as the root of
// f_ksigma(q) = n-2k; +infinity for 2k < n <= 2k+8+4 sigma/k.
double q_joseph_lundgren(const Params& p);

// f_{k,sigma}(q) = 2q(2k+s)/(k(q-k)) + (2(2k+s)/k) sqrt(q/(q-k)) + (2k+s)(k-1)/(q-k)
double f_ksigma(double q, const Params& p);

// lambda~(k,sigma) = c_nk tau^k (n-2k-k tau); equals c_nk x^ y^^k.
double lambda_tilde(const Params& p);

// lambda~ / c_nk, the coefficient of the normalized IVP.
double lambda_bar(const Params& p);

// mu*(k,sigma) = binom(n,k) ((n+sigma)/n) (n-2k)^k / (k+1)^(k+1)
double mu_star(const Params& p);

// Discriminant of the interior Jacobian spectrum,
// (q-k)^-2 { [(2k+s)-a]^2 - 4 (2k+s)(q-k) a / k }.
double interior_discriminant(const Params& p);

Regime classify_regime(const Params& p);

ExponentReport exponent_report(const Params& p);

} // namespace hesslv

#endif
