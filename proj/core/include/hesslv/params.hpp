#ifndef HESSLV_PARAMS_HPP
#define HESSLV_PARAMS_HPP

#include <optional>

namespace hesslv {

// Problem data of (P_lambda): dimension n, Hessian order k, weight exponent
// sigma, source exponent q, and optionally the bifurcation parameter lambda.
// Admissible set: n > 2k, k >= 1, q > k, sigma >= 0, lambda > 0 when present.
struct Params {
    int n = 0;
    int k = 0;
    double sigma = 0.0;
    double q = 0.0;
    std::optional<double> lambda{};
};

// Checks every admissibility inequality; throws DomainError naming the
// violated one ("n <= 2k", "q <= k", "sigma < 0", "k < 1", "lambda <= 0").
Params validate_params(int n, int k, double sigma, double q,
                       std::optional<double> lambda = std::nullopt);

} // namespace hesslv

#endif
