#include "hesslv/params.hpp"

#include <cmath>

#include "hesslv/errors.hpp"

namespace hesslv {

Params validate_params(int n, int k, double sigma, double q,
                       std::optional<double> lambda) {
    if (k < 1) throw DomainError("k < 1");
    if (n <= 2 * k) throw DomainError("n <= 2k");
    if (!(sigma >= 0.0)) throw DomainError("sigma < 0");
    if (!(q > static_cast<double>(k))) throw DomainError("q <= k");
    if (!std::isfinite(sigma) || !std::isfinite(q))
        throw DomainError("non-finite parameter");
    if (lambda && !(*lambda > 0.0)) throw DomainError("lambda <= 0");
    return Params{n, k, sigma, q, lambda};
}

} // namespace hesslv
