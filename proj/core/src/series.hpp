#ifndef HESSLV_SRC_SERIES_HPP
#define HESSLV_SRC_SERIES_HPP

#include <cmath>

#include "hesslv/params.hpp"

namespace hesslv::detail {

// Three-term expansion of the normalized IVP solution near the singular end:
//   v(s) = -1 + b1 s^m + b2 s^{2m} + b3 s^{3m},  m = (2k+sigma)/k,
// with coefficients matched order by order in the flux equation
//   (s^{n-k}(v')^k)' = lambda_bar s^{n-1+sigma} (-v)^q.
struct SingularSeries {
    double m;
    double b1, b2, b3;

    SingularSeries(const Params& p, double lambda_bar) {
        const double ns = p.n + p.sigma;
        m = (2.0 * p.k + p.sigma) / p.k;
        b1 = (p.k / (2.0 * p.k + p.sigma)) * std::pow(lambda_bar / ns, 1.0 / p.k);
        b2 = -p.q * b1 * b1 * ns / (2.0 * p.k * (ns + m));
        const double c2 = ns * (0.5 * p.q * (p.q - 1.0) * b1 * b1 - p.q * b2) /
                          (ns + 2.0 * m);
        b3 = (c2 - 2.0 * p.k * (p.k - 1.0) * (b2 / b1) * (b2 / b1)) * b1 /
             (3.0 * p.k);
    }

    double v(double s) const {
        const double rho = std::pow(s, m);
        return -1.0 + rho * (b1 + rho * (b2 + rho * b3));
    }

    double v_prime(double s) const {
        const double rho = std::pow(s, m);
        return m * rho * (b1 + rho * (2.0 * b2 + rho * 3.0 * b3)) / s;
    }
};

} // namespace hesslv::detail

#endif
