#ifndef HESSLV_TESTS_SUPPORT_HPP
#define HESSLV_TESTS_SUPPORT_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

// Test-side numerical helpers, independent of the library implementation.

namespace testsup {

// Derivative at x of the interpolating polynomial through w points
// (Newton divided differences). Used as the finite-difference oracle.
inline double poly_derivative_at(const double* xs, const double* ys, int w, double x) {
    std::vector<double> dd(ys, ys + w), coef(w);
    coef[0] = dd[0];
    for (int order = 1; order < w; ++order) {
        for (int i = 0; i < w - order; ++i)
            dd[i] = (dd[i + 1] - dd[i]) / (xs[i + order] - xs[i]);
        coef[order] = dd[0];
    }
    double nf = 1.0, nd = 0.0, deriv = 0.0;
    for (int i = 1; i < w; ++i) {
        nd = nd * (x - xs[i - 1]) + nf;
        nf = nf * (x - xs[i - 1]);
        deriv += coef[i] * nd;
    }
    return deriv;
}

// Max defect of c r^{1-n} (r^{n-k} (u')^k)' = lam r^sigma g(u) over a sampled
// profile, with u' and the flux derivative from local 7-point fits; the
// source g is a callable so both (1-u)^q and (-u)^q forms can be checked.
template <class Source>
double radial_operator_defect(const std::vector<double>& r,
                              const std::vector<double>& u, double c_nk, int n,
                              int k, double lam, double sigma, Source&& g) {
    const int w = 7, half = 3;
    const std::size_t m = r.size();
    double worst = 0.0;
    std::vector<double> up(m, 0.0);
    for (std::size_t j = half; j + half < m; ++j)
        up[j] = poly_derivative_at(&r[j - half], &u[j - half], w, r[j]);
    for (std::size_t j = 2 * half; j + 2 * half < m; ++j) {
        double fx[7];
        for (int i = 0; i < w; ++i) {
            const std::size_t jj = j - half + i;
            fx[i] = std::pow(r[jj], n - k) * std::pow(up[jj], k);
        }
        const double dflux = poly_derivative_at(&r[j - half], fx, w, r[j]);
        const double lhs = c_nk * std::pow(r[j], 1.0 - n) * dflux;
        const double rhs = lam * std::pow(r[j], sigma) * g(u[j]);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

} // namespace testsup

#endif
