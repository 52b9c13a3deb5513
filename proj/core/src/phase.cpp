#include "hesslv/phase.hpp"

#include <cmath>
#include <limits>

#include "hesslv/errors.hpp"
#include "hesslv/exponents.hpp"

namespace hesslv {

namespace {

std::pair<std::complex<double>, std::complex<double>> eigenvalues2(const Mat2& j) {
    const double tr = j.trace();
    const double disc = tr * tr - 4.0 * j.det();
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        return {{0.5 * (tr - root), 0.0}, {0.5 * (tr + root), 0.0}};
    }
    const double im = 0.5 * std::sqrt(-disc);
    return {{0.5 * tr, -im}, {0.5 * tr, im}};
}

PointKind classify(const Mat2& j) {
    const double tr = j.trace();
    const double det = j.det();
    if (det < 0.0) return PointKind::Saddle;
    const double disc = tr * tr - 4.0 * det;
    if (std::abs(tr) < 1e-12 * std::max(1.0, std::sqrt(std::abs(det))))
        return PointKind::Center;
    if (tr < 0.0) return disc < 0.0 ? PointKind::SpiralSink : PointKind::NodeSink;
    return disc < 0.0 ? PointKind::SpiralSource : PointKind::NodeSource;
}

CriticalPoint make_point(const PhasePoint& loc, const Params& params) {
    CriticalPoint cp;
    cp.location = loc;
    cp.jacobian = field_jacobian(loc, params);
    auto [e1, e2] = eigenvalues2(cp.jacobian);
    cp.eig1 = e1;
    cp.eig2 = e2;
    cp.poincare_index = cp.jacobian.det() < 0.0 ? -1 : 1;
    cp.kind = classify(cp.jacobian);
    return cp;
}

} // namespace

const char* to_string(PointKind k) {
    switch (k) {
        case PointKind::Saddle: return "Saddle";
        case PointKind::Center: return "Center";
        case PointKind::SpiralSink: return "SpiralSink";
        case PointKind::NodeSink: return "NodeSink";
        case PointKind::SpiralSource: return "SpiralSource";
        case PointKind::NodeSource: return "NodeSource";
    }
    return "?";
}

PhasePoint vector_field(const PhasePoint& p, const Params& params) {
    const double ns = params.n + params.sigma;
    const double b = (params.n - 2.0 * params.k) / params.k;
    return {p.x * (ns - p.x - params.q * p.y),
            p.y * (-b + p.x / params.k + p.y)};
}

Mat2 field_jacobian(const PhasePoint& p, const Params& params) {
    const double ns = params.n + params.sigma;
    const double b = (params.n - 2.0 * params.k) / params.k;
    Mat2 j;
    j.a11 = ns - 2.0 * p.x - params.q * p.y;
    j.a12 = -params.q * p.x;
    j.a21 = p.y / params.k;
    j.a22 = -b + p.x / params.k + 2.0 * p.y;
    return j;
}

PhasePoint interior_point(const Params& params) {
    return {a_sigma(params) / (params.q - params.k), tau_sigma(params)};
}

bool interior_point_exists(const Params& params) {
    return a_sigma(params) > 0.0;
}

std::vector<CriticalPoint> finite_critical_points(const Params& params) {
    const double ns = params.n + params.sigma;
    const double b = (params.n - 2.0 * params.k) / params.k;
    std::vector<CriticalPoint> pts;
    pts.push_back(make_point({0.0, 0.0}, params));
    pts.push_back(make_point({ns, 0.0}, params));
    pts.push_back(make_point({0.0, b}, params));
    if (interior_point_exists(params)) pts.push_back(make_point(interior_point(params), params));
    return pts;
}

CriticalPoint interior_jacobian(const Params& params) {
    if (!interior_point_exists(params))
        throw DomainError("interior critical point not in the open quadrant: q <= (n+sigma)k/(n-2k)");
    return make_point(interior_point(params), params);
}

std::vector<InfinityPoint> infinity_points(const Params& params) {
    const double k = params.k;
    const double q = params.q;
    std::vector<InfinityPoint> pts;

    auto chart_point = [&](double u) {
        InfinityPoint ip;
        ip.u = u;
        ip.lambda_z = 1.0 + q * u;
        ip.lambda_u = (k + 1.0) / k + 2.0 * q * u;
        ip.kind = ip.lambda_z * ip.lambda_u > 0.0 ? InfinityKind::Node : InfinityKind::Saddle;
        return ip;
    };

    pts.push_back(chart_point(0.0));
    pts.push_back(chart_point(-(k + 1.0) / (k * (q + 1.0))));

    // y-axis direction: eigen-data from the rotated chart.
    InfinityPoint rot;
    rot.u = std::numeric_limits<double>::infinity();
    rot.lambda_z = -1.0;
    rot.lambda_u = -(k + 1.0) / k;
    rot.kind = InfinityKind::Node;
    rot.rotated_chart = true;
    pts.push_back(rot);
    return pts;
}

double launch_slope(const Params& params) {
    return -(params.n - 2.0 * params.k) * q_star(params) /
           (params.q * params.k * (params.n + params.sigma));
}

PhasePoint launch_direction(const Params& params) {
    const double gs = launch_slope(params);
    const double norm = std::sqrt(1.0 + gs * gs);
    return {-1.0 / norm, -gs / norm};
}

std::optional<SlopePair> asymptotic_slopes(const Params& params) {
    const double a = a_sigma(params);
    if (!(a > 0.0))
        throw DomainError("interior critical point not in the open quadrant: q <= (n+sigma)k/(n-2k)");
    const double m = 2.0 * params.k + params.sigma;
    const double b1 = (m + a) / (params.q * a);
    const double c1 = m / (params.q * params.k * a);
    double disc = b1 * b1 - 4.0 * c1;
    // At q = q_jl the discriminant is an exact zero; clamp roundoff-scale
    // negatives so the double root is reported there.
    if (disc < 0.0 && disc > -1e-11 * (b1 * b1 + 4.0 * std::abs(c1))) disc = 0.0;
    if (disc < 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    return SlopePair{0.5 * (-b1 - root), 0.5 * (-b1 + root)};
}

} // namespace hesslv
