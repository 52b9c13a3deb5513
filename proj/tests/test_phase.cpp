#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hesslv/errors.hpp"
#include "hesslv/exponents.hpp"
#include "hesslv/params.hpp"
#include "hesslv/phase.hpp"

using namespace hesslv;

namespace {
const Params set_a = validate_params(5, 1, 0.0, 3.0);
const Params set_b = validate_params(12, 1, 0.0, 5.0);

double norm2(const PhasePoint& p) { return std::hypot(p.x, p.y); }
} // namespace

TEST_CASE("vector field vanishes at the printed equilibria") {
    CHECK(norm2(vector_field({0.0, 0.0}, set_a)) == 0.0);
    CHECK(norm2(vector_field({5.0, 0.0}, set_a)) == 0.0);
    CHECK(norm2(vector_field({2.0, 1.0}, set_a)) < 1e-14);
}

TEST_CASE("finite critical points of set A: count, indices, kinds") {
    const auto pts = finite_critical_points(set_a);
    REQUIRE(pts.size() == 4);
    CHECK(pts[0].location.x == 0.0);
    CHECK(pts[0].poincare_index == -1);
    CHECK(pts[0].kind == PointKind::Saddle);
    CHECK(pts[1].location.x == doctest::Approx(5.0));
    CHECK(pts[1].poincare_index == -1);
    CHECK(pts[2].location.y == doctest::Approx(3.0));
    CHECK(pts[2].poincare_index == -1);
    CHECK(pts[3].location.x == doctest::Approx(2.0));
    CHECK(pts[3].location.y == doctest::Approx(1.0));
    CHECK(pts[3].poincare_index == 1);
    CHECK(pts[3].kind == PointKind::SpiralSink);

    int sum = 0;
    for (const auto& p : pts) sum += p.poincare_index;
    CHECK(sum == -2);
}

TEST_CASE("interior point absent below the existence threshold") {
    const auto pts = finite_critical_points(validate_params(5, 1, 0.0, 1.05));
    CHECK(pts.size() == 3);
}

TEST_CASE("set B interior point") {
    const auto pts = finite_critical_points(set_b);
    REQUIRE(pts.size() == 4);
    CHECK(pts[3].location.x == doctest::Approx(9.5));
    CHECK(pts[3].location.y == doctest::Approx(0.5));
    CHECK(pts[3].poincare_index == 1);
    CHECK(pts[3].kind == PointKind::NodeSink);
}

TEST_CASE("field vanishes at every returned critical point") {
    for (const Params& p : {set_a, set_b, validate_params(9, 2, 1.5, 4.0)}) {
        for (const auto& cp : finite_critical_points(p))
            CHECK(norm2(vector_field(cp.location, p)) < 1e-12);
    }
}

TEST_CASE("interior Jacobian spectra") {
    const CriticalPoint a = interior_jacobian(set_a);
    CHECK(a.jacobian.trace() == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(a.jacobian.det() == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(a.eig1.real() == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(std::abs(a.eig2.imag()) ==
          doctest::Approx(std::sqrt(15.0) / 2.0).epsilon(1e-14));
    CHECK(a.kind == PointKind::SpiralSink);

    const CriticalPoint b = interior_jacobian(set_b);
    CHECK(b.jacobian.trace() == doctest::Approx(-9.0).epsilon(1e-14));
    CHECK(b.jacobian.det() == doctest::Approx(19.0).epsilon(1e-14));
    CHECK(b.eig1.imag() == 0.0);
    CHECK(b.eig1.real() < 0.0);
    CHECK(b.eig2.real() < 0.0);
    CHECK(b.kind == PointKind::NodeSink);

    const CriticalPoint c = interior_jacobian(validate_params(5, 1, 0.0, 7.0 / 3.0));
    CHECK(std::abs(c.jacobian.trace()) < 1e-13);
    CHECK(c.eig1.real() == doctest::Approx(0.0));
    CHECK(c.kind == PointKind::Center);

    CHECK_THROWS_AS(interior_jacobian(validate_params(5, 1, 0.0, 1.2)), DomainError);
}

TEST_CASE("trace and det closed forms match the matrix at the interior point") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> kd(1, 3);
    std::uniform_real_distribution<double> sd(0.0, 2.0);
    std::uniform_real_distribution<double> qf(0.1, 3.0);
    int done = 0;
    while (done < 200) {
        const int k = kd(rng);
        std::uniform_int_distribution<int> nd(2 * k + 1, 25);
        const int n = nd(rng);
        const double sigma = sd(rng);
        const double q = (n + sigma) * k / (n - 2.0 * k) * (1.0 + qf(rng));
        if (q <= k) continue;
        const Params p = validate_params(n, k, sigma, q);
        const ExponentReport r = exponent_report(p);
        const CriticalPoint cp = interior_jacobian(p);
        CHECK(cp.jacobian.trace() == doctest::Approx(r.trace_j).epsilon(1e-11));
        CHECK(cp.jacobian.det() == doctest::Approx(r.det_j).epsilon(1e-11));
        CHECK((r.trace_j < 0.0) == (p.q > r.q_star * (1.0 + 1e-14)));
        CHECK(r.det_j > 0.0);
        ++done;
    }
}

TEST_CASE("points at infinity") {
    const auto pts = infinity_points(set_a);
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].u == 0.0);
    CHECK(pts[0].lambda_z == doctest::Approx(1.0));
    CHECK(pts[0].lambda_u == doctest::Approx(2.0));
    CHECK(pts[0].kind == InfinityKind::Node);
    CHECK(pts[1].u == doctest::Approx(-0.5));
    CHECK(pts[1].lambda_z == doctest::Approx(-0.5));
    CHECK(pts[1].lambda_u == doctest::Approx(-1.0));
    CHECK(pts[1].kind == InfinityKind::Node);
    CHECK(pts[2].rotated_chart);
    CHECK(std::isinf(pts[2].u));
    CHECK(pts[2].lambda_z * pts[2].lambda_u > 0.0);
    CHECK(pts[2].kind == InfinityKind::Node);

    const auto pk2 = infinity_points(validate_params(6, 2, 0.0, 4.0));
    CHECK(pk2[1].u == doctest::Approx(-0.3));
    CHECK(pk2[1].lambda_z == doctest::Approx(-0.2));
    CHECK(pk2[1].lambda_u == doctest::Approx(-0.9));
    CHECK(pk2[1].kind == InfinityKind::Node);
}

TEST_CASE("launch slope values and eigenvector consistency") {
    CHECK(launch_slope(set_a) == doctest::Approx(-7.0 / 15.0).epsilon(1e-14));
    CHECK(launch_slope(set_b) == doctest::Approx(-14.0 / 60.0).epsilon(1e-14));

    for (const Params& p : {set_a, set_b, validate_params(9, 2, 1.0, 5.0)}) {
        const double gs = launch_slope(p);
        CHECK(gs < 0.0);
        // (1, gs) must be the eigenvector of J(n+sigma, 0) for (2k+sigma)/k.
        const Mat2 j = field_jacobian({p.n + p.sigma, 0.0}, p);
        const double mu = (2.0 * p.k + p.sigma) / p.k;
        const double r1 = j.a11 * 1.0 + j.a12 * gs - mu * 1.0;
        const double r2 = j.a21 * 1.0 + j.a22 * gs - mu * gs;
        CHECK(std::abs(r1) < 1e-12 * (std::abs(j.a11) + std::abs(j.a12 * gs)));
        CHECK(std::abs(r2) < 1e-12);
        const PhasePoint dir = launch_direction(p);
        CHECK(dir.x < 0.0);
        CHECK(dir.y > 0.0);
        CHECK(dir.y / dir.x == doctest::Approx(gs).epsilon(1e-14));
    }
}

TEST_CASE("asymptotic slopes: node pair, spiral complex case, double root at q_jl") {
    const auto b = asymptotic_slopes(set_b);
    REQUIRE(b.has_value());
    CHECK(b->upper == doctest::Approx(-0.08172560023684435).epsilon(1e-9));
    CHECK(b->lower == doctest::Approx(-0.12880071555262934).epsilon(1e-9));
    CHECK(b->lower <= b->upper);
    CHECK(b->upper < 0.0);

    CHECK(!asymptotic_slopes(set_a).has_value());

    Params at_jl = set_b;
    at_jl.q = q_joseph_lundgren(set_b);
    const auto d = asymptotic_slopes(at_jl);
    REQUIRE(d.has_value());
    CHECK(std::abs(d->upper - d->lower) < 1e-6);

    CHECK_THROWS_AS(asymptotic_slopes(validate_params(5, 1, 0.0, 1.2)), DomainError);
}

TEST_CASE("invariant line is tangent to the field at q = q_star") {
    for (Params p : {validate_params(5, 1, 0.0, 2.0), validate_params(7, 2, 1.0, 3.0)}) {
        p.q = q_star(p);
        const double ns = p.n + p.sigma;
        const double b = (p.n - 2.0 * p.k) / p.k;
        // Segment from (ns, 0) to (0, b); direction (-ns, b).
        for (int i = 1; i < 50; ++i) {
            const double s = i / 50.0;
            const PhasePoint pt{ns * (1.0 - s), b * s};
            const PhasePoint f = vector_field(pt, p);
            const double cross = f.x * b - f.y * (-ns);
            CHECK(std::abs(cross) < 1e-10);
        }
    }
}
