#ifndef HESSLV_PHASE_HPP
#define HESSLV_PHASE_HPP

#include <complex>
#include <optional>
#include <vector>

#include "hesslv/params.hpp"

namespace hesslv {

// A point of the phase plane; also used for tangent vectors of the flow.
struct PhasePoint {
    double x = 0.0;
    double y = 0.0;
};

struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
};

enum class PointKind { Saddle, Center, SpiralSink, NodeSink, SpiralSource, NodeSource };

const char* to_string(PointKind k);

struct CriticalPoint {
    PhasePoint location;
    Mat2 jacobian;
    std::complex<double> eig1, eig2;
    int poincare_index;  // sign of det(jacobian): -1 saddle, +1 antisaddle
    PointKind kind;
};

enum class InfinityKind { Node, Saddle };

// Critical point at infinity in the (z,u) = (1/x, y/x) chart. The direction
// on the y-axis is only reachable after rotating the chart; its eigen-data
// is reported from that rotated chart and flagged.
struct InfinityPoint {
    double u;              // slope coordinate y/x (+inf for the rotated point)
    double lambda_z;
    double lambda_u;
    InfinityKind kind;
    bool rotated_chart = false;
};

struct SlopePair {
    double lower;  // gamma_-
    double upper;  // gamma_+
};

// Right-hand side of the planar system:
//   dx/dt = x (n+sigma - x - q y),  dy/dt = y (-(n-2k)/k + x/k + y).
PhasePoint vector_field(const PhasePoint& p, const Params& params);

// Jacobian of the field at an arbitrary point.
Mat2 field_jacobian(const PhasePoint& p, const Params& params);

// Interior equilibrium ((q(n-2k)-(n+sigma)k)/(q-k), (2k+sigma)/(q-k));
// lies in the open quadrant iff q > (n+sigma) k / (n-2k).
PhasePoint interior_point(const Params& params);
bool interior_point_exists(const Params& params);

// The three boundary equilibria, plus the interior one when it lies in the
// open first quadrant, each with Jacobian, spectrum, Poincare index and kind.
std::vector<CriticalPoint> finite_critical_points(const Params& params);

// Classified equilibrium record at the interior point; DomainError when the
// interior point is not in the open quadrant.
CriticalPoint interior_jacobian(const Params& params);

// The three directions at infinity: u=0, u=-(k+1)/(k(q+1)), and the y-axis
// direction via the rotation convention. All are nodes for admissible data.
std::vector<InfinityPoint> infinity_points(const Params& params);

// Slope gamma_s = -(n-2k) q*(k,sigma) / (q k (n+sigma)) of the unstable
// manifold leaving (n+sigma, 0); always negative.
double launch_slope(const Params& params);

// Unit tangent of the unstable manifold at (n+sigma,0), oriented into the
// quadrant (x component negative, y component positive).
PhasePoint launch_direction(const Params& params);

// Asymptotic approach slopes gamma_- <= gamma_+ < 0 of the orbit entering
// the interior node; nullopt in the spiral regime (complex pair).
// DomainError when the interior point is not in the open quadrant.
std::optional<SlopePair> asymptotic_slopes(const Params& params);

} // namespace hesslv

#endif
