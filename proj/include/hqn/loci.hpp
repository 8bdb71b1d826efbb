#pragma once

#include <array>
#include <variant>

#include "hqn/charts.hpp"

namespace hqn {

struct Bisector {
    ChartPoint p1;
    ChartPoint p2;
};
struct CanonicalBisector {};
// Re(normal, ω) − offset = 0 on Q^{n−1}.
struct Fan {
    QVector normal;
    double offset = 0.0;
};
struct BisectorFamily {
    double t = 0.0;
};
struct FanAtOrigin {};

using LocusSpec = std::variant<Bisector, CanonicalBisector, Fan, BisectorFamily, FanAtOrigin>;

double bisector_residual(const ChartPoint& p, const ChartPoint& p1, const ChartPoint& p2);
// Re(k β).
double canonical_bisector_residual(const HoroPoint& p);
// (ω, α, β) ↦ (0, α + |ω|², β).
HoroPoint spine_projection(const HoroPoint& p);
double fan_residual(const HoroPoint& p, const Fan& spec);
// Re(k(β − 2t ω_{n−1})).
double bisector_family_residual(const HoroPoint& p, double t);
// Image of the fan Re(k ω_{n−1}) = 0 under the inversion; α ≥ 0 admits boundary points.
double fan_at_origin_residual(const QVector& omega, double alpha, const Quaternion& beta);
double fan_at_origin_residual(const HoroPoint& p);

double residual(const LocusSpec& spec, const ChartPoint& p);

// The fan Re(ω_{n−1}) = 0 in dimension n.
Fan standard_fan(std::size_t n);

}  // namespace hqn
