#include "hqn/loci.hpp"

#include "hqn/errors.hpp"

namespace hqn {

double bisector_residual(const ChartPoint& p, const ChartPoint& p1, const ChartPoint& p2) {
    if (dist(p1, p2) < 1e-12) throw DegenerateLocusError("bisector of coincident points");
    return dist(p, p1) - dist(p, p2);
}

double canonical_bisector_residual(const HoroPoint& p) {
    return (Quaternion::unit_k() * p.beta()).real();
}

HoroPoint spine_projection(const HoroPoint& p) {
    return HoroPoint(QVector(p.omega().size()), p.alpha() + p.omega().euclidean_norm2(), p.beta());
}

double fan_residual(const HoroPoint& p, const Fan& spec) {
    if (spec.normal.size() != p.omega().size()) throw ShapeError("fan normal has wrong length");
    if (spec.normal.euclidean_norm2() == 0.0) throw DegenerateLocusError("fan normal is zero");
    return herm_definite(spec.normal.with_kind(FormKind::definite), p.omega()).real() - spec.offset;
}

double bisector_family_residual(const HoroPoint& p, double t) {
    if (p.omega().size() == 0) throw ShapeError("bisector family needs n >= 2");
    const Quaternion& w = p.omega()[p.omega().size() - 1];
    return (Quaternion::unit_k() * (p.beta() - 2.0 * t * w)).real();
}

double fan_at_origin_residual(const QVector& omega, double alpha, const Quaternion& beta) {
    if (alpha < 0.0) throw DomainError("fan_at_origin_residual needs alpha >= 0");
    if (omega.size() == 0) throw ShapeError("fan at origin needs n >= 2");
    const Quaternion& q = omega[omega.size() - 1];
    const double W = alpha + omega.euclidean_norm2();
    return q.q3 * W + q.q2 * beta.q1 - q.q1 * beta.q2 - q.q0 * beta.q3;
}

double fan_at_origin_residual(const HoroPoint& p) {
    return fan_at_origin_residual(p.omega(), p.alpha(), p.beta());
}

double residual(const LocusSpec& spec, const ChartPoint& p) {
    if (const auto* b = std::get_if<Bisector>(&spec)) return bisector_residual(p, b->p1, b->p2);
    const HoroPoint h = to_horo(p);
    if (std::holds_alternative<CanonicalBisector>(spec)) return canonical_bisector_residual(h);
    if (const auto* f = std::get_if<Fan>(&spec)) return fan_residual(h, *f);
    if (const auto* t = std::get_if<BisectorFamily>(&spec)) return bisector_family_residual(h, t->t);
    return fan_at_origin_residual(h);
}

Fan standard_fan(std::size_t n) {
    if (n < 2) throw ShapeError("fans need n >= 2");
    QVector normal(n - 1);
    normal[n - 2] = Quaternion(1.0);
    return Fan{normal, 0.0};
}

}  // namespace hqn
