#include "hqn/quaternion.hpp"

#include <ostream>
#include <string>

#include "hqn/errors.hpp"

namespace hqn {

Quaternion qinv(const Quaternion& q) {
    const double n2 = q.norm2();
    if (n2 == 0.0) throw DivisionByZero("inverse of the zero quaternion");
    return q.conj() / n2;
}

Quaternion qexp(const Quaternion& q) {
    const Quaternion v = q.imag();
    const double theta = v.norm();
    const double e = std::exp(q.q0);
    if (theta == 0.0) return Quaternion(e);
    const double s = std::sin(theta) / theta;
    return Quaternion(e * std::cos(theta), e * s * v.q1, e * s * v.q2, e * s * v.q3);
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
    return os << '(' << q.q0 << ", " << q.q1 << ", " << q.q2 << ", " << q.q3 << ')';
}

QVector::QVector(std::size_t size, FormKind kind) : entries_(size), kind_(kind) {}

QVector::QVector(std::vector<Quaternion> entries, FormKind kind)
    : entries_(std::move(entries)), kind_(kind) {}

QVector::QVector(std::initializer_list<Quaternion> entries, FormKind kind)
    : entries_(entries), kind_(kind) {}

double QVector::euclidean_norm2() const {
    double s = 0.0;
    for (const auto& q : entries_) s += q.norm2();
    return s;
}

QVector QVector::right_mul(const Quaternion& lambda) const {
    QVector out(size(), kind_);
    for (std::size_t i = 0; i < size(); ++i) out[i] = entries_[i] * lambda;
    return out;
}

std::vector<double> QVector::to_reals() const {
    std::vector<double> r;
    r.reserve(4 * size());
    for (const auto& q : entries_) {
        r.push_back(q.q0);
        r.push_back(q.q1);
        r.push_back(q.q2);
        r.push_back(q.q3);
    }
    return r;
}

QVector QVector::from_reals(const std::vector<double>& reals, FormKind kind) {
    if (reals.size() % 4 != 0) throw ShapeError("real coordinate count not a multiple of 4");
    QVector out(reals.size() / 4, kind);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = Quaternion(reals[4 * i], reals[4 * i + 1], reals[4 * i + 2], reals[4 * i + 3]);
    return out;
}

namespace {

void require_same_size(const QVector& a, const QVector& b) {
    if (a.size() != b.size())
        throw ShapeError("length mismatch " + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
}

}  // namespace

QVector operator+(const QVector& a, const QVector& b) {
    require_same_size(a, b);
    QVector out(a.size(), a.kind());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

QVector operator-(const QVector& a, const QVector& b) {
    require_same_size(a, b);
    QVector out(a.size(), a.kind());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

QVector operator*(double s, const QVector& a) {
    QVector out(a.size(), a.kind());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
    return out;
}

Quaternion herm_definite(const QVector& x, const QVector& y) {
    require_same_size(x, y);
    if (x.kind() != FormKind::definite || y.kind() != FormKind::definite)
        throw ShapeError("definite form needs definite vectors");
    Quaternion s;
    for (std::size_t l = 0; l < x.size(); ++l) s += x[l].conj() * y[l];
    return s;
}

Quaternion herm_lorentz(const QVector& x, const QVector& y) {
    require_same_size(x, y);
    if (x.kind() != FormKind::lorentz || y.kind() != FormKind::lorentz)
        throw ShapeError("lorentz form needs lorentz vectors");
    if (x.size() < 2) throw ShapeError("lorentz vectors need length n+1 >= 2");
    const std::size_t last = x.size() - 1;
    Quaternion s;
    for (std::size_t l = 0; l < last; ++l) s += x[l].conj() * y[l];
    return s - x[last].conj() * y[last];
}

double norm(const QVector& x) { return std::sqrt(herm_definite(x, x).real()); }

Signature signature_class(const QVector& x) {
    const double form = herm_lorentz(x, x).real();
    const double eps = 1e-10 * (1.0 + x.euclidean_norm2());
    if (form > eps) return Signature::positive;
    if (form < -eps) return Signature::negative;
    return Signature::null;
}

}  // namespace hqn
