#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <vector>

namespace hqn {

struct Quaternion {
    double q0 = 0.0, q1 = 0.0, q2 = 0.0, q3 = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double r) : q0(r) {}  // NOLINT: reals embed implicitly
    constexpr Quaternion(double a, double b, double c, double d) : q0(a), q1(b), q2(c), q3(d) {}

    static constexpr Quaternion unit_i() { return {0, 1, 0, 0}; }
    static constexpr Quaternion unit_j() { return {0, 0, 1, 0}; }
    static constexpr Quaternion unit_k() { return {0, 0, 0, 1}; }

    constexpr double real() const { return q0; }
    constexpr Quaternion imag() const { return {0.0, q1, q2, q3}; }
    constexpr Quaternion conj() const { return {q0, -q1, -q2, -q3}; }
    constexpr double norm2() const { return q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3; }
    double norm() const { return std::sqrt(norm2()); }

    constexpr double operator[](int c) const { return c == 0 ? q0 : c == 1 ? q1 : c == 2 ? q2 : q3; }
    constexpr double& operator[](int c) { return c == 0 ? q0 : c == 1 ? q1 : c == 2 ? q2 : q3; }

    constexpr Quaternion& operator+=(const Quaternion& o) {
        q0 += o.q0; q1 += o.q1; q2 += o.q2; q3 += o.q3;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& o) {
        q0 -= o.q0; q1 -= o.q1; q2 -= o.q2; q3 -= o.q3;
        return *this;
    }
    constexpr Quaternion& operator*=(double s) {
        q0 *= s; q1 *= s; q2 *= s; q3 *= s;
        return *this;
    }
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator-(const Quaternion& a) { return {-a.q0, -a.q1, -a.q2, -a.q3}; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }
constexpr Quaternion operator/(Quaternion a, double s) { return a *= (1.0 / s); }

constexpr Quaternion qmul(const Quaternion& a, const Quaternion& b) {
    return {a.q0 * b.q0 - a.q1 * b.q1 - a.q2 * b.q2 - a.q3 * b.q3,
            a.q0 * b.q1 + a.q1 * b.q0 + a.q2 * b.q3 - a.q3 * b.q2,
            a.q0 * b.q2 - a.q1 * b.q3 + a.q2 * b.q0 + a.q3 * b.q1,
            a.q0 * b.q3 + a.q1 * b.q2 - a.q2 * b.q1 + a.q3 * b.q0};
}
constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) { return qmul(a, b); }

constexpr bool operator==(const Quaternion& a, const Quaternion& b) {
    return a.q0 == b.q0 && a.q1 == b.q1 && a.q2 == b.q2 && a.q3 == b.q3;
}

inline Quaternion conj(const Quaternion& q) { return q.conj(); }
inline double abs(const Quaternion& q) { return q.norm(); }

// Throws DivisionByZero for q = 0.
Quaternion qinv(const Quaternion& q);

// Unit quaternion exp for a pure imaginary argument, general otherwise.
Quaternion qexp(const Quaternion& q);

std::ostream& operator<<(std::ostream& os, const Quaternion& q);

enum class FormKind { definite, lorentz };

class QVector {
public:
    QVector() = default;
    explicit QVector(std::size_t size, FormKind kind = FormKind::definite);
    QVector(std::vector<Quaternion> entries, FormKind kind = FormKind::definite);
    QVector(std::initializer_list<Quaternion> entries, FormKind kind = FormKind::definite);

    std::size_t size() const { return entries_.size(); }
    FormKind kind() const { return kind_; }
    QVector with_kind(FormKind kind) const { return QVector(entries_, kind); }

    const Quaternion& operator[](std::size_t i) const { return entries_[i]; }
    Quaternion& operator[](std::size_t i) { return entries_[i]; }
    const std::vector<Quaternion>& entries() const { return entries_; }

    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    // Sum of |X_l|² over all entries, ignoring the form.
    double euclidean_norm2() const;

    QVector right_mul(const Quaternion& lambda) const;

    // Real components in the order (X_1.q0..q3, X_2.q0..q3, ...).
    std::vector<double> to_reals() const;
    static QVector from_reals(const std::vector<double>& reals, FormKind kind = FormKind::definite);

private:
    std::vector<Quaternion> entries_;
    FormKind kind_ = FormKind::definite;
};

QVector operator+(const QVector& a, const QVector& b);
QVector operator-(const QVector& a, const QVector& b);
QVector operator*(double s, const QVector& a);

// Σ conj(x_l) y_l.
Quaternion herm_definite(const QVector& x, const QVector& y);
// Σ_{l≤n} conj(X_l) Y_l − conj(X_{n+1}) Y_{n+1}.
Quaternion herm_lorentz(const QVector& x, const QVector& y);
// √(x,x) for definite vectors.
double norm(const QVector& x);

enum class Signature { positive, null, negative };

// Sign of ⟨X,X⟩ with the null band 1e−10·(1+‖X‖²).
Signature signature_class(const QVector& x);

}  // namespace hqn
