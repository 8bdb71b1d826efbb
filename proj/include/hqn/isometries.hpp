#pragma once

#include <cstddef>
#include <random>
#include <variant>
#include <vector>

#include "hqn/charts.hpp"
#include "hqn/quaternion.hpp"

namespace hqn {

class QMatrix {
public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols);

    static QMatrix identity(std::size_t n);
    // I_{n,1} of size n+1.
    static QMatrix lorentz_form(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Quaternion& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Quaternion& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    QMatrix adjoint() const;
    double max_abs() const;
    // Maximum absolute row sum of entry norms.
    double row_norm() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Quaternion> a_;
};

QMatrix operator*(const QMatrix& a, const QMatrix& b);
QMatrix operator+(const QMatrix& a, const QMatrix& b);
QMatrix operator-(const QMatrix& a, const QMatrix& b);
QMatrix operator*(double s, const QMatrix& a);
QVector operator*(const QMatrix& a, const QVector& x);

QMatrix expm(const QMatrix& x);

// ‖A*·I_{n,1}·A − I_{n,1}‖_max.
double symplectic_defect(const QMatrix& a);
// ‖B*B − I‖_max.
double unitary_defect(const QMatrix& b);

class Isometry {
public:
    // Throws NotSymplecticError when the membership defect is ≥ 1e−10.
    explicit Isometry(QMatrix a);
    static Isometry identity(std::size_t n);

    const QMatrix& matrix() const { return a_; }
    std::size_t n() const { return a_.rows() - 1; }
    Isometry inverse() const;

private:
    QMatrix a_;
};

Isometry operator*(const Isometry& a, const Isometry& b);

struct HeisenbergElement {
    QVector xi;
    Quaternion nu;

    HeisenbergElement(QVector xi, Quaternion nu);
    static HeisenbergElement identity(std::size_t n);
    std::size_t n() const { return xi.size() + 1; }
};

HeisenbergElement heis_mul(const HeisenbergElement& a, const HeisenbergElement& b);
HeisenbergElement heis_inverse(const HeisenbergElement& a);

struct Transvection {
    double t = 0.0;
};

// block diag(B, λ) with B ∈ Sp(n), λ ∈ Sp(1).
struct Rotation {
    QMatrix B;
    Quaternion lambda;
};

// block diag(B, λ, λ) with B ∈ Sp(n−1): the stabilizer part fixing ∞ and the base point.
struct HoroRotation {
    QMatrix B;
    Quaternion lambda;
};

using HoroMotion = std::variant<HeisenbergElement, Transvection, HoroRotation>;

Isometry make_isometry(const HeisenbergElement& h);
Isometry make_isometry(const Transvection& t, std::size_t n);
Isometry make_isometry(const Rotation& r);
Isometry make_isometry(const HoroMotion& g, std::size_t n);

ChartPoint act(const Isometry& a, const ChartPoint& p);
HoroPoint act_horo_closed(const HoroMotion& g, const HoroPoint& p);

HoroPoint inversion_horo(const HoroPoint& p);
BoundaryPoint inversion_horo(const BoundaryPoint& p);
// X − 2λ⟨λ,X⟩/⟨λ,λ⟩; throws NotPolarError unless λ is positive.
QVector inversion_at_hyperplane(const QVector& lambda, const QVector& X);

// Orthonormalizes the columns over Q (right scalars).
QMatrix gram_schmidt(const QMatrix& m);
Quaternion random_unit_quaternion(std::mt19937_64& rng);
QMatrix random_symplectic(std::size_t n, std::mt19937_64& rng);

}  // namespace hqn
