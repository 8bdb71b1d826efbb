#include "hqn/isometries.hpp"

#include <algorithm>
#include <cmath>

#include "hqn/errors.hpp"

namespace hqn {

QMatrix::QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

QMatrix QMatrix::identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Quaternion(1.0);
    return m;
}

QMatrix QMatrix::lorentz_form(std::size_t n) {
    QMatrix j = identity(n + 1);
    j(n, n) = Quaternion(-1.0);
    return j;
}

QMatrix QMatrix::adjoint() const {
    QMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j).conj();
    return t;
}

double QMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& q : a_) m = std::max(m, q.norm());
    return m;
}

double QMatrix::row_norm() const {
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j).norm();
        m = std::max(m, s);
    }
    return m;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("matrix product shape mismatch");
    QMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Quaternion& aik = a(i, k);
            if (aik == Quaternion()) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("matrix sum shape mismatch");
    QMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) { return a + (-1.0) * b; }

QMatrix operator*(double s, const QMatrix& a) {
    QMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
    return c;
}

QVector operator*(const QMatrix& a, const QVector& x) {
    if (a.cols() != x.size()) throw ShapeError("matrix-vector shape mismatch");
    QVector y(a.rows(), x.kind());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
    return y;
}

QMatrix expm(const QMatrix& x) {
    if (x.rows() != x.cols()) throw ShapeError("expm needs a square matrix");
    const double nrm = x.row_norm();
    int squarings = 0;
    if (nrm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
    const QMatrix y = std::ldexp(1.0, -squarings) * x;
    QMatrix term = QMatrix::identity(x.rows());
    QMatrix sum = term;
    for (int k = 1; k <= 24; ++k) {
        term = (1.0 / k) * (term * y);
        sum = sum + term;
        if (term.max_abs() < 1e-18) break;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

double symplectic_defect(const QMatrix& a) {
    if (a.rows() != a.cols() || a.rows() < 2) throw ShapeError("isometry matrix must be (n+1)x(n+1)");
    const QMatrix j = QMatrix::lorentz_form(a.rows() - 1);
    return (a.adjoint() * j * a - j).max_abs();
}

double unitary_defect(const QMatrix& b) {
    if (b.rows() != b.cols()) throw ShapeError("unitary block must be square");
    return (b.adjoint() * b - QMatrix::identity(b.rows())).max_abs();
}

Isometry::Isometry(QMatrix a) : a_(std::move(a)) {
    // Entries of large boosts grow like e^{|t|}; the defect is measured relative to that scale.
    const double scale = std::max(1.0, a_.max_abs() * a_.max_abs());
    if (!(symplectic_defect(a_) < 1e-10 * scale)) throw NotSymplecticError("A* I A != I");
}

Isometry Isometry::identity(std::size_t n) { return Isometry(QMatrix::identity(n + 1)); }

Isometry Isometry::inverse() const {
    const QMatrix j = QMatrix::lorentz_form(n());
    return Isometry(j * a_.adjoint() * j);
}

Isometry operator*(const Isometry& a, const Isometry& b) { return Isometry(a.matrix() * b.matrix()); }

HeisenbergElement::HeisenbergElement(QVector xi_, Quaternion nu_)
    : xi(xi_.with_kind(FormKind::definite)), nu(nu_) {
    if (nu.q0 != 0.0) throw DomainError("Heisenberg nu must be purely imaginary");
}

HeisenbergElement HeisenbergElement::identity(std::size_t n) {
    return HeisenbergElement(QVector(n - 1), Quaternion());
}

HeisenbergElement heis_mul(const HeisenbergElement& a, const HeisenbergElement& b) {
    return HeisenbergElement(a.xi + b.xi, a.nu + b.nu + 2.0 * herm_definite(a.xi, b.xi).imag());
}

HeisenbergElement heis_inverse(const HeisenbergElement& a) {
    return HeisenbergElement((-1.0) * a.xi, -a.nu);
}

Isometry make_isometry(const HeisenbergElement& h) {
    // Lorentz form of the Siegel map ζ′ ↦ ζ′+ξ, ζ_n ↦ ζ_n + ξ*ζ′ + (|ξ|²+ν)/2.
    const std::size_t n = h.n();
    const Quaternion mu = 0.5 * (Quaternion(h.xi.euclidean_norm2()) + h.nu);
    QMatrix a = QMatrix::identity(n + 1);
    for (std::size_t l = 0; l + 1 < n; ++l) {
        a(l, n - 1) = -h.xi[l];
        a(l, n) = h.xi[l];
        a(n - 1, l) = h.xi[l].conj();
        a(n, l) = h.xi[l].conj();
    }
    a(n - 1, n - 1) = Quaternion(1.0) - mu;
    a(n - 1, n) = mu;
    a(n, n - 1) = -mu;
    a(n, n) = Quaternion(1.0) + mu;
    return Isometry(std::move(a));
}

Isometry make_isometry(const Transvection& t, std::size_t n) {
    if (n < 1) throw ShapeError("transvection needs n >= 1");
    QMatrix a = QMatrix::identity(n + 1);
    const double c = std::cosh(t.t), s = std::sinh(t.t);
    a(n - 1, n - 1) = c;
    a(n - 1, n) = s;
    a(n, n - 1) = s;
    a(n, n) = c;
    return Isometry(std::move(a));
}

Isometry make_isometry(const Rotation& r) {
    const std::size_t n = r.B.rows();
    if (r.B.cols() != n || n == 0) throw ShapeError("rotation block must be n x n");
    if (!(unitary_defect(r.B) < 1e-12)) throw NotSymplecticError("rotation block is not in Sp(n)");
    if (!(std::abs(r.lambda.norm2() - 1.0) < 1e-12)) throw NotSymplecticError("lambda is not a unit quaternion");
    QMatrix a(n + 1, n + 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = r.B(i, j);
    a(n, n) = r.lambda;
    return Isometry(std::move(a));
}

Isometry make_isometry(const HoroMotion& g, std::size_t n) {
    if (const auto* h = std::get_if<HeisenbergElement>(&g)) {
        if (h->n() != n) throw ShapeError("Heisenberg element of wrong dimension");
        return make_isometry(*h);
    }
    if (const auto* t = std::get_if<Transvection>(&g)) return make_isometry(*t, n);
    const auto& r = std::get<HoroRotation>(g);
    if (r.B.rows() + 1 != n || r.B.cols() + 1 != n) throw ShapeError("horo rotation block must be (n-1)x(n-1)");
    QMatrix b(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j + 1 < n; ++j) b(i, j) = r.B(i, j);
    b(n - 1, n - 1) = r.lambda;
    return make_isometry(Rotation{b, r.lambda});
}

ChartPoint act(const Isometry& a, const ChartPoint& p) {
    if (dimension(p) != a.n()) throw ShapeError("isometry dimension differs from the point");
    const QVector X = a.matrix() * lift(p);
    return convert(ball_from_lift(X), chart_of(p));
}

HoroPoint act_horo_closed(const HoroMotion& g, const HoroPoint& p) {
    if (const auto* h = std::get_if<HeisenbergElement>(&g)) {
        if (h->n() != p.dim()) throw ShapeError("Heisenberg element of wrong dimension");
        return HoroPoint(h->xi + p.omega(), p.alpha(),
                         h->nu + p.beta() + 2.0 * herm_definite(h->xi, p.omega()).imag());
    }
    if (const auto* t = std::get_if<Transvection>(&g)) {
        const double e = std::exp(t->t);
        return HoroPoint(e * p.omega(), e * e * p.alpha(), (e * e) * p.beta());
    }
    const auto& r = std::get<HoroRotation>(g);
    if (r.B.rows() + 1 != p.dim()) throw ShapeError("horo rotation block must be (n-1)x(n-1)");
    const Quaternion li = qinv(r.lambda);
    Quaternion beta = (r.lambda * p.beta() * li).imag();
    return HoroPoint((r.B * p.omega()).right_mul(li), p.alpha(), beta);
}

HoroPoint inversion_horo(const HoroPoint& p) {
    const Quaternion w = Quaternion(p.alpha() + p.omega().euclidean_norm2()) + p.beta();
    const double w2 = w.norm2();
    return HoroPoint(p.omega().right_mul(qinv(w)), p.alpha() / w2, (-1.0 / w2) * p.beta());
}

BoundaryPoint inversion_horo(const BoundaryPoint& p) {
    if (p.infinity) return BoundaryPoint::finite(QVector(p.n - 1), Quaternion());
    const Quaternion w = Quaternion(p.omega.euclidean_norm2()) + p.beta;
    const double w2 = w.norm2();
    if (w2 == 0.0) return BoundaryPoint::at_infinity(p.n);
    return BoundaryPoint::finite(p.omega.right_mul(qinv(w)), (-1.0 / w2) * p.beta);
}

QVector inversion_at_hyperplane(const QVector& lambda, const QVector& X) {
    const QVector l = lambda.with_kind(FormKind::lorentz);
    const QVector x = X.with_kind(FormKind::lorentz);
    if (signature_class(l) != Signature::positive) throw NotPolarError("lambda is not a positive vector");
    const double ll = herm_lorentz(l, l).real();
    const Quaternion c = (2.0 / ll) * herm_lorentz(l, x);
    return x - l.right_mul(c);
}

QMatrix gram_schmidt(const QMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    QMatrix q = m;
    for (std::size_t k = 0; k < cols; ++k) {
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t j = 0; j < k; ++j) {
                Quaternion c;
                for (std::size_t i = 0; i < rows; ++i) c += q(i, j).conj() * q(i, k);
                for (std::size_t i = 0; i < rows; ++i) q(i, k) -= q(i, j) * c;
            }
        double nrm = 0.0;
        for (std::size_t i = 0; i < rows; ++i) nrm += q(i, k).norm2();
        nrm = std::sqrt(nrm);
        if (nrm < 1e-300) throw DivisionByZero("rank-deficient input to gram_schmidt");
        for (std::size_t i = 0; i < rows; ++i) q(i, k) = q(i, k) / nrm;
    }
    return q;
}

Quaternion random_unit_quaternion(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Quaternion q(g(rng), g(rng), g(rng), g(rng));
    return q / q.norm();
}

QMatrix random_symplectic(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = Quaternion(g(rng), g(rng), g(rng), g(rng));
    return gram_schmidt(m);
}

}  // namespace hqn
