#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "hqn/quaternion.hpp"

namespace hqn {

enum class Chart { ball, siegel, horo };

std::string to_string(Chart c);
Chart parse_chart(const std::string& name);

// Unit ball chart, |x| < 1.
class BallPoint {
public:
    explicit BallPoint(QVector x);
    const QVector& x() const { return x_; }
    std::size_t dim() const { return x_.size(); }

private:
    QVector x_;
};

// Siegel domain, |ζ′|² − 2Re ζ_n < 0.
class SiegelPoint {
public:
    explicit SiegelPoint(QVector zeta);
    const QVector& zeta() const { return zeta_; }
    std::size_t dim() const { return zeta_.size(); }

private:
    QVector zeta_;
};

// Horospherical coordinates (ω ∈ Q^{n−1}, α > 0, β ∈ Im Q).
class HoroPoint {
public:
    HoroPoint(QVector omega, double alpha, Quaternion beta);
    const QVector& omega() const { return omega_; }
    double alpha() const { return alpha_; }
    const Quaternion& beta() const { return beta_; }
    std::size_t dim() const { return omega_.size() + 1; }

private:
    QVector omega_;
    double alpha_;
    Quaternion beta_;
};

using ChartPoint = std::variant<BallPoint, SiegelPoint, HoroPoint>;

// Ideal boundary point: finite (ω, 0, β) or ∞.
struct BoundaryPoint {
    std::size_t n = 0;
    bool infinity = false;
    QVector omega;
    Quaternion beta;

    static BoundaryPoint at_infinity(std::size_t n);
    static BoundaryPoint finite(QVector omega, Quaternion beta);
};

Chart chart_of(const ChartPoint& p);
std::size_t dimension(const ChartPoint& p);

SiegelPoint cayley(const BallPoint& x);
BallPoint cayley_inv(const SiegelPoint& zeta);
HoroPoint horo_from_siegel(const SiegelPoint& zeta);
SiegelPoint siegel_from_horo(const HoroPoint& p);

BallPoint to_ball(const ChartPoint& p);
SiegelPoint to_siegel(const ChartPoint& p);
HoroPoint to_horo(const ChartPoint& p);
ChartPoint convert(const ChartPoint& p, Chart target);

// Lorentz lift (x, 1) of a point.
QVector lift(const ChartPoint& p);
// x_l = X_l X_{n+1}^{-1}; throws NotInteriorError unless X is negative.
BallPoint ball_from_lift(const QVector& X);

double dist(const ChartPoint& p, const ChartPoint& q);
double busemann(const ChartPoint& p);

// Ambient real coordinates of a chart: 4n reals. Horo order is (ω, α, β1, β2, β3).
std::vector<double> coordinates(const ChartPoint& p);
ChartPoint from_coordinates(Chart chart, const std::vector<double>& reals);

struct Tangent {
    Chart chart = Chart::ball;
    std::vector<double> d;
};

double metric_eval(const ChartPoint& p, const Tangent& u, const Tangent& v);
// Gram matrix of the ball metric in real coordinates, row-major 4n × 4n.
std::vector<double> ball_metric_matrix(const BallPoint& x);
// Chart change of a tangent vector by central differences.
Tangent pushforward(const ChartPoint& p, const Tangent& u, Chart target);

}  // namespace hqn
