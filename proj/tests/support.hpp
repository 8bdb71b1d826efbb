#pragma once

#include <cmath>
#include <random>

#include "hqn/charts.hpp"
#include "hqn/quaternion.hpp"

namespace test_support {

inline hqn::Quaternion random_q(std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> nd(0.0, scale);
    return {nd(rng), nd(rng), nd(rng), nd(rng)};
}

inline hqn::Quaternion random_im(std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> nd(0.0, scale);
    return {0.0, nd(rng), nd(rng), nd(rng)};
}

inline hqn::QVector random_vec(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
    hqn::QVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = random_q(rng, scale);
    return v;
}

inline hqn::BallPoint random_ball(std::mt19937_64& rng, std::size_t n, double rmax = 0.9) {
    hqn::QVector v = random_vec(rng, n);
    std::uniform_real_distribution<double> ur(0.0, rmax);
    return hqn::BallPoint(ur(rng) / std::sqrt(v.euclidean_norm2()) * v);
}

inline hqn::HoroPoint random_horo(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> ua(0.2, 3.0);
    return hqn::HoroPoint(random_vec(rng, n - 1, 0.7), ua(rng), random_im(rng, 0.7));
}

inline double qdist(const hqn::Quaternion& a, const hqn::Quaternion& b) { return (a - b).norm(); }

inline double vdist(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

}  // namespace test_support
