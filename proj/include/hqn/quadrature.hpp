#pragma once

#include <functional>

namespace hqn {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

// Globally adaptive Gauss–Kronrod 7/15 on [a, b].
QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b,
                                double abs_tol = 1e-14, double rel_tol = 1e-14, int max_intervals = 4000);

}  // namespace hqn
