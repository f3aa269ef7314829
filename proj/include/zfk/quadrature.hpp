#pragma once

#include <functional>

namespace zfk {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive Gauss-Kronrod (15/31) quadrature of f on a finite interval [a, b].
/// Succeeds when the error estimate is within max(abs_tol, rel_tol |I|);
/// otherwise throws Error(quadrature_nonconvergence).
QuadratureResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, double rel_tol = 0.0);

} // namespace zfk
