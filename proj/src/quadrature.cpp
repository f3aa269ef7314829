#include "zfk/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "zfk/error.hpp"

namespace zfk {

QuadratureResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, double rel_tol)
{
    using boost::math::quadrature::gauss_kronrod;
    if (!(abs_tol > 0.0) && !(rel_tol > 0.0))
        throw Error(ErrorCode::configuration, "quadrature needs a positive tolerance");
    if (a == b)
        return {};

    // Boost's termination test is relative to the L1 norm of f; convert the
    // absolute request using a cheap non-adaptive estimate of that norm.
    double l1 = 0.0;
    double err = 0.0;
    gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err, &l1);
    const double l1_floor = std::max(l1, std::numeric_limits<double>::min());
    const double tol = std::max({rel_tol, abs_tol / l1_floor, 4.0 * std::numeric_limits<double>::epsilon()});

    const double value = gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol, &err, &l1);
    if (!std::isfinite(value))
        throw Error(ErrorCode::quadrature_nonconvergence, "quadrature produced a non-finite value");
    const double target = std::max({abs_tol, rel_tol * std::abs(value), 8.0 * std::numeric_limits<double>::epsilon() * l1});
    if (err > target)
        throw Error(ErrorCode::quadrature_nonconvergence,
                    "quadrature error estimate " + std::to_string(err) + " exceeds tolerance " + std::to_string(target));
    return {value, err};
}

} // namespace zfk
