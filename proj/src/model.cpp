#include "zfk/model.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "zfk/error.hpp"

namespace zfk {

double reaction_omega(double theta, double eps, double overshoot)
{
    if (!(eps > 0.0))
        throw Error(ErrorCode::domain, "reaction_omega requires eps > 0");
    if (!(theta >= 0.0 && theta <= 1.0 + eps * overshoot))
        throw Error(ErrorCode::domain, "reaction_omega: theta = " + std::to_string(theta) + " outside admissible range");
    if (theta == 0.0 || theta == 1.0)
        return 0.0;
    return reaction_omega_raw(theta, eps);
}

Vec2 vector_field(const PhasePoint& p, const Params& params)
{
    return {p.eta, params.c * p.eta - reaction_omega(p.theta, params.eps)};
}

Vec2 normalized_vector_field(const PhasePoint& p, const Params& params)
{
    const double eps = params.eps;
    if (eps < 0.0)
        throw Error(ErrorCode::domain, "normalized_vector_field requires eps >= 0");
    const double theta = p.theta;
    if (eps == 0.0) {
        if (theta == 1.0)
            throw Error(ErrorCode::singular_limit, "normalized field undefined on theta = 1 at eps = 0");
        if (theta > 1.0)
            return {0.0, theta * (theta - 1.0)};
        return {0.0, 0.0};
    }

    // x = (theta - 1)/eps; scale = eps^2 / (1 + e^x / 2).
    const double x = (theta - 1.0) / eps;
    double scale;
    double reaction; // omega * scale = theta (1 - theta) / (2 e^-x + 1)
    if (x > 0.0) {
        const double em = std::exp(-x);
        scale = eps * eps * 2.0 * em / (2.0 * em + 1.0);
        reaction = theta * (1.0 - theta) / (2.0 * em + 1.0);
    } else {
        const double ep = std::exp(x);
        scale = eps * eps / (1.0 + 0.5 * ep);
        reaction = 0.5 * theta * (1.0 - theta) * ep / (1.0 + 0.5 * ep);
    }
    return {p.eta * scale, params.c * p.eta * scale - reaction};
}

Linearisation linearize_pminus(const Params& params)
{
    const double c = params.c;
    const double eps = params.eps;
    if (!(eps > 0.0))
        throw Error(ErrorCode::domain, "linearize_pminus requires eps > 0");

    // Jacobian [[0, 1], [-d, c]] with d = omega_theta(0) = e^{-1/eps} / (2 eps^2).
    const double d = std::exp(-1.0 / eps - std::log(2.0 * eps * eps));
    const double disc = c * c - 4.0 * d;
    if (!(c > 0.0) || !(disc > 0.0))
        throw Error(ErrorCode::node_condition, "p- is not a proper unstable node for these parameters");

    Linearisation lin;
    lin.lambda_strong = 0.5 * (c + std::sqrt(disc));
    lin.lambda_weak = d / lin.lambda_strong;
    lin.v_strong = {1.0, lin.lambda_strong};
    lin.v_weak = {1.0, lin.lambda_weak};
    return lin;
}

WaveProfile apply_symmetry(const WaveProfile& profile)
{
    WaveProfile out;
    out.c = -profile.c;
    out.eps = profile.eps;
    out.truncated = profile.truncated;
    out.near_minimal_regime = profile.near_minimal_regime;

    const std::size_t n = profile.size();
    out.z.resize(n);
    out.theta.resize(n);
    out.eta.resize(n);
    out.segments.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = n - 1 - i;
        out.z[i] = -profile.z[j];
        out.theta[i] = profile.theta[j];
        out.eta[i] = -profile.eta[j];
        out.segments[i] = profile.segments[j];
    }
    return out;
}

} // namespace zfk
