#pragma once

// The ZFK travelling-wave system in original (theta, eta) coordinates.
//
//   theta' = eta
//   eta'   = c eta - omega(theta, eps),
//   omega  = theta (1 - theta) exp(-(1 - theta)/eps) / (2 eps^2).

#include <array>
#include <cmath>

#include "zfk/profile.hpp"

namespace zfk {

using Vec2 = std::array<double, 2>;

struct Params {
    double c = 1.0;
    double eps = 0.01;
};

struct PhasePoint {
    double theta = 0.0;
    double eta = 0.0;
};

struct Linearisation {
    double lambda_strong = 0.0;
    double lambda_weak = 0.0;
    Vec2 v_strong{1.0, 0.0};
    Vec2 v_weak{1.0, 0.0};
};

/// Admissible overshoot above theta = 1, in units of eps.
inline constexpr double default_theta_overshoot = 50.0;

/// Unchecked reaction rate. Exponent is assembled first and exponentiated
/// once, so the exponentially small factor underflows to 0 cleanly.
inline double reaction_omega_raw(double theta, double eps) noexcept
{
    return theta * (1.0 - theta) * std::exp(-(1.0 - theta) / eps - std::log(2.0 * eps * eps));
}

/// Reaction rate with domain guard theta in [0, 1 + eps * overshoot].
double reaction_omega(double theta, double eps, double overshoot = default_theta_overshoot);

/// Right-hand side (eta, c eta - omega).
Vec2 vector_field(const PhasePoint& p, const Params& params);

/// Right-hand side divided by eps^-2 (1 + exp((theta - 1)/eps) / 2). Accepts
/// eps = 0, where it returns the piecewise-smooth limit (throws on theta = 1).
Vec2 normalized_vector_field(const PhasePoint& p, const Params& params);

/// Eigen-data of the node p- = (0, 0), computed from the Jacobian.
Linearisation linearize_pminus(const Params& params);

/// (eta, z, c) -> (-eta, -z, -c). Sample order is reversed so z stays increasing.
WaveProfile apply_symmetry(const WaveProfile& profile);

} // namespace zfk
