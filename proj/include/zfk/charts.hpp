#pragma once

// Blow-up geometry near the degenerate set {theta = 1, eps = 0}.
//
// K2 (inner rescaling):   theta = 1 + eps theta2, z = eps z2
// K1 (matching corner):   (theta, eta, eps) = (1 - r1, eta, r1 eps1)
//
// In K1 the coordinate y1 straightens the fibres of the eps1 > 0 dynamics;
// y1 = 1 on the separatrix level set. The transition map from
// {eps1 = eps/rho} to {eps1 = delta} is y1 -> y1 + eps J(y1, c) + O(eps1^2).

#include <array>
#include <utility>

#include "zfk/integrate.hpp"
#include "zfk/model.hpp"

namespace zfk {

struct K2Point {
    double theta2 = 0.0;
    double eta = 0.0;
};

struct K1Point {
    double r1 = 0.0;
    double eta = 0.0;
    double eps1 = 0.0;
};

struct NormalFormPoint {
    double r1 = 0.0;
    double y1 = 0.0;
    double eps1 = 0.0;
};

using Vec3 = std::array<double, 3>;

/// theta2 values above this are rejected (e^theta2 would overflow).
inline constexpr double k2_overflow_guard = 700.0;

K2Point to_k2(const PhasePoint& p, double eps);
PhasePoint from_k2(const K2Point& q, double eps);

/// theta2' = eta, eta' = theta2 e^theta2 / 2 + eps (c eta + theta2^2 e^theta2 / 2).
Vec2 k2_vector_field(const K2Point& q, const Params& params);

/// Negative saddle eigenvalue of the K2 field at (0, 0).
double k2_stable_eigenvalue(const Params& params);

/// H = eta^2/2 - (theta2 - 1) e^theta2 / 2; conserved by the eps = 0 K2 flow.
double hamiltonian(const K2Point& q);

/// 1 + (x - 1) e^x, accurate near x = 0 where it vanishes quadratically.
double separatrix_radicand(double theta2);

/// Stable / unstable manifolds of the eps = 0 saddle on the level H = 1/2.
double separatrix_hs(double theta2);
double separatrix_hu(double theta2);

/// Cylindrical blow-up (r, theta_bar, eps_bar) -> (theta, eps) = (1 + r theta_bar, r eps_bar).
std::pair<double, double> blowup_map(double r, double theta_bar, double eps_bar);

/// K2 -> K1: r1 = -eps theta2, eps1 = -1/theta2 (theta2 < 0).
std::pair<double, double> kappa21(double theta2, double eps);
/// K1 -> K2: theta2 = -1/eps1, eps = r1 eps1 (eps1 > 0).
std::pair<double, double> kappa12(double r1, double eps1);

/// (r1', eta', eps1') of the K1 system; the flat term is exactly 0 at eps1 = 0.
Vec3 k1_vector_field(const K1Point& p, const Params& params);
/// Same field divided by eta (> 0 near the base point q = (0, 1, 0)).
Vec3 k1_vector_field_divided(const K1Point& p, const Params& params);

/// (1/eps1 + 1) e^{-1/eps1}; exactly 0 at eps1 = 0.
double k1_flat_offset(double eps1);

double y1_coordinate(const K1Point& p, double c);
double f1(double y1, double eps1);
double F1_chart(double r1, double y1, double eps1, double c);

struct TransitionOptions {
    double rho = 0.1;
    double delta = 0.5;
    double tolerance = 1e-12;
};

/// J(y1, c, delta) = int_0^delta s^-2 F1(0, y1, s, c) ds (flat at s = 0).
double transition_integral(double y1, double c, double delta, double tolerance = 1e-12);

/// Leading-order y1 on the exit section eps1 = delta, entering at eps1 <= delta.
double transition_map_leading(double y1, double eps1, double c, const TransitionOptions& opt = {});

/// r1 on the exit section: (rho / delta) eps1.
double transition_exit_r1(double eps1, const TransitionOptions& opt = {});

/// Direct numerical passage through the corner: integrates the eta-divided K1
/// system from (rho, f1(y1, eps1) - c rho, eps1) until eps1 = delta and returns y1 there.
double transition_map_numeric(double y1, double eps1, double c, const TransitionOptions& opt = {},
                              const IntegratorConfig& config = {});

} // namespace zfk
