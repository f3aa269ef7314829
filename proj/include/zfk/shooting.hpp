#pragma once

// Two-sided heteroclinic shooting between p- = (0, 0) and p+ = (1, 0).
//
// The matching section sits in the inner chart at theta2 = -Theta. The stable
// side is the backward K2 orbit from the p+ saddle; the unstable side is the
// strong unstable manifold of p-, integrated in original coordinates (the
// region theta <= 1 - eps Theta is not stiff). gap = eta_u - eta_s is
// increasing in c and vanishes at the minimal speed.

#include <optional>
#include <utility>
#include <vector>

#include "zfk/integrate.hpp"
#include "zfk/model.hpp"
#include "zfk/profile.hpp"

namespace zfk {

enum class UnstableSide {
    /// Integrate the strong unstable manifold up to the section (eps > 0).
    integrated,
    /// Use the graph eta = c theta at the section.
    analytic,
};

struct ShootConfig {
    double Theta_match = 12.0;
    double delta0 = 1e-4;
    double delta1 = 1e-6;
    /// Initial bracket [1, 1 + 4 eps] when unset.
    std::optional<std::pair<double, double>> c_bracket;
    double root_tol = 1e-10;
    /// Upper limit of the bracket expansion.
    double sigma = 5.0;
    /// The section never goes below this theta (keeps large Theta usable at moderate eps).
    double theta_floor = 0.2;
    UnstableSide unstable = UnstableSide::integrated;
    /// Repeat the root-find with Theta + 4 and report the shift.
    bool theta_refinement = true;
    /// Series order for the slow segment of weak profiles.
    int slow_order = 3;
    /// Profiles with c <= 1 + kappa_regime in the weak case are flagged.
    double kappa_regime = 0.1;
    IntegratorConfig integrator = default_integrator();

    void validate() const;
    /// Theta actually used at this eps: min(Theta, (1 - theta_floor) / eps).
    double effective_Theta(double eps) const;

    static IntegratorConfig default_integrator()
    {
        IntegratorConfig c;
        c.rel_tol = 1e-12;
        c.abs_tol = 1e-14;
        c.h_init = 1e-4;
        return c;
    }
};

struct UnstableEta {
    double eta = 0.0;
    /// c (1 - eps Theta), the flat-remainder-free graph value.
    double eta_graph = 0.0;
    /// eta - eta_graph (0 in analytic mode).
    double discrepancy = 0.0;
};

struct GapResult {
    double gap = 0.0;
    double eta_u = 0.0;
    double eta_s = 0.0;
};

struct SpeedResult {
    double eps = 0.0;
    double cbar = 0.0;
    double gap_at_root = 0.0;
    std::vector<std::pair<double, double>> bracket_history;
    int iterations = 0;
    /// Gap strictly increasing on the 5-point grid over the initial bracket.
    bool monotone = false;
    /// |cbar(Theta + 4) - cbar(Theta)|, NaN when not computed.
    double theta_shift = 0.0;
};

UnstableEta unstable_eta_at_match(const Params& params, const ShootConfig& config = {});

/// Backward K2 orbit from the p+ seed to theta2 = -Theta (states are (theta2, eta), time is z2).
Trajectory<2> stable_branch_k2(const Params& params, const ShootConfig& config = {});
double stable_eta_at_match(const Params& params, const ShootConfig& config = {});

/// Strong unstable manifold of p- in original coordinates, from the seed to
/// theta = theta_stop (or until eta <= 0).
Trajectory<2> strong_unstable_branch(const Params& params, double theta_stop, const ShootConfig& config = {});

GapResult gap(double c, double eps, const ShootConfig& config = {});

SpeedResult find_min_speed(double eps, const ShootConfig& config = {});

/// Assembles inner / fast / slow pieces; z_span bounds the window kept
/// around theta(0) = 1/2.
WaveProfile build_profile(double c, double eps, const ShootConfig& config = {},
                          std::pair<double, double> z_span = {-1e6, 1e6});

/// Continuation of the stable manifold of p+ backward in original coordinates
/// from the matching section: stops at theta <= delta0, eta <= 0, or on landing on
/// the slow manifold. Used for phase portraits. Sample order is decreasing z.
Trajectory<2> stable_manifold_continuation(const Params& params, const ShootConfig& config = {});

struct DefectReport {
    double max_theta = 0.0;
    double max_eta = 0.0;
};

/// Re-integrates between consecutive non-slow samples and reports the largest
/// componentwise mismatch with the next sample.
DefectReport profile_defect(const WaveProfile& profile, const IntegratorConfig& config = ShootConfig::default_integrator());

struct HausdorffReport {
    /// max over trace points of the distance to Gamma(c).
    double trace_to_singular = 0.0;
    /// Symmetric Hausdorff distance.
    double symmetric = 0.0;
};

/// Distance in the (theta, eta) plane between a profile trace and the singular
/// orbit (requires c >= 1), with theta* = 1 - 1/c:
///   slow   {eta = 0, 0 <= theta <= theta*}
///   fast   {eta = c (theta - theta*), theta* <= theta <= 1}
///   inner  {theta = 1, 0 <= eta <= 1}.
HausdorffReport singular_orbit_distance(const WaveProfile& profile, double c);

} // namespace zfk
