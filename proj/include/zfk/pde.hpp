#pragma once

// Method-of-lines solver for theta_t = theta_xx + omega(theta, eps) on
// [-L, L]: second-order central differences, classical RK4 in time.
//
// The travelling wave theta(x + c t) moves towards -x; the tracked front
// position therefore decreases and speed_fit is reported as |slope|.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zfk/profile.hpp"

namespace zfk {

enum class BoundaryKind {
    /// theta(-L) = 0, theta(L) = 1.
    fixed,
    zero_flux,
};

struct PdeConfig {
    double L = 10.0;
    std::size_t N = 1001;
    /// 0 selects the largest admissible step 0.4 (2L/N)^2.
    double dt = 0.0;
    double T = 4.0;
    BoundaryKind bc = BoundaryKind::fixed;
    /// Initial front position for profile / step data.
    double x0 = 3.0;
    double output_interval = 0.05;
    /// Write snapshots x,theta every `snapshot_every` outputs into this directory.
    std::optional<std::filesystem::path> snapshot_dir;
    std::size_t snapshot_every = 10;
    bool parallel = true;

    double dx() const { return 2.0 * L / static_cast<double>(N - 1); }
    double max_dt() const
    {
        const double h = 2.0 * L / static_cast<double>(N);
        return 0.4 * h * h;
    }
    double time_step() const { return dt > 0.0 ? dt : max_dt(); }
    void validate() const;
};

struct FrontTrack {
    std::vector<double> times;
    std::vector<double> positions;
    double speed_fit = 0.0;
    double fit_residual = 0.0;
};

struct PdeResult {
    FrontTrack track;
    std::vector<double> x;
    std::vector<double> theta;
    std::size_t clip_events = 0;
    /// Front came within 5 cells of a boundary; the run stopped early.
    bool truncated = false;
    double final_time = 0.0;
    std::vector<std::filesystem::path> snapshots;
};

/// du/dt for the interior and boundary nodes. The reaction is evaluated with
/// the log-space kernel and set to 0 for theta <= 0.
void pde_rhs_serial(const double* u, double* du, std::size_t n, double dx, double eps, BoundaryKind bc);
void pde_rhs_parallel(const double* u, double* du, std::size_t n, double dx, double eps, BoundaryKind bc);

/// Initial datum from a profile placed with theta = 1/2 at x0; exponential
/// extensions outside the sampled z range.
std::function<double(double)> profile_initial_data(const WaveProfile& profile, double x0);
/// Heaviside step at x0 (exploratory speed-selection runs).
std::function<double(double)> step_initial_data(double x0);

using OutputObserver = std::function<void(double t, const std::vector<double>& theta)>;

PdeResult pde_run(const PdeConfig& config, double eps, const std::function<double(double)>& initial,
                  const OutputObserver& observer = {});
PdeResult pde_run(const PdeConfig& config, double eps, const WaveProfile& initial, const OutputObserver& observer = {});

/// Least-squares slope and RMS residual over the trailing half of the record.
void fit_front_speed(FrontTrack& track);

/// x where theta first crosses 1/2 (linear interpolation); NaN if none.
double front_position(const std::vector<double>& x, const std::vector<double>& theta);

} // namespace zfk
