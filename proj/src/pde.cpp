#include "zfk/pde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "zfk/csv.hpp"
#include "zfk/error.hpp"
#include "zfk/model.hpp"

namespace zfk {

void PdeConfig::validate() const
{
    if (!(L > 0.0))
        throw Error(ErrorCode::configuration, "L must be positive");
    if (N < 400)
        throw Error(ErrorCode::configuration, "N must be at least 400");
    if (dt < 0.0 || time_step() > max_dt() * (1.0 + 1e-12))
        throw Error(ErrorCode::configuration, "dt exceeds the explicit stability limit 0.4 (2L/N)^2");
    if (!(T > 0.0) || !(output_interval > 0.0))
        throw Error(ErrorCode::configuration, "T and output_interval must be positive");
    if (!(std::abs(x0) < L))
        throw Error(ErrorCode::configuration, "x0 must lie inside the domain");
    if (snapshot_every == 0)
        throw Error(ErrorCode::configuration, "snapshot_every must be positive");
}

namespace {

inline double reaction(double u, double eps)
{
    if (u <= 0.0 || u == 1.0)
        return 0.0;
    return reaction_omega_raw(u, eps);
}

inline double laplacian(const double* u, std::size_t i, std::size_t n, double inv_dx2, BoundaryKind bc)
{
    if (i == 0)
        return bc == BoundaryKind::zero_flux ? 2.0 * (u[1] - u[0]) * inv_dx2 : 0.0;
    if (i == n - 1)
        return bc == BoundaryKind::zero_flux ? 2.0 * (u[n - 2] - u[n - 1]) * inv_dx2 : 0.0;
    return (u[i - 1] - 2.0 * u[i] + u[i + 1]) * inv_dx2;
}

inline double rhs_at(const double* u, std::size_t i, std::size_t n, double inv_dx2, double eps, BoundaryKind bc)
{
    if (bc == BoundaryKind::fixed && (i == 0 || i == n - 1))
        return 0.0;
    return laplacian(u, i, n, inv_dx2, bc) + reaction(u[i], eps);
}

} // namespace

void pde_rhs_serial(const double* u, double* du, std::size_t n, double dx, double eps, BoundaryKind bc)
{
    const double inv_dx2 = 1.0 / (dx * dx);
    for (std::size_t i = 0; i < n; ++i) du[i] = rhs_at(u, i, n, inv_dx2, eps, bc);
}

void pde_rhs_parallel(const double* u, double* du, std::size_t n, double dx, double eps, BoundaryKind bc)
{
    const double inv_dx2 = 1.0 / (dx * dx);
    const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < nn; ++i)
        du[i] = rhs_at(u, static_cast<std::size_t>(i), n, inv_dx2, eps, bc);
}

std::function<double(double)> profile_initial_data(const WaveProfile& profile, double x0)
{
    if (profile.size() < 2)
        throw Error(ErrorCode::domain, "initial profile needs at least two samples");
    // Keep only strictly increasing z (defensive; profiles already satisfy it).
    std::vector<double> z, th, eta;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (!z.empty() && !(profile.z[i] > z.back()))
            continue;
        z.push_back(profile.z[i]);
        th.push_back(profile.theta[i]);
        eta.push_back(profile.eta[i]);
    }
    const double left_rate = th.front() > 0.0 ? eta.front() / th.front() : 0.0;
    const double right_gap = 1.0 - th.back();
    const double right_rate = right_gap > 0.0 ? eta.back() / right_gap : 0.0;
    return [z, th, eta, x0, left_rate, right_gap, right_rate](double x) {
        const double s = x - x0;
        if (s <= z.front())
            return th.front() * std::exp(left_rate * (s - z.front()));
        if (s >= z.back())
            return 1.0 - right_gap * std::exp(-right_rate * (s - z.back()));
        const auto it = std::upper_bound(z.begin(), z.end(), s);
        const auto j = static_cast<std::size_t>(it - z.begin());
        const double h = z[j] - z[j - 1];
        const double t = (s - z[j - 1]) / h;
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
        const double v = h00 * th[j - 1] + h10 * h * eta[j - 1] + h01 * th[j] + h11 * h * eta[j];
        return std::clamp(v, 0.0, 1.0);
    };
}

std::function<double(double)> step_initial_data(double x0)
{
    return [x0](double x) { return x < x0 ? 0.0 : 1.0; };
}

double front_position(const std::vector<double>& x, const std::vector<double>& theta)
{
    for (std::size_t i = 0; i + 1 < theta.size(); ++i) {
        if (theta[i] < 0.5 && theta[i + 1] >= 0.5) {
            const double w = (0.5 - theta[i]) / (theta[i + 1] - theta[i]);
            return x[i] + w * (x[i + 1] - x[i]);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

void fit_front_speed(FrontTrack& track)
{
    const std::size_t n = track.times.size();
    const std::size_t start = n / 2;
    const std::size_t m = n - start;
    if (m < 2) {
        track.speed_fit = std::numeric_limits<double>::quiet_NaN();
        track.fit_residual = std::numeric_limits<double>::quiet_NaN();
        return;
    }
    double st = 0, sx = 0;
    for (std::size_t i = start; i < n; ++i) {
        st += track.times[i];
        sx += track.positions[i];
    }
    const double mt = st / m, mx = sx / m;
    double stt = 0, stx = 0;
    for (std::size_t i = start; i < n; ++i) {
        stt += (track.times[i] - mt) * (track.times[i] - mt);
        stx += (track.times[i] - mt) * (track.positions[i] - mx);
    }
    const double slope = stx / stt;
    double rss = 0;
    for (std::size_t i = start; i < n; ++i) {
        const double r = track.positions[i] - (mx + slope * (track.times[i] - mt));
        rss += r * r;
    }
    track.speed_fit = std::abs(slope);
    track.fit_residual = std::sqrt(rss / m);
}

PdeResult pde_run(const PdeConfig& config, double eps, const std::function<double(double)>& initial,
                  const OutputObserver& observer)
{
    config.validate();
    if (!(eps > 0.0))
        throw Error(ErrorCode::domain, "pde_run requires eps > 0");
    const std::size_t n = config.N;
    const double dx = config.dx();
    PdeResult res;
    res.x.resize(n);
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        res.x[i] = -config.L + dx * static_cast<double>(i);
        u[i] = initial(res.x[i]);
        if (!(u[i] >= 0.0 && u[i] <= 1.0))
            throw Error(ErrorCode::domain, "initial data must lie in [0, 1]");
    }
    if (config.bc == BoundaryKind::fixed) {
        u.front() = 0.0;
        u.back() = 1.0;
    }

    const auto per_output = static_cast<std::size_t>(std::ceil(config.output_interval / config.time_step() - 1e-9));
    const double dt = config.output_interval / static_cast<double>(per_output);
    const auto n_outputs = static_cast<std::size_t>(std::floor(config.T / config.output_interval + 1e-9));

    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    auto rhs = [&](const std::vector<double>& a, std::vector<double>& out) {
        if (config.parallel)
            pde_rhs_parallel(a.data(), out.data(), n, dx, eps, config.bc);
        else
            pde_rhs_serial(a.data(), out.data(), n, dx, eps, config.bc);
    };
    const auto nn = static_cast<std::ptrdiff_t>(n);
    const bool par = config.parallel;
    auto axpy = [&](std::vector<double>& out, const std::vector<double>& k, double a) {
#pragma omp parallel for schedule(static) if (par)
        for (std::ptrdiff_t i = 0; i < nn; ++i) out[i] = u[i] + a * k[i];
    };

    auto record = [&](double t, std::size_t index) {
        const double pos = front_position(res.x, u);
        res.track.times.push_back(t);
        res.track.positions.push_back(pos);
        if (observer)
            observer(t, u);
        if (config.snapshot_dir && index % config.snapshot_every == 0) {
            char name[64];
            std::snprintf(name, sizeof name, "snapshot_%04zu.csv", index / config.snapshot_every);
            CsvWriter w(*config.snapshot_dir / name, {"x", "theta"});
            for (std::size_t i = 0; i < n; ++i) {
                w.cell(res.x[i]).cell(u[i]);
                w.end_row();
            }
            res.snapshots.push_back(w.path());
        }
        return pos;
    };

    double t = 0.0;
    record(t, 0);
    const double margin = 5.0 * dx;
    for (std::size_t out = 1; out <= n_outputs; ++out) {
        for (std::size_t s = 0; s < per_output; ++s) {
            rhs(u, k1);
            axpy(tmp, k1, 0.5 * dt);
            rhs(tmp, k2);
            axpy(tmp, k2, 0.5 * dt);
            rhs(tmp, k3);
            axpy(tmp, k3, dt);
            rhs(tmp, k4);
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
#pragma omp parallel for schedule(static) reduction(min : lo) reduction(max : hi) if (par)
            for (std::ptrdiff_t i = 0; i < nn; ++i) {
                u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                lo = std::min(lo, u[i]);
                hi = std::max(hi, u[i]);
            }
            if (!(hi <= 1.0 + 1e-6) || !(lo >= -1e-6))
                throw Error(ErrorCode::stability_violation,
                            "solution left [0, 1] by more than 1e-6 at t = " + std::to_string(t + dt));
            if (hi > 1.0 + 1e-12 || lo < -1e-12) {
                for (auto& v : u) v = std::clamp(v, 0.0, 1.0);
                ++res.clip_events;
            }
            t += dt;
        }
        t = static_cast<double>(out) * config.output_interval;
        const double pos = record(t, out);
        if (!std::isfinite(pos) && std::isfinite(res.track.positions.front())) {
            // The crossing left the grid between two outputs.
            res.track.times.pop_back();
            res.track.positions.pop_back();
            res.truncated = true;
            break;
        }
        if (std::isfinite(pos) && (pos - (-config.L) < margin || config.L - pos < margin)) {
            res.truncated = true;
            break;
        }
    }
    res.final_time = t;
    res.theta = u;
    fit_front_speed(res.track);
    return res;
}

PdeResult pde_run(const PdeConfig& config, double eps, const WaveProfile& initial, const OutputObserver& observer)
{
    return pde_run(config, eps, profile_initial_data(initial, config.x0), observer);
}

} // namespace zfk
