#pragma once

// Adaptive Dormand-Prince 5(4) integration with event detection.
//
// Events are located by bisection on the cubic Hermite interpolant of each
// accepted step, then polished with secant iterations on exact partial steps
// so the returned state satisfies the event equation to near round-off.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zfk/error.hpp"

namespace zfk {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_init = 1e-3;
    double h_min = 1e-14;
    double h_max = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 2'000'000;

    void validate() const
    {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw Error(ErrorCode::configuration, "integrator tolerances must be positive");
        if (!(h_min > 0.0) || !(h_min <= h_init) || !(h_init <= h_max))
            throw Error(ErrorCode::configuration, "integrator step bounds must satisfy 0 < h_min <= h_init <= h_max");
    }
};

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
struct EventSpec {
    std::function<double(double, const State<N>&)> fn;
    bool terminal = false;
    /// +1: only rising crossings, -1: only falling, 0: both.
    int direction = 0;
};

template <std::size_t N>
struct EventHit {
    std::size_t index = 0;
    double t = 0.0;
    State<N> y{};
};

template <std::size_t N>
struct Trajectory {
    std::vector<double> times;
    std::vector<State<N>> states;
    std::vector<EventHit<N>> event_hits;
    bool terminated_by_event = false;

    const State<N>& final_state() const { return states.back(); }
    double final_time() const { return times.back(); }
};

namespace detail {

template <std::size_t N>
bool all_finite(const State<N>& y)
{
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

template <std::size_t N>
State<N> hermite(const State<N>& y0, const State<N>& f0, const State<N>& y1, const State<N>& f1, double h, double s)
{
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    State<N> y{};
    for (std::size_t i = 0; i < N; ++i)
        y[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
    return y;
}

// One Dormand-Prince step. Returns the 5th-order solution, its derivative
// (FSAL) and the embedded error vector.
template <std::size_t N, class Field>
void dopri_step(Field& f, double t, const State<N>& y, const State<N>& k1, double h,
                State<N>& y_new, State<N>& k7, State<N>& err)
{
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    State<N> tmp{};
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    const State<N> k2 = f(t + c2 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    const State<N> k3 = f(t + c3 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    const State<N> k4 = f(t + c4 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    const State<N> k5 = f(t + c5 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const State<N> k6 = f(t + h, tmp);
    for (std::size_t i = 0; i < N; ++i)
        y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    k7 = f(t + h, y_new);
    for (std::size_t i = 0; i < N; ++i)
        err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
}

inline bool crossed(double g0, double g1, int direction)
{
    if (g0 == 0.0 || std::isnan(g0) || std::isnan(g1))
        return false;
    const bool rising = g0 < 0.0 && g1 >= 0.0;
    const bool falling = g0 > 0.0 && g1 <= 0.0;
    if (direction > 0) return rising;
    if (direction < 0) return falling;
    return rising || falling;
}

} // namespace detail

/// Integrates y' = field(t, y) from span.first to span.second (either
/// direction). Every accepted step is recorded.
template <std::size_t N, class Field>
Trajectory<N> integrate(Field&& field, const State<N>& y0, std::pair<double, double> span,
                        const IntegratorConfig& config, std::span<const EventSpec<N>> events = {})
{
    config.validate();
    const double t0 = span.first;
    const double t1 = span.second;
    if (t0 == t1)
        throw Error(ErrorCode::configuration, "integration span is degenerate");
    if (!detail::all_finite(y0))
        throw Error(ErrorCode::non_finite_state, "initial state is not finite");
    const double dir = t1 > t0 ? 1.0 : -1.0;

    auto f = [&field](double t, const State<N>& y) -> State<N> { return field(t, y); };

    Trajectory<N> traj;
    traj.times.push_back(t0);
    traj.states.push_back(y0);

    State<N> y = y0;
    State<N> k1 = f(t0, y);
    if (!detail::all_finite(k1))
        throw Error(ErrorCode::non_finite_state, "field is not finite at the initial state");
    double t = t0;
    double h = std::min(config.h_init, std::abs(t1 - t0));

    std::vector<double> g_prev(events.size());
    for (std::size_t e = 0; e < events.size(); ++e) g_prev[e] = events[e].fn(t, y);

    auto error_norm = [&config](const State<N>& a, const State<N>& b, const State<N>& err) {
        double acc = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = config.abs_tol + config.rel_tol * std::max(std::abs(a[i]), std::abs(b[i]));
            const double r = err[i] / sc;
            acc += r * r;
        }
        return std::sqrt(acc / static_cast<double>(N));
    };

    std::size_t steps = 0;
    bool last_reject_non_finite = false;
    std::optional<Error> last_stage_error;
    State<N> y_new{}, k7{}, err{};

    while (dir * (t1 - t) > 0.0) {
        if (++steps > config.max_steps)
            throw Error(ErrorCode::max_steps_exceeded, "integration exceeded " + std::to_string(config.max_steps) + " steps");
        if (h < config.h_min) {
            if (last_stage_error)
                throw *last_stage_error;
            if (last_reject_non_finite)
                throw Error(ErrorCode::non_finite_state, "state became non-finite at t = " + std::to_string(t));
            throw Error(ErrorCode::step_underflow, "step size fell below h_min at t = " + std::to_string(t));
        }
        h = std::min(h, config.h_max);
        bool hits_end = false;
        if (h >= std::abs(t1 - t)) {
            h = std::abs(t1 - t);
            hits_end = true;
        }
        const double hs = dir * h;

        bool stage_ok = true;
        try {
            detail::dopri_step<N>(f, t, y, k1, hs, y_new, k7, err);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::domain && e.code() != ErrorCode::overflow_guard)
                throw;
            stage_ok = false;
            last_stage_error = e;
        }
        if (stage_ok && !(detail::all_finite(y_new) && detail::all_finite(k7) && detail::all_finite(err))) {
            stage_ok = false;
            last_reject_non_finite = true;
        }
        if (!stage_ok) {
            h *= 0.25;
            continue;
        }
        const double en = error_norm(y, y_new, err);
        if (!(en <= 1.0)) {
            h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
            continue;
        }
        last_reject_non_finite = false;
        last_stage_error.reset();

        const double t_new = hits_end ? t1 : t + hs;

        // Event scan on the accepted step.
        std::optional<EventHit<N>> earliest;
        for (std::size_t e = 0; e < events.size(); ++e) {
            const double g_new = events[e].fn(t_new, y_new);
            if (detail::crossed(g_prev[e], g_new, events[e].direction)) {
                const auto& ev = events[e].fn;
                auto g_dense = [&](double s) {
                    return ev(t + s * (t_new - t), detail::hermite<N>(y, k1, y_new, k7, t_new - t, s));
                };
                double lo = 0.0, hi = 1.0;
                const double g_lo = g_prev[e];
                const double dt_tol = 1e-12 / std::max(std::abs(t_new - t), 1e-300);
                while ((hi - lo) > dt_tol && (hi - lo) > 4.0 * std::numeric_limits<double>::epsilon()) {
                    const double mid = 0.5 * (lo + hi);
                    const double gm = g_dense(mid);
                    if ((gm < 0.0) == (g_lo < 0.0) && gm != 0.0)
                        lo = mid;
                    else
                        hi = mid;
                }
                // Polish with exact partial steps from (t, y).
                auto exact = [&](double s, State<N>& ys) {
                    State<N> k_tmp{}, e_tmp{};
                    if (s <= 0.0) {
                        ys = y;
                        return;
                    }
                    if (s >= 1.0) {
                        ys = y_new;
                        return;
                    }
                    detail::dopri_step<N>(f, t, y, k1, s * (t_new - t), ys, k_tmp, e_tmp);
                };
                double sa = lo, sb = hi;
                State<N> ya{}, yb{};
                exact(sa, ya);
                exact(sb, yb);
                double ga = ev(t + sa * (t_new - t), ya);
                double gb = ev(t + sb * (t_new - t), yb);
                double s_hit = std::abs(ga) < std::abs(gb) ? sa : sb;
                State<N> y_hit = std::abs(ga) < std::abs(gb) ? ya : yb;
                for (int it = 0; it < 8 && ga != gb; ++it) {
                    const double sn = sb - gb * (sb - sa) / (gb - ga);
                    if (!(sn > 0.0 && sn < 1.0) || sn == sb)
                        break;
                    State<N> yn{};
                    exact(sn, yn);
                    const double gn = ev(t + sn * (t_new - t), yn);
                    sa = sb;
                    ga = gb;
                    sb = sn;
                    gb = gn;
                    s_hit = sn;
                    y_hit = yn;
                    if (gn == 0.0 || std::abs(sb - sa) * std::abs(t_new - t) < 1e-15)
                        break;
                }
                const double t_hit = t + s_hit * (t_new - t);
                if (!earliest || dir * (t_hit - earliest->t) < 0.0)
                    earliest = EventHit<N>{e, t_hit, y_hit};
            }
        }

        if (earliest) {
            const auto& spec = events[earliest->index];
            traj.event_hits.push_back(*earliest);
            if (spec.terminal) {
                traj.times.push_back(earliest->t);
                traj.states.push_back(earliest->y);
                traj.terminated_by_event = true;
                return traj;
            }
        }

        for (std::size_t e = 0; e < events.size(); ++e) g_prev[e] = events[e].fn(t_new, y_new);
        t = t_new;
        y = y_new;
        k1 = k7;
        traj.times.push_back(t);
        traj.states.push_back(y);

        const double factor = en == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(en, -0.2)));
        h = std::abs(hs) * factor;
    }
    return traj;
}

template <std::size_t N, class Field>
Trajectory<N> integrate(Field&& field, const State<N>& y0, std::pair<double, double> span,
                        const IntegratorConfig& config, const std::vector<EventSpec<N>>& events)
{
    return integrate<N>(std::forward<Field>(field), y0, span, config, std::span<const EventSpec<N>>(events));
}

} // namespace zfk
