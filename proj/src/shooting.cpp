#include "zfk/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "zfk/asymptotics.hpp"
#include "zfk/charts.hpp"
#include "zfk/error.hpp"
#include "zfk/quadrature.hpp"

namespace zfk {

void ShootConfig::validate() const
{
    if (!(Theta_match >= 8.0))
        throw Error(ErrorCode::configuration, "Theta_match must be >= 8");
    if (!(delta0 > 0.0 && delta0 < 0.1))
        throw Error(ErrorCode::configuration, "delta0 must lie in (0, 0.1)");
    if (!(delta1 > 0.0 && delta1 < 1e-2))
        throw Error(ErrorCode::configuration, "delta1 must lie in (0, 1e-2)");
    if (c_bracket && !(c_bracket->first < c_bracket->second))
        throw Error(ErrorCode::configuration, "c bracket must be nondegenerate");
    if (!(root_tol > 0.0))
        throw Error(ErrorCode::configuration, "root_tol must be positive");
    if (!(theta_floor > 0.0 && theta_floor < 1.0))
        throw Error(ErrorCode::configuration, "theta_floor must lie in (0, 1)");
    if (slow_order < 1 || slow_order > 8)
        throw Error(ErrorCode::configuration, "slow series order must lie in [1, 8]");
    integrator.validate();
}

double ShootConfig::effective_Theta(double eps) const
{
    if (eps <= 0.0)
        return Theta_match;
    return std::min(Theta_match, (1.0 - theta_floor) / eps);
}

namespace {

auto zfk_field(const Params& p)
{
    return [p](double, const State<2>& y) { return vector_field({y[0], y[1]}, p); };
}

auto k2_field(const Params& p)
{
    return [p](double, const State<2>& y) { return k2_vector_field({y[0], y[1]}, p); };
}

// Sentinel event values for events that are inactive at a state.
constexpr double inactive = 1.0;

} // namespace

// ---------------------------------------------------------------------------

Trajectory<2> strong_unstable_branch(const Params& params, double theta_stop, const ShootConfig& config)
{
    if (!(params.eps > 0.0))
        throw Error(ErrorCode::domain, "the strong unstable branch is integrated only for eps > 0");
    const auto lin = linearize_pminus(params);
    const double d0 = config.delta0;
    const State<2> seed{d0, lin.lambda_strong * d0};
    std::vector<EventSpec<2>> ev{
        {[theta_stop](double, const State<2>& y) { return y[0] - theta_stop; }, true, +1},
        {[](double, const State<2>& y) { return y[1]; }, true, -1},
    };
    IntegratorConfig ic = config.integrator;
    ic.h_init = std::min(ic.h_init, 1e-3);
    return integrate<2>(zfk_field(params), seed, {0.0, 1e4 / std::max(params.c, 1e-3)}, ic, ev);
}

UnstableEta unstable_eta_at_match(const Params& params, const ShootConfig& config)
{
    const double Theta = config.effective_Theta(params.eps);
    const double graph = params.c * (1.0 - params.eps * Theta);
    if (params.eps == 0.0 || config.unstable == UnstableSide::analytic)
        return {graph, graph, 0.0};
    if (params.eps < 0.0)
        throw Error(ErrorCode::domain, "eps must be nonnegative");
    const double theta_s = 1.0 - params.eps * Theta;
    const auto tr = strong_unstable_branch(params, theta_s, config);
    if (!tr.terminated_by_event || tr.event_hits.back().index != 0)
        throw Error(ErrorCode::corridor_escape, "strong unstable manifold did not reach the matching section");
    const double eta = tr.final_state()[1];
    return {eta, graph, eta - graph};
}

Trajectory<2> stable_branch_k2(const Params& params, const ShootConfig& config)
{
    config.validate();
    if (params.eps < 0.0)
        throw Error(ErrorCode::domain, "eps must be nonnegative");
    const double Theta = config.effective_Theta(params.eps);
    const double lam = k2_stable_eigenvalue(params);
    const double d1 = config.delta1;
    const State<2> seed{-d1, -lam * d1};
    const double ceiling = params.c + 1.0;
    if (!(seed[1] > 0.0 && seed[1] < ceiling))
        throw Error(ErrorCode::corridor_escape, "stable seed lies outside the corridor 0 < eta < c + 1");
    std::vector<EventSpec<2>> ev{
        {[Theta](double, const State<2>& y) { return y[0] + Theta; }, true, -1},
        {[](double, const State<2>& y) { return y[1]; }, true, -1},
        {[ceiling](double, const State<2>& y) { return y[1] - ceiling; }, true, +1},
    };
    IntegratorConfig ic = config.integrator;
    ic.h_init = std::min(ic.h_init, 1e-3);
    auto tr = integrate<2>(k2_field(params), seed, {0.0, -1e4}, ic, ev);
    if (!tr.terminated_by_event || tr.event_hits.back().index != 0)
        throw Error(ErrorCode::corridor_escape,
                    "stable manifold of p+ left the corridor 0 < eta < c + 1 before the matching section");
    return tr;
}

double stable_eta_at_match(const Params& params, const ShootConfig& config)
{
    return stable_branch_k2(params, config).final_state()[1];
}

GapResult gap(double c, double eps, const ShootConfig& config)
{
    const Params p{c, eps};
    const double eta_u = unstable_eta_at_match(p, config).eta;
    const double eta_s = stable_eta_at_match(p, config);
    return {eta_u - eta_s, eta_u, eta_s};
}

// ---------------------------------------------------------------------------

namespace {

SpeedResult root_find(double eps, const ShootConfig& config)
{
    SpeedResult res;
    res.eps = eps;
    auto eval = [&](double c) {
        const double g = gap(c, eps, config).gap;
        res.bracket_history.emplace_back(c, g);
        return g;
    };

    double lo = config.c_bracket ? config.c_bracket->first : 1.0;
    double hi = config.c_bracket ? config.c_bracket->second : 1.0 + 4.0 * eps;
    double glo = eval(lo);
    if (glo >= 0.0) {
        const double alt = std::min(lo, 1.0 - eps);
        if (alt < lo) {
            lo = alt;
            glo = eval(lo);
        }
        if (glo >= 0.0)
            throw Error(ErrorCode::no_bracket, "gap is nonnegative at the lower bracket end c = " + std::to_string(lo));
    }
    double ghi = eval(hi);
    while (ghi <= 0.0) {
        if (hi >= config.sigma)
            throw Error(ErrorCode::no_bracket, "no sign change of the gap in [" + std::to_string(lo) + ", sigma]");
        const double width = hi - lo;
        lo = hi;
        glo = ghi;
        hi = std::min(hi + 2.0 * width, config.sigma);
        ghi = eval(hi);
    }

    // Monotonicity on a 5-point grid over the bracket.
    {
        std::vector<double> g{glo};
        for (int i = 1; i <= 3; ++i) g.push_back(eval(lo + (hi - lo) * i / 4.0));
        g.push_back(ghi);
        res.monotone = std::adjacent_find(g.begin(), g.end(), std::greater_equal<double>{}) == g.end();
    }

    // Bisection to a 1e-3 bracket, then secant safeguarded by the bracket.
    int it = 0;
    const int max_iter = 200;
    double best_c = std::abs(glo) < std::abs(ghi) ? lo : hi;
    double best_g = std::abs(glo) < std::abs(ghi) ? glo : ghi;
    while (hi - lo > 1e-3 && std::abs(best_g) > config.root_tol) {
        const double mid = 0.5 * (lo + hi);
        const double gm = eval(mid);
        ++it;
        if (gm < 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
            ghi = gm;
        }
        if (std::abs(gm) < std::abs(best_g)) {
            best_c = mid;
            best_g = gm;
        }
    }
    double c0 = lo, g0 = glo, c1 = hi, g1 = ghi;
    while (std::abs(best_g) > config.root_tol) {
        if (++it > max_iter)
            throw Error(ErrorCode::root_stagnation, "minimal-speed root-find did not converge");
        double cn = c1 - g1 * (c1 - c0) / (g1 - g0);
        if (!(cn > lo && cn < hi) || !std::isfinite(cn))
            cn = 0.5 * (lo + hi);
        const double gn = eval(cn);
        if (gn < 0.0) {
            lo = cn;
            glo = gn;
        } else {
            hi = cn;
            ghi = gn;
        }
        c0 = c1;
        g0 = g1;
        c1 = cn;
        g1 = gn;
        if (std::abs(gn) < std::abs(best_g)) {
            best_c = cn;
            best_g = gn;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi && std::abs(best_g) > config.root_tol)
            throw Error(ErrorCode::root_stagnation, "bracket collapsed before |gap| <= root_tol");
    }
    res.cbar = best_c;
    res.gap_at_root = best_g;
    res.iterations = it;
    return res;
}

} // namespace

SpeedResult find_min_speed(double eps, const ShootConfig& config)
{
    config.validate();
    if (!(eps > 0.0 && eps <= 0.1))
        throw Error(ErrorCode::domain, "find_min_speed requires eps in (0, 0.1]");
    SpeedResult res = root_find(eps, config);
    res.theta_shift = std::numeric_limits<double>::quiet_NaN();
    if (config.theta_refinement) {
        ShootConfig refined = config;
        refined.Theta_match = config.Theta_match + 4.0;
        refined.theta_refinement = false;
        refined.c_bracket = std::make_pair(res.cbar - 0.07 * eps, res.cbar + 0.11 * eps);
        try {
            res.theta_shift = std::abs(root_find(eps, refined).cbar - res.cbar);
        } catch (const Error&) {
            refined.c_bracket.reset();
            res.theta_shift = std::abs(root_find(eps, refined).cbar - res.cbar);
        }
    }
    return res;
}

// ---------------------------------------------------------------------------

namespace {

struct FastSegment {
    Trajectory<2> traj; // backward in z from the matching point
    bool landed = false;
    bool reached_floor = false;
};

FastSegment fast_backward(const Params& params, const State<2>& start, double z_start, const ShootConfig& config,
                          const SlowSeries& series)
{
    const double eps = params.eps;
    const double kappa_min = default_kappa_factor * eps;
    const double d0 = config.delta0;
    auto landing = [&params, &series, kappa_min](double, const State<2>& y) {
        const double th = y[0];
        if (!(th > 0.0 && th < 1.0 - kappa_min))
            return inactive;
        const auto h = slow_manifold_eta(th, params, series, kappa_min);
        if (!(h.eta > 0.0))
            return inactive;
        const double proxy = h.last_term / h.eta;
        if (!(proxy < 0.1))
            return inactive;
        const double tol = std::max(1e-3, 10.0 * proxy);
        return y[1] / (h.eta * (1.0 + tol)) - 1.0;
    };
    std::vector<EventSpec<2>> ev{
        {[d0](double, const State<2>& y) { return y[0] - d0; }, true, -1},
        {landing, true, -1},
        {[](double, const State<2>& y) { return y[1]; }, true, -1},
    };
    IntegratorConfig ic = config.integrator;
    ic.abs_tol = 1e-300; // eta decays by many orders of magnitude before landing
    ic.h_init = std::min(ic.h_init, 1e-3);
    FastSegment out;
    out.traj = integrate<2>(zfk_field(params), start, {z_start, z_start - 1e4 / std::max(params.c, 1e-3)}, ic, ev);
    if (out.traj.terminated_by_event) {
        const auto idx = out.traj.event_hits.back().index;
        out.reached_floor = idx == 0;
        out.landed = idx == 1;
        if (idx == 2)
            throw Error(ErrorCode::no_connection, "backward orbit reached eta = 0 before theta = delta0: no heteroclinic connection");
    }
    return out;
}

} // namespace

Trajectory<2> stable_manifold_continuation(const Params& params, const ShootConfig& config)
{
    if (!(params.eps > 0.0))
        throw Error(ErrorCode::domain, "continuation in original coordinates needs eps > 0");
    const auto inner = stable_branch_k2(params, config);
    const auto last = inner.final_state();
    const auto p = from_k2({last[0], last[1]}, params.eps);
    const SlowSeries series(params.c, config.slow_order);
    try {
        return fast_backward(params, {p.theta, p.eta}, params.eps * inner.final_time(), config, series).traj;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::no_connection)
            throw;
        // eta reached 0: re-run without the eta event is unnecessary for
        // plotting; the truncated orbit up to eta = 0 is returned instead.
        const double d0 = config.delta0;
        std::vector<EventSpec<2>> ev{
            {[d0](double, const State<2>& y) { return y[0] - d0; }, true, -1},
            {[](double, const State<2>& y) { return y[1]; }, true, -1},
        };
        IntegratorConfig ic = config.integrator;
        ic.abs_tol = 1e-300;
        const double z0 = params.eps * inner.final_time();
        return integrate<2>(zfk_field(params), State<2>{p.theta, p.eta}, {z0, z0 - 1e4 / std::max(params.c, 1e-3)}, ic,
                            ev);
    }
}

WaveProfile build_profile(double c, double eps, const ShootConfig& config, std::pair<double, double> z_span)
{
    config.validate();
    if (!(eps > 0.0))
        throw Error(ErrorCode::domain, "build_profile requires eps > 0");
    if (!(z_span.first < 0.0 && z_span.second > 0.0))
        throw Error(ErrorCode::configuration, "z window must contain the origin");
    const Params params{c, eps};
    const GapResult g = gap(c, eps, config);
    if (g.gap < -config.root_tol)
        throw Error(ErrorCode::no_connection, "gap(c) = " + std::to_string(g.gap) + " < 0: c is below the minimal speed");

    // Inner piece (K2), mapped to original coordinates.
    const auto inner = stable_branch_k2(params, config);
    const SlowSeries series(c, config.slow_order);
    const auto mstate = inner.final_state();
    const PhasePoint match = from_k2({mstate[0], mstate[1]}, eps);
    const double z_match = eps * inner.final_time();

    // Fast piece, backward from the section. The unstable-side value is used
    // at the section when it matches (strong case), so the orbit departs p- on
    // the strong direction as accurately as the root-find allows.
    const FastSegment fast = fast_backward(params, {match.theta, match.eta}, z_match, config, series);

    WaveProfile prof;
    prof.c = c;
    prof.eps = eps;

    // Slow piece: z(theta) = z_land - int_theta^{theta_land} dtheta / h(theta).
    if (fast.landed) {
        const auto land = fast.traj.final_state();
        const double z_land = fast.traj.final_time();
        const double theta_end = 1e-3;
        const double kappa_min = default_kappa_factor * eps;
        auto h_of = [&](double th) { return slow_manifold_eta(th, params, series, kappa_min).eta; };
        // Just below the landing point z moves by about (theta_land - theta) / h,
        // far below the resolution of theta. Sample z offsets 1, 2, 4, ... there
        // (keeps slow samples inside any finite window) with the two-term
        // expansion z = z_land - s - h' s^2 / 2, then switch to quadrature on
        // a theta grid with steps <= eps / 2, geometric below 0.05.
        const auto hv = slow_manifold_eta(land[0], params, series, kappa_min);
        std::vector<double> grid{land[0]};
        std::vector<double> zs{z_land};
        for (double s = 1.0;; s *= 2.0) {
            const double u = hv.eta * s;
            if (u >= 1e-3 * eps || land[0] - u <= theta_end)
                break;
            grid.push_back(land[0] - u);
            zs.push_back(z_land - s - 0.5 * hv.slope * s * s);
        }
        // Quadrature continues from the last representable offset.
        const std::size_t n_fine = grid.size();
        double th_q = land[0] - hv.eta * std::ldexp(1.0, static_cast<int>(n_fine) - 1);
        double z_q = zs.back();
        if (n_fine == 1)
            th_q = land[0];
        std::vector<double> coarse{th_q};
        while (coarse.back() > theta_end) {
            const double th = coarse.back();
            coarse.push_back(std::max(th < 0.05 ? 0.8 * th : th - 0.5 * eps, theta_end));
        }
        bool overflow = false;
        for (std::size_t i = 1; i < coarse.size(); ++i) {
            const double piece =
                integrate_interval([&](double th) { return 1.0 / h_of(th); }, coarse[i], coarse[i - 1], 0.0, 1e-10).value;
            z_q -= piece;
            if (!std::isfinite(z_q)) {
                overflow = true;
                break;
            }
            grid.push_back(coarse[i]);
            zs.push_back(z_q);
        }
        if (overflow)
            prof.truncated = true;
        // Increasing z, excluding the landing point (taken from the fast piece).
        for (std::size_t i = grid.size(); i-- > 1;) {
            prof.z.push_back(zs[i]);
            prof.theta.push_back(grid[i]);
            prof.eta.push_back(h_of(grid[i]));
            prof.segments.push_back(Segment::slow);
        }
        prof.near_minimal_regime = c <= 1.0 + config.kappa_regime;
    }

    for (std::size_t i = fast.traj.times.size(); i-- > 0;) {
        prof.z.push_back(fast.traj.times[i]);
        prof.theta.push_back(fast.traj.states[i][0]);
        prof.eta.push_back(fast.traj.states[i][1]);
        prof.segments.push_back(Segment::fast);
    }
    // Inner piece in increasing z; its first point (the section) is already present.
    for (std::size_t i = inner.times.size() - 1; i-- > 0;) {
        const auto p = from_k2({inner.states[i][0], inner.states[i][1]}, eps);
        prof.z.push_back(eps * inner.times[i]);
        prof.theta.push_back(p.theta);
        prof.eta.push_back(p.eta);
        prof.segments.push_back(Segment::inner);
    }

    // Phase: theta(0) = 1/2.
    const auto it = std::upper_bound(prof.theta.begin(), prof.theta.end(), 0.5);
    if (it == prof.theta.begin() || it == prof.theta.end())
        throw Error(ErrorCode::domain, "profile does not cross theta = 1/2");
    const std::size_t j = static_cast<std::size_t>(it - prof.theta.begin());
    const double w = (0.5 - prof.theta[j - 1]) / (prof.theta[j] - prof.theta[j - 1]);
    const double z_half = prof.z[j - 1] + w * (prof.z[j] - prof.z[j - 1]);
    for (auto& z : prof.z) z -= z_half;

    // Window.
    WaveProfile out;
    out.c = prof.c;
    out.eps = prof.eps;
    out.near_minimal_regime = prof.near_minimal_regime;
    out.truncated = prof.truncated;
    for (std::size_t i = 0; i < prof.size(); ++i) {
        if (prof.z[i] < z_span.first || prof.z[i] > z_span.second) {
            out.truncated = true;
            continue;
        }
        out.z.push_back(prof.z[i]);
        out.theta.push_back(prof.theta[i]);
        out.eta.push_back(prof.eta[i]);
        out.segments.push_back(prof.segments[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------

DefectReport profile_defect(const WaveProfile& profile, const IntegratorConfig& config)
{
    DefectReport rep;
    const Params params{profile.c, profile.eps};
    auto field = zfk_field(params);
    for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
        if (profile.segments[i] == Segment::slow || profile.segments[i + 1] == Segment::slow)
            continue;
        const double dz = profile.z[i + 1] - profile.z[i];
        if (dz == 0.0)
            continue;
        IntegratorConfig ic = config;
        ic.h_init = std::min(ic.h_init, std::abs(dz));
        ic.h_min = std::min(ic.h_min, ic.h_init);
        const auto tr = integrate<2>(field, State<2>{profile.theta[i], profile.eta[i]}, {profile.z[i], profile.z[i + 1]}, ic);
        const auto& y = tr.final_state();
        rep.max_theta = std::max(rep.max_theta, std::abs(y[0] - profile.theta[i + 1]));
        rep.max_eta = std::max(rep.max_eta, std::abs(y[1] - profile.eta[i + 1]));
    }
    return rep;
}

namespace {

double point_segment_distance(double px, double py, double ax, double ay, double bx, double by)
{
    const double dx = bx - ax, dy = by - ay;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(px - (ax + t * dx), py - (ay + t * dy));
}

} // namespace

HausdorffReport singular_orbit_distance(const WaveProfile& profile, double c)
{
    if (!(c >= 1.0))
        throw Error(ErrorCode::domain, "the singular orbit is defined here for c >= 1");
    if (profile.size() < 2)
        throw Error(ErrorCode::domain, "profile needs at least two samples");
    const double ts = 1.0 - 1.0 / c;
    const std::array<std::array<double, 4>, 3> gamma{{
        {0.0, 0.0, ts, 0.0},
        {ts, 0.0, 1.0, 1.0},
        {1.0, 1.0, 1.0, 0.0},
    }};
    HausdorffReport rep;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& s : gamma) d = std::min(d, point_segment_distance(profile.theta[i], profile.eta[i], s[0], s[1], s[2], s[3]));
        rep.trace_to_singular = std::max(rep.trace_to_singular, d);
    }
    // Gamma -> trace: dense samples of each singular segment against the trace polyline.
    double back = 0.0;
    const int m = 2000;
    for (const auto& s : gamma) {
        for (int k = 0; k <= m; ++k) {
            const double t = static_cast<double>(k) / m;
            const double px = s[0] + t * (s[2] - s[0]);
            const double py = s[1] + t * (s[3] - s[1]);
            double d = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i + 1 < profile.size(); ++i)
                d = std::min(d, point_segment_distance(px, py, profile.theta[i], profile.eta[i], profile.theta[i + 1],
                                                       profile.eta[i + 1]));
            back = std::max(back, d);
        }
    }
    rep.symmetric = std::max(rep.trace_to_singular, back);
    return rep;
}

} // namespace zfk
