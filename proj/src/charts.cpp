#include "zfk/charts.hpp"

#include <cmath>
#include <string>

#include "zfk/error.hpp"
#include "zfk/quadrature.hpp"

namespace zfk {

namespace {

void require_positive_eps(double eps, const char* where)
{
    if (!(eps > 0.0))
        throw Error(ErrorCode::domain, std::string(where) + " requires eps > 0");
}

void guard_theta2(double theta2)
{
    if (!(theta2 <= k2_overflow_guard))
        throw Error(ErrorCode::overflow_guard, "theta2 = " + std::to_string(theta2) + " exceeds the overflow guard");
}

// eps1^-2 e^{-1/eps1}, assembled in log space.
double flat_factor(double eps1)
{
    if (eps1 < 0.0)
        throw Error(ErrorCode::domain, "eps1 must be nonnegative");
    if (eps1 == 0.0)
        return 0.0;
    return std::exp(-1.0 / eps1 - 2.0 * std::log(eps1));
}

} // namespace

K2Point to_k2(const PhasePoint& p, double eps)
{
    require_positive_eps(eps, "to_k2");
    return {(p.theta - 1.0) / eps, p.eta};
}

PhasePoint from_k2(const K2Point& q, double eps)
{
    require_positive_eps(eps, "from_k2");
    return {1.0 + eps * q.theta2, q.eta};
}

Vec2 k2_vector_field(const K2Point& q, const Params& params)
{
    guard_theta2(q.theta2);
    const double x = q.theta2;
    const double ex = std::exp(x);
    return {q.eta, 0.5 * x * ex + params.eps * (params.c * q.eta + 0.5 * x * x * ex)};
}

double k2_stable_eigenvalue(const Params& params)
{
    const double a = params.eps * params.c;
    return 0.5 * (a - std::sqrt(a * a + 2.0));
}

double hamiltonian(const K2Point& q)
{
    guard_theta2(q.theta2);
    return 0.5 * q.eta * q.eta - 0.5 * (q.theta2 - 1.0) * std::exp(q.theta2);
}

double separatrix_radicand(double x)
{
    guard_theta2(x);
    if (std::abs(x) < 0.1) {
        // sum_{n>=2} x^n (n - 1) / n!
        double term = x * x / 2.0; // x^n / n! at n = 2
        double sum = 0.0;
        for (int n = 2; n < 24; ++n) {
            sum += (n - 1) * term;
            term *= x / (n + 1);
        }
        return sum;
    }
    return 1.0 + (x - 1.0) * std::exp(x);
}

double separatrix_hs(double theta2)
{
    double r = separatrix_radicand(theta2);
    if (r < -1e-14)
        throw Error(ErrorCode::radicand_negative, "separatrix radicand is negative");
    r = std::max(r, 0.0);
    const double s = theta2 > 0.0 ? 1.0 : (theta2 < 0.0 ? -1.0 : 0.0);
    return -s * std::sqrt(r);
}

double separatrix_hu(double theta2) { return -separatrix_hs(theta2); }

std::pair<double, double> blowup_map(double r, double theta_bar, double eps_bar)
{
    if (r < 0.0)
        throw Error(ErrorCode::domain, "blow-up radius must be nonnegative");
    if (eps_bar < 0.0 || std::abs(theta_bar * theta_bar + eps_bar * eps_bar - 1.0) > 1e-12)
        throw Error(ErrorCode::domain, "blow-up direction must lie on the upper unit half-circle");
    return {1.0 + r * theta_bar, r * eps_bar};
}

std::pair<double, double> kappa21(double theta2, double eps)
{
    if (!(theta2 < 0.0))
        throw Error(ErrorCode::domain, "K2 -> K1 change requires theta2 < 0");
    if (eps < 0.0)
        throw Error(ErrorCode::domain, "K2 -> K1 change requires eps >= 0");
    return {-eps * theta2, -1.0 / theta2};
}

std::pair<double, double> kappa12(double r1, double eps1)
{
    if (!(eps1 > 0.0))
        throw Error(ErrorCode::domain, "K1 -> K2 change requires eps1 > 0");
    if (r1 < 0.0)
        throw Error(ErrorCode::domain, "K1 -> K2 change requires r1 >= 0");
    return {-1.0 / eps1, r1 * eps1};
}

Vec3 k1_vector_field(const K1Point& p, const Params& params)
{
    if (p.r1 < 0.0)
        throw Error(ErrorCode::domain, "r1 must be nonnegative");
    const double flat = 0.5 * flat_factor(p.eps1) * (1.0 - p.r1);
    return {-p.r1 * p.eta, params.c * p.r1 * p.eta - flat, p.eps1 * p.eta};
}

Vec3 k1_vector_field_divided(const K1Point& p, const Params& params)
{
    if (!(std::abs(p.eta) > 1e-12))
        throw Error(ErrorCode::denominator_zero, "divided K1 field needs eta bounded away from 0");
    if (p.r1 < 0.0)
        throw Error(ErrorCode::domain, "r1 must be nonnegative");
    const double flat = 0.5 * flat_factor(p.eps1) * (1.0 - p.r1);
    return {-p.r1, params.c * p.r1 - flat / p.eta, p.eps1};
}

double k1_flat_offset(double eps1)
{
    if (eps1 < 0.0)
        throw Error(ErrorCode::domain, "eps1 must be nonnegative");
    if (eps1 == 0.0)
        return 0.0;
    return std::exp(std::log1p(eps1) - std::log(eps1) - 1.0 / eps1);
}

double y1_coordinate(const K1Point& p, double c)
{
    const double a = p.eta + c * p.r1;
    return std::sqrt(a * a + k1_flat_offset(p.eps1));
}

double f1(double y1, double eps1)
{
    const double rad = y1 * y1 - k1_flat_offset(eps1);
    if (rad < 0.0 || !(y1 > 0.0))
        throw Error(ErrorCode::radicand_negative, "f1 radicand is negative (y1 below the admissible minimum)");
    return std::sqrt(rad);
}

double F1_chart(double r1, double y1, double eps1, double c)
{
    const double f = f1(y1, eps1);
    const double den = f - c * r1;
    if (den == 0.0)
        throw Error(ErrorCode::denominator_zero, "F1: f1 - c r1 vanishes");
    return 0.5 / y1 * flat_factor(eps1) * (f - c) / den;
}

double transition_integral(double y1, double c, double delta, double tolerance)
{
    if (!(delta > 0.0 && delta <= 1.0))
        throw Error(ErrorCode::domain, "delta must lie in (0, 1]");
    // s = 1/u:  J = (1 / 2 y1) int_{1/delta}^inf u^2 e^-u (1 - c / f1(y1, 1/u)) du.
    const double u0 = 1.0 / delta;
    const double f_min = f1(y1, delta); // f1(y1, 1/u) increases with u
    const double amp = 0.5 / y1 * (1.0 + c / f_min);
    double U = u0;
    while (amp * (U * U + 2.0 * U + 2.0) * std::exp(-U) >= 0.5 * tolerance) U += 1.0;
    auto integrand = [&](double u) { return u * u * std::exp(-u) * (1.0 - c / f1(y1, 1.0 / u)); };
    const auto q = integrate_interval(integrand, u0, U, 0.5 * tolerance * y1 * 2.0);
    return 0.5 / y1 * q.value;
}

double transition_map_leading(double y1, double eps1, double c, const TransitionOptions& opt)
{
    if (!(y1 > 0.0))
        throw Error(ErrorCode::domain, "y1 must be positive");
    if (eps1 < 0.0 || eps1 > opt.delta)
        throw Error(ErrorCode::domain, "entry eps1 must lie in [0, delta]");
    if (eps1 == 0.0)
        return y1;
    return y1 + eps1 * opt.rho * transition_integral(y1, c, opt.delta, opt.tolerance);
}

double transition_exit_r1(double eps1, const TransitionOptions& opt) { return opt.rho / opt.delta * eps1; }

double transition_map_numeric(double y1, double eps1, double c, const TransitionOptions& opt,
                              const IntegratorConfig& config)
{
    if (!(eps1 > 0.0 && eps1 <= opt.delta))
        throw Error(ErrorCode::domain, "entry eps1 must lie in (0, delta]");
    const Params params{c, opt.rho * eps1};
    const State<3> y0{opt.rho, f1(y1, eps1) - c * opt.rho, eps1};
    auto field = [&params](double, const State<3>& s) {
        return k1_vector_field_divided({s[0], s[1], s[2]}, params);
    };
    // eps1' = eps1 in the divided time, so the exit section is reached at t = ln(delta / eps1).
    const double t_exit = std::log(opt.delta / eps1);
    if (t_exit == 0.0)
        return y1_coordinate({y0[0], y0[1], y0[2]}, c);
    const auto tr = integrate<3>(field, y0, {0.0, t_exit}, config);
    const auto& s = tr.final_state();
    return y1_coordinate({s[0], s[1], opt.delta}, c);
}

} // namespace zfk
