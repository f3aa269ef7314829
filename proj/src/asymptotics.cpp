#include "zfk/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "zfk/charts.hpp"
#include "zfk/csv.hpp"
#include "zfk/error.hpp"
#include "zfk/quadrature.hpp"

namespace zfk {

// ---------------------------------------------------------------------------
// BivarPoly

BivarPoly BivarPoly::monomial(int deg_theta, int deg_eps, double coeff)
{
    BivarPoly p;
    p.add_term(deg_theta, deg_eps, coeff);
    return p;
}

void BivarPoly::add_term(int i, int j, double v)
{
    if (v == 0.0)
        return;
    auto [it, inserted] = terms_.try_emplace({i, j}, v);
    if (!inserted) {
        it->second += v;
        if (it->second == 0.0)
            terms_.erase(it);
    }
}

double BivarPoly::coefficient(int deg_theta, int deg_eps) const
{
    auto it = terms_.find({deg_theta, deg_eps});
    return it == terms_.end() ? 0.0 : it->second;
}

BivarPoly BivarPoly::operator+(const BivarPoly& o) const
{
    BivarPoly r = *this;
    for (const auto& [k, v] : o.terms_) r.add_term(k.first, k.second, v);
    return r;
}

BivarPoly BivarPoly::operator-(const BivarPoly& o) const { return *this + o * -1.0; }

BivarPoly BivarPoly::operator*(const BivarPoly& o) const
{
    BivarPoly r;
    for (const auto& [a, va] : terms_)
        for (const auto& [b, vb] : o.terms_) r.add_term(a.first + b.first, a.second + b.second, va * vb);
    return r;
}

BivarPoly BivarPoly::operator*(double s) const
{
    BivarPoly r;
    for (const auto& [k, v] : terms_) r.add_term(k.first, k.second, v * s);
    return r;
}

BivarPoly BivarPoly::d_theta() const
{
    BivarPoly r;
    for (const auto& [k, v] : terms_)
        if (k.first > 0)
            r.add_term(k.first - 1, k.second, v * k.first);
    return r;
}

BivarPoly BivarPoly::shift_eps(int k) const
{
    BivarPoly r;
    for (const auto& [key, v] : terms_) r.add_term(key.first, key.second + k, v);
    return r;
}

double BivarPoly::operator()(double theta, double eps) const
{
    // Horner in theta for each eps power would need regrouping; the term
    // counts here are small, so evaluate directly.
    double s = 0.0;
    for (const auto& [k, v] : terms_) s += v * std::pow(theta, k.first) * std::pow(eps, k.second);
    return s;
}

double BivarPoly::d_theta_at(double theta, double eps) const
{
    double s = 0.0;
    for (const auto& [k, v] : terms_)
        if (k.first > 0)
            s += v * k.first * std::pow(theta, k.first - 1) * std::pow(eps, k.second);
    return s;
}

BivarPoly BivarPoly::divide_by_theta_one_minus_theta() const
{
    // Group by eps power: p_j(theta) = theta (1 - theta) q_j(theta).
    std::map<int, std::map<int, double>> by_eps;
    for (const auto& [k, v] : terms_) by_eps[k.second][k.first] = v;
    BivarPoly q;
    for (const auto& [j, coeffs] : by_eps) {
        if (coeffs.count(0) && coeffs.at(0) != 0.0)
            throw Error(ErrorCode::domain, "polynomial does not vanish at theta = 0");
        const int deg = coeffs.rbegin()->first;
        // a_i for p_j / theta, then (1 - theta) q = a  =>  q_i = sum_{m <= i} a_m.
        double running = 0.0;
        double scale = 0.0;
        for (int i = 0; i < deg; ++i) {
            auto it = coeffs.find(i + 1);
            const double a = it == coeffs.end() ? 0.0 : it->second;
            scale = std::max(scale, std::abs(a));
            running += a;
            if (i < deg - 1)
                q.add_term(i, j, running);
        }
        if (std::abs(running) > 1e-12 * scale)
            throw Error(ErrorCode::domain, "polynomial does not vanish at theta = 1");
    }
    return q;
}

std::string BivarPoly::to_string() const
{
    if (terms_.empty())
        return "0";
    // Order by total degree, then theta degree.
    std::vector<std::pair<Key, double>> items(terms_.begin(), terms_.end());
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        const int da = a.first.first + a.first.second, db = b.first.first + b.first.second;
        if (a.first.second != b.first.second)
            return a.first.second < b.first.second;
        return da < db;
    });
    std::string out;
    bool first = true;
    for (const auto& [k, v] : items) {
        const double mag = std::abs(v);
        if (first)
            out += v < 0 ? "-" : "";
        else
            out += v < 0 ? " - " : " + ";
        first = false;
        std::string factors;
        auto push = [&factors](const std::string& f) {
            if (!factors.empty())
                factors += "*";
            factors += f;
        };
        if (k.first == 1) push("theta");
        if (k.first > 1) push("theta^" + std::to_string(k.first));
        if (k.second == 1) push("eps");
        if (k.second > 1) push("eps^" + std::to_string(k.second));
        if (factors.empty())
            out += format_double(mag);
        else if (mag == 1.0)
            out += factors;
        else
            out += format_double(mag) + "*" + factors;
    }
    return out;
}

// ---------------------------------------------------------------------------
// SlowSeries

SlowSeries::SlowSeries(double c, int K) : c_(c)
{
    if (!(c > 0.0))
        throw Error(ErrorCode::domain, "slow series requires c > 0");
    if (K < 1)
        throw Error(ErrorCode::domain, "slow series order must be >= 1");
    numerators_.reserve(static_cast<std::size_t>(K));
    numerators_.push_back(BivarPoly::monomial(1, 0) - BivarPoly::monomial(2, 0));
    for (int k = 2; k <= K; ++k) {
        BivarPoly sum;
        for (int j = 1; j < k; ++j) {
            const BivarPoly& Pj = numerators_[static_cast<std::size_t>(j - 1)];
            const BivarPoly lead = Pj.d_theta().shift_eps(1) + Pj * static_cast<double>(j);
            sum = sum + lead * numerators_[static_cast<std::size_t>(k - j - 1)];
        }
        numerators_.push_back(std::move(sum));
    }
}

double SlowSeries::c_power(int k) const { return std::pow(c_, 2 * k - 1); }

BivarPoly SlowSeries::term(int k) const { return numerator(k) * (1.0 / c_power(k)); }

std::string SlowSeries::format_term(int k) const
{
    const BivarPoly q = numerator(k).divide_by_theta_one_minus_theta();
    std::string s = "F_" + std::to_string(k) + " = theta*(1-theta)";
    if (!(q == BivarPoly::monomial(0, 0)))
        s += "*(" + q.to_string() + ")";
    const double den = c_power(k);
    if (den != 1.0)
        s += "/" + format_double(den);
    return s;
}

SlowSeries build_series(double c, int K) { return SlowSeries(c, K); }

double recursion_residual(const SlowSeries& series, int k)
{
    const double c = series.c();
    BivarPoly rhs;
    for (int j = 1; j < k; ++j) {
        const BivarPoly Fj = series.term(j);
        rhs = rhs + (Fj.d_theta().shift_eps(1) + Fj * static_cast<double>(j)) * series.term(k - j);
    }
    const BivarPoly lhs = series.term(k) * c;
    double scale = 0.0;
    for (const auto& [key, v] : lhs.terms()) scale = std::max(scale, std::abs(v));
    for (const auto& [key, v] : rhs.terms()) scale = std::max(scale, std::abs(v));
    if (k == 1) {
        // F_1 = theta (1 - theta) / c.
        const BivarPoly ref = (BivarPoly::monomial(1, 0) - BivarPoly::monomial(2, 0));
        rhs = ref;
    }
    double worst = 0.0;
    for (const auto& [key, v] : (lhs - rhs).terms()) worst = std::max(worst, std::abs(v));
    return scale > 0.0 ? worst / scale : worst;
}

// ---------------------------------------------------------------------------
// Slow manifold

namespace {

void check_slow_domain(double theta, double eps, double kappa_min)
{
    if (!(eps > 0.0))
        throw Error(ErrorCode::domain, "slow manifold requires eps > 0");
    if (!(theta >= 0.0 && theta <= 1.0 - kappa_min))
        throw Error(ErrorCode::domain, "theta = " + std::to_string(theta) + " outside the slow-manifold range [0, 1 - kappa_min]");
}

// log of 2^{-k} eps^{1-3k} e^{-k(1-theta)/eps}
double log_term_factor(double theta, double eps, int k)
{
    return -k * std::log(2.0) + (1.0 - 3.0 * k) * std::log(eps) - k * (1.0 - theta) / eps;
}

} // namespace

double series_term(double theta, const Params& params, const SlowSeries& series, int k)
{
    const double F = series.numerator(k)(theta, params.eps) / series.c_power(k);
    return F * std::exp(log_term_factor(theta, params.eps, k));
}

SlowManifoldValue slow_manifold_eta(double theta, const Params& params, const SlowSeries& series, double kappa_min)
{
    const double eps = params.eps;
    if (kappa_min < 0.0)
        kappa_min = default_kappa_factor * eps;
    check_slow_domain(theta, eps, kappa_min);
    if (std::abs(series.c() - params.c) > 1e-15 * std::abs(params.c))
        throw Error(ErrorCode::configuration, "slow series was built for a different c");
    SlowManifoldValue out;
    for (int k = 1; k <= series.order(); ++k) {
        const double w = std::exp(log_term_factor(theta, eps, k));
        const double den = series.c_power(k);
        const BivarPoly& P = series.numerator(k);
        const double F = P(theta, eps) / den;
        const double dF = P.d_theta_at(theta, eps) / den;
        const double t = F * w;
        out.eta += t;
        out.slope += (dF + F * k / eps) * w;
        out.last_term = std::abs(t);
    }
    return out;
}

SlowManifoldValue slow_manifold_eta(double theta, const Params& params, int K, double kappa_min)
{
    return slow_manifold_eta(theta, params, SlowSeries(params.c, K), kappa_min);
}

double slow_flow(double theta, const Params& params, int K) { return slow_manifold_eta(theta, params, K).eta; }

// ---------------------------------------------------------------------------
// Quadratures for the speed expansion

namespace {

// 1 - h^s(x) for x <= 0 without cancellation at either end.
double one_minus_hs(double x)
{
    if (x > -1.0)
        return 1.0 - std::sqrt(separatrix_radicand(x));
    const double a = (1.0 - x) * std::exp(x);
    return a / (1.0 + std::sqrt(1.0 - a));
}

// int_L^inf u^2 e^-u du
double gamma3_tail(double L) { return (L * L + 2.0 * L + 2.0) * std::exp(-L); }

} // namespace

double hs_tail_integral(double tolerance)
{
    if (!(tolerance > 0.0))
        throw Error(ErrorCode::configuration, "tolerance must be positive");
    // Tail: int_{-inf}^{-L} (1 - h^s) <= (L + 2) e^-L / (1 + sqrt(1 - (1 + L) e^-L)).
    auto tail = [](double L) { return (L + 2.0) * std::exp(-L) / (1.0 + std::sqrt(1.0 - (1.0 + L) * std::exp(-L))); };
    double L = 2.0;
    while (tail(L) >= 0.5 * tolerance) L += 1.0;
    const double inner = integrate_interval(one_minus_hs, -1.0, 0.0, 0.25 * tolerance).value;
    const double outer = integrate_interval(one_minus_hs, -L, -1.0, 0.25 * tolerance).value;
    return inner + outer;
}

double cbar_linear(double eps)
{
    if (eps < 0.0)
        throw Error(ErrorCode::domain, "cbar_linear requires eps >= 0");
    static const double I = hs_tail_integral(1e-13);
    return 1.0 + (I - 1.0) * eps;
}

double b_eps_derivative(double delta, double tolerance)
{
    if (!(delta > 0.0 && delta <= 1.0))
        throw Error(ErrorCode::domain, "delta must lie in (0, 1]");
    if (!(tolerance > 0.0))
        throw Error(ErrorCode::configuration, "tolerance must be positive");
    const double U0 = 1.0 / delta;
    const double f_delta = f1(1.0, delta);
    // f1(1, 1/u) = h^s(-u) = sqrt(1 - (1 + u) e^-u).
    auto f1_inv = [](double u) { return std::sqrt(separatrix_radicand(-u)); };

    // (1/2) int_0^delta s^-4 e^{-1/s} / f1(1, s) ds = (1/2) int_{1/delta}^inf u^2 e^-u / f1(1, 1/u) du.
    double U = U0;
    while (0.5 * gamma3_tail(U) / f_delta >= 0.25 * tolerance) U += 1.0;
    const double flat = 0.5 * integrate_interval([&](double u) { return u * u * std::exp(-u) / f1_inv(u); }, U0, U,
                                                 0.25 * tolerance)
                                  .value;

    // int_delta^inf s^-2 f1(1, s) ds = int_0^{1/delta} f1(1, 1/u) du.
    const double outer = integrate_interval(f1_inv, 0.0, U0, 0.25 * tolerance).value;

    return 1.0 + (-f_delta / delta - flat + outer);
}

double bifurcation_residual_order1(double c, double eps, double delta)
{
    if (!(c > 0.5 && c < 1.5))
        throw Error(ErrorCode::domain, "bifurcation residual requires c in (0.5, 1.5)");
    if (!(eps >= 0.0 && eps <= 0.1))
        throw Error(ErrorCode::domain, "bifurcation residual requires eps in [0, 0.1]");
    if (!(delta > 0.0 && delta <= 1.0))
        throw Error(ErrorCode::domain, "delta must lie in (0, 1]");
    if (eps == 0.0)
        return 0.5 * (c * c - 1.0);
    const double X = c + eps * transition_integral(c, c, delta);
    const double U0 = 1.0 / delta;
    const double outer = integrate_interval([](double u) { return std::sqrt(separatrix_radicand(-u)); }, 0.0, U0, 1e-13).value;
    const double A = c * outer + 0.5 * (2.0 - gamma3_tail(U0));
    return 0.5 * (X * X - 1.0) - eps * (c / delta * f1(X, delta) - A);
}

} // namespace zfk
