#pragma once

// Slow-manifold series and the quadratures behind the minimal-speed expansion
//   cbar(eps) = 1 + (I - 1) eps + O(eps^2),   I = int_{-inf}^0 (1 - h^s(x)) dx.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "zfk/model.hpp"

namespace zfk {

/// Finitely supported polynomial in (theta, eps); keys are (deg_theta, deg_eps).
class BivarPoly {
public:
    using Key = std::pair<int, int>;

    BivarPoly() = default;
    static BivarPoly monomial(int deg_theta, int deg_eps, double coeff = 1.0);

    double coefficient(int deg_theta, int deg_eps) const;
    const std::map<Key, double>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    BivarPoly operator+(const BivarPoly& o) const;
    BivarPoly operator-(const BivarPoly& o) const;
    BivarPoly operator*(const BivarPoly& o) const;
    BivarPoly operator*(double s) const;
    bool operator==(const BivarPoly& o) const = default;

    BivarPoly d_theta() const;
    /// Multiply by eps^k.
    BivarPoly shift_eps(int k) const;
    double operator()(double theta, double eps) const;
    /// Partial derivative in theta, evaluated.
    double d_theta_at(double theta, double eps) const;

    /// Quotient by theta (1 - theta); throws if the division is not exact.
    BivarPoly divide_by_theta_one_minus_theta() const;

    /// Human-readable form, e.g. "theta - theta^2 + eps - 2*theta*eps".
    std::string to_string() const;

private:
    void add_term(int i, int j, double v);
    std::map<Key, double> terms_;
};

/// F_k = P_k(theta, eps) / c^(2k-1), with P_1 = theta - theta^2 and
/// P_k = sum_{j<k} (eps dP_j/dtheta + j P_j) P_{k-j}.
class SlowSeries {
public:
    SlowSeries(double c, int K);

    double c() const noexcept { return c_; }
    int order() const noexcept { return static_cast<int>(numerators_.size()); }
    /// Numerator P_k (k is 1-based); independent of c.
    const BivarPoly& numerator(int k) const { return numerators_.at(static_cast<std::size_t>(k - 1)); }
    /// F_k as a polynomial with c absorbed into the coefficients.
    BivarPoly term(int k) const;
    double c_power(int k) const;

    /// One line per term, factored as theta*(1-theta)*Q / c^(2k-1).
    std::string format_term(int k) const;

private:
    double c_;
    std::vector<BivarPoly> numerators_;
};

SlowSeries build_series(double c, int K);

/// Largest coefficient of c F_k - sum_j (eps dF_j + j F_j) F_{k-j}, relative
/// to the largest coefficient involved.
double recursion_residual(const SlowSeries& series, int k);

struct SlowManifoldValue {
    double eta = 0.0;
    /// d eta / d theta along the truncated graph.
    double slope = 0.0;
    /// |last retained term|, the truncation-error proxy.
    double last_term = 0.0;
};

/// Default distance below theta = 1 where the series is cut off: 2 eps.
inline constexpr double default_kappa_factor = 2.0;

SlowManifoldValue slow_manifold_eta(double theta, const Params& params, const SlowSeries& series,
                                    double kappa_min = -1.0);
SlowManifoldValue slow_manifold_eta(double theta, const Params& params, int K = 3, double kappa_min = -1.0);

/// magnitude of the k-th series term (without summing).
double series_term(double theta, const Params& params, const SlowSeries& series, int k);

/// theta' on S_eps.
double slow_flow(double theta, const Params& params, int K = 3);

/// I = int_{-inf}^0 (1 - h^s(x)) dx.
double hs_tail_integral(double tolerance = 1e-12);

/// 1 + (I - 1) eps, with I computed once and cached.
double cbar_linear(double eps);

/// Delta-independent derivative of the reduced bifurcation function in eps
/// at (c, eps) = (1, 0); equals 1 - I.
double b_eps_derivative(double delta, double tolerance = 1e-12);

/// First-order bifurcation function B(X(c, eps), c, eps); its root in c
/// approximates cbar(eps) to O(eps^2).
double bifurcation_residual_order1(double c, double eps, double delta = 0.5);

} // namespace zfk
