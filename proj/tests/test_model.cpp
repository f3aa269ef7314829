#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "zfk/error.hpp"
#include "zfk/model.hpp"

using namespace zfk;

// Reference values come from an independent 40-digit mpmath evaluation
// (tests/oracles/oracle_values.py).

TEST_CASE("reaction rate vanishes at both equilibria")
{
    CHECK(reaction_omega(1.0, 0.05) == 0.0);
    CHECK(reaction_omega(0.0, 0.05) == 0.0);
}

TEST_CASE("reaction rate matches high-precision value")
{
    CHECK(reaction_omega(0.5, 0.1) == doctest::Approx(0.084224337488568338708).epsilon(1e-14));
}

TEST_CASE("reaction rate domain guards")
{
    CHECK_THROWS_AS(reaction_omega(0.5, 0.0), Error);
    CHECK_THROWS_AS(reaction_omega(-1e-3, 0.1), Error);
    CHECK_THROWS_AS(reaction_omega(1.0 + 0.1 * 51.0, 0.1), Error);
    CHECK_NOTHROW(reaction_omega(1.0 + 0.1 * 49.0, 0.1));
    try {
        reaction_omega(2.0, 0.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::domain);
    }
}

TEST_CASE("reaction rate is nonnegative and exponentially small away from theta = 1")
{
    for (double eps : {0.1, 0.05, 0.01, 0.002})
        for (int i = 0; i <= 200; ++i) {
            const double w = reaction_omega(i / 200.0, eps);
            CHECK(w >= 0.0);
            CHECK(std::isfinite(w));
        }
    const double a = reaction_omega(0.5, 0.1);
    const double b = reaction_omega(0.5, 0.05);
    const double c = reaction_omega(0.5, 0.02);
    // Strictly decreasing, at exactly the rate (eps_a/eps_b)^2 e^{-(1-theta)(1/eps_b - 1/eps_a)}.
    CHECK(b < a);
    CHECK(c < 1e-3 * b);
    CHECK(b / a == doctest::Approx(4.0 * std::exp(-5.0)).epsilon(1e-12));
    CHECK(c / b == doctest::Approx(6.25 * std::exp(-15.0)).epsilon(1e-12));
}

TEST_CASE("vector field at equilibria and a generic point")
{
    const Params p{1.5, 0.1};
    auto v0 = vector_field({0.0, 0.0}, p);
    CHECK(v0[0] == 0.0);
    CHECK(v0[1] == 0.0);
    auto v1 = vector_field({1.0, 0.0}, p);
    CHECK(v1[0] == 0.0);
    CHECK(v1[1] == 0.0);
    auto v = vector_field({0.5, 0.2}, p);
    CHECK(v[0] == 0.2);
    CHECK(v[1] == doctest::Approx(0.21577566251143166129).epsilon(1e-14));
}

TEST_CASE("normalized field: eps = 0 limit")
{
    auto a = normalized_vector_field({1.5, 0.7}, {1.0, 0.0});
    CHECK(a[0] == 0.0);
    CHECK(a[1] == doctest::Approx(0.75));
    auto b = normalized_vector_field({0.5, 0.3}, {1.0, 0.0});
    CHECK(b[0] == 0.0);
    CHECK(b[1] == 0.0);
    try {
        normalized_vector_field({1.0, 0.3}, {1.0, 0.0});
        FAIL("expected singular-limit error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::singular_limit);
    }
}

TEST_CASE("normalized field: high-precision value")
{
    auto n = normalized_vector_field({0.5, 0.3}, {1.0, 0.1});
    CHECK(n[0] == doctest::Approx(0.0029899270151204921559).epsilon(1e-13));
    CHECK(n[1] == doctest::Approx(0.002150511608494838484).epsilon(1e-13));
}

TEST_CASE("normalized field is positively parallel to the field")
{
    for (double eps : {0.1, 0.05, 0.01})
        for (double c : {0.5, 1.0, 2.0})
            for (double th : {0.05, 0.3, 0.9, 0.99, 1.0, 1.02})
                for (double eta : {-0.3, 0.2, 1.1}) {
                    const PhasePoint pt{th, eta};
                    const Params pr{c, eps};
                    auto f = vector_field(pt, pr);
                    auto g = normalized_vector_field(pt, pr);
                    const double cross = f[0] * g[1] - f[1] * g[0];
                    const double scale = std::hypot(f[0], f[1]) * std::hypot(g[0], g[1]);
                    CHECK(std::abs(cross) <= 1e-12 * scale + 1e-300);
                    CHECK(f[0] * g[0] + f[1] * g[1] > 0.0);
                }
}

TEST_CASE("linearisation at p-: underflowed determinant")
{
    auto lin = linearize_pminus({1.0, 0.01});
    CHECK(lin.lambda_strong == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(lin.lambda_weak == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(lin.lambda_weak < 1e-39);
    CHECK(lin.v_strong[0] == 1.0);
    CHECK(lin.v_weak[0] == 1.0);
}

TEST_CASE("linearisation at p-: trace and determinant identities")
{
    for (double eps : {0.2, 0.1, 0.05})
        for (double c : {0.8, 1.0, 2.0}) {
            auto lin = linearize_pminus({c, eps});
            const double det = std::exp(-1.0 / eps) / (2.0 * eps * eps);
            CHECK(lin.lambda_strong + lin.lambda_weak == doctest::Approx(c).epsilon(1e-12));
            CHECK(lin.lambda_strong * lin.lambda_weak == doctest::Approx(det).epsilon(1e-12));
            CHECK(lin.lambda_strong >= lin.lambda_weak);
            // (1, lambda) is an eigenvector of [[0,1],[-det,c]].
            for (double lam : {lin.lambda_strong, lin.lambda_weak})
                CHECK(-det + c * lam == doctest::Approx(lam * lam).epsilon(1e-12));
        }
    auto lin = linearize_pminus({2.0, 0.02});
    CHECK(lin.v_strong[1] / lin.v_strong[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("linearisation at p-: node condition")
{
    CHECK_THROWS_AS(linearize_pminus({0.1, 1.0}), Error);
    CHECK_THROWS_AS(linearize_pminus({-1.0, 0.1}), Error);
    CHECK_THROWS_AS(linearize_pminus({1.0, 0.0}), Error);
}

TEST_CASE("symmetry map")
{
    WaveProfile fixed;
    fixed.z = {-1.0, 0.0, 1.0};
    fixed.theta = {0.0, 0.0, 0.0};
    fixed.eta = {0.0, 0.0, 0.0};
    fixed.segments = {Segment::fast, Segment::fast, Segment::fast};
    fixed.c = 1.5;
    fixed.eps = 0.1;
    auto s = apply_symmetry(fixed);
    CHECK(s.c == -1.5);
    CHECK(s.theta == fixed.theta);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.z[i] == -fixed.z[2 - i]);

    WaveProfile w;
    w.z = {-2.0, -0.5, 0.25, 3.0};
    w.theta = {0.01, 0.2, 0.5, 0.99};
    w.eta = {0.01, 0.19, 0.4, 0.001};
    w.segments = {Segment::slow, Segment::fast, Segment::fast, Segment::inner};
    w.c = 1.2;
    w.eps = 0.05;
    auto once = apply_symmetry(w);
    CHECK(once.segments.front() == Segment::inner);
    for (std::size_t i = 1; i < once.size(); ++i) CHECK(once.z[i] > once.z[i - 1]);
    auto twice = apply_symmetry(once);
    CHECK(twice.z == w.z);
    CHECK(twice.theta == w.theta);
    CHECK(twice.eta == w.eta);
    CHECK(twice.segments == w.segments);
    CHECK(twice.c == w.c);
}
