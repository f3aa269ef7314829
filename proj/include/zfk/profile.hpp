#pragma once

#include <string_view>
#include <vector>

namespace zfk {

/// Which piece of the singular orbit a profile sample belongs to.
enum class Segment { slow, fast, inner };

constexpr std::string_view to_string(Segment s) noexcept
{
    switch (s) {
    case Segment::slow: return "slow";
    case Segment::fast: return "fast";
    case Segment::inner: return "inner";
    }
    return "?";
}

/// A sampled heteroclinic solution (z, theta(z), eta(z)).
struct WaveProfile {
    std::vector<double> z;
    std::vector<double> theta;
    std::vector<double> eta;
    std::vector<Segment> segments;
    double c = 0.0;
    double eps = 0.0;
    /// Slow-segment samples outside the requested z window were dropped.
    bool truncated = false;
    /// c lies in (cbar, 1 + kappa], where the singular-limit picture is not established.
    bool near_minimal_regime = false;

    std::size_t size() const noexcept { return z.size(); }
};

} // namespace zfk
