#include "rmode/prng.hpp"

#include <cmath>
#include <numbers>

namespace rmode {

std::pair<double, double> box_muller(std::uint64_t a, std::uint64_t b) noexcept {
    const double r = std::sqrt(-2.0 * std::log(unit_open_closed(a)));
    const double angle = 2.0 * std::numbers::pi * unit_closed_open(b);
    return {r * std::cos(angle), r * std::sin(angle)};
}

}  // namespace rmode
