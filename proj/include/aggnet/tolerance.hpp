#pragma once

#include <algorithm>
#include <cmath>

namespace aggnet {

// Float comparison policy, used by every identity assertion in the library:
// relative tolerance with an absolute floor.
constexpr double kRelTol = 1e-8;
constexpr double kAbsFloor = 1e-12;

inline bool near(double a, double b, double rel = kRelTol, double floor = kAbsFloor) {
    double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= std::max(rel * scale, floor);
}

} // namespace aggnet
