#include "buresnum/eigenparam.hpp"
#include "buresnum/common.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace buresnum {

void angles_to_eigenvalues(std::span<const double> angles, std::span<double> d) {
    const std::size_t m = angles.size();
    if (d.size() != m + 1)
        throw std::invalid_argument("angles_to_eigenvalues: d.size() must be angles.size()+1");
    double p = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
        double c = std::cos(0.5 * angles[k]);
        double s = std::sin(0.5 * angles[k]);
        d[k] = c * c * p;
        p *= s * s;
    }
    d[m] = p;
}

double angle_jacobian(std::span<const double> angles) {
    const std::size_t m = angles.size();
    double j = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
        double s = std::sin(0.5 * angles[k]);
        // exponent 2*(n-1-k) with k 1-based; here k is 0-based: 2*(m-1-k)
        j *= 0.5 * std::sin(angles[k]) * std::pow(s, 2.0 * static_cast<double>(m - 1 - k));
    }
    return j;
}

double reduced_weight(std::span<const double> angles) {
    const std::size_t m = angles.size();
    double w = 1.0;
    for (std::size_t k = 0; k + 1 < m; ++k)
        w *= std::pow(std::sin(0.5 * angles[k]), static_cast<double>(m - 1 - k));
    return w;
}

double upper_bound_next(double angle) {
    return 2.0 * std::atan2(1.0, std::cos(0.5 * angle));
}

std::pair<double, double> ordered_region_bounds(int level, std::span<const double> outer) {
    if (level == 0) return {0.0, 0.5 * kPi};
    return {0.0, upper_bound_next(outer[static_cast<std::size_t>(level) - 1])};
}

void levels_to_angles(std::span<const double> coords, std::span<double> angles) {
    const std::size_t m = coords.size();
    if (angles.size() != m)
        throw std::invalid_argument("levels_to_angles: size mismatch");
    for (std::size_t l = 0; l < m; ++l) angles[m - 1 - l] = coords[l];
}

double unit_cube_to_region(std::span<const double> u, std::span<double> angles) {
    const std::size_t m = u.size();
    if (angles.size() != m)
        throw std::invalid_argument("unit_cube_to_region: size mismatch");
    double scale = 0.5 * kPi;
    angles[m - 1] = u[0] * 0.5 * kPi;
    for (std::size_t l = 1; l < m; ++l) {
        double hi = upper_bound_next(angles[m - l]);
        angles[m - 1 - l] = u[l] * hi;
        scale *= hi;
    }
    return scale;
}

}  // namespace buresnum
