#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "buresnum/common.hpp"
#include "buresnum/eigenparam.hpp"
#include "buresnum/quad.hpp"

#include <array>
#include <cmath>
#include <vector>

using namespace buresnum;

namespace {

std::vector<double> eigs(const std::vector<double>& angles) {
    std::vector<double> d(angles.size() + 1);
    angles_to_eigenvalues(angles, d);
    return d;
}

// determinant of the first (n-1)x(n-1) block of the map's differential,
// by central differences
double fd_jacobian(const std::vector<double>& a) {
    const std::size_t m = a.size();
    const double h = 1e-6;
    std::vector<std::vector<double>> M(m, std::vector<double>(m));
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<double> ap = a, am = a;
        ap[j] += h;
        am[j] -= h;
        std::vector<double> dp = eigs(ap), dm = eigs(am);
        for (std::size_t i = 0; i < m; ++i) M[i][j] = (dp[i] - dm[i]) / (2.0 * h);
    }
    // gaussian elimination, partial pivoting
    double det = 1.0;
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < m; ++r)
            if (std::fabs(M[r][c]) > std::fabs(M[piv][c])) piv = r;
        if (piv != c) {
            std::swap(M[piv], M[c]);
            det = -det;
        }
        det *= M[c][c];
        for (std::size_t r = c + 1; r < m; ++r) {
            double f = M[r][c] / M[c][c];
            for (std::size_t k = c; k < m; ++k) M[r][k] -= f * M[c][k];
        }
    }
    return std::fabs(det);
}

}  // namespace

TEST_CASE("distinguished points, n = 2") {
    auto d = eigs({0.5 * kPi});
    CHECK(d[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(d[1] == doctest::Approx(0.5).epsilon(1e-15));
    d = eigs({0.0});
    CHECK(d[0] == 1.0);
    CHECK(d[1] == 0.0);
    d = eigs({kPi});
    CHECK(d[0] == doctest::Approx(0.0).epsilon(1e-30));
    CHECK(d[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(angle_jacobian(std::array{0.5 * kPi}) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("distinguished points, n = 3") {
    auto d = eigs({0.5 * kPi, 0.5 * kPi});
    CHECK(d[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(d[1] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(d[2] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(angle_jacobian(std::array{0.5 * kPi, 0.5 * kPi}) ==
          doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("n = 4 layout matches the direct product formula on a grid") {
    for (int i = 1; i <= 5; ++i) {
        for (int j = 1; j <= 5; ++j) {
            for (int k = 1; k <= 5; ++k) {
                double a1 = i * kPi / 6.0, a2 = j * kPi / 6.0, a3 = k * kPi / 6.0;
                auto d = eigs({a1, a2, a3});
                auto c2 = [](double t) { double c = std::cos(0.5 * t); return c * c; };
                auto s2 = [](double t) { double s = std::sin(0.5 * t); return s * s; };
                CHECK(d[0] == doctest::Approx(c2(a1)).epsilon(1e-14));
                CHECK(d[1] == doctest::Approx(s2(a1) * c2(a2)).epsilon(1e-14));
                CHECK(d[2] == doctest::Approx(s2(a1) * s2(a2) * c2(a3)).epsilon(1e-14));
                CHECK(d[3] == doctest::Approx(s2(a1) * s2(a2) * s2(a3)).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("eigenvalues sum to one everywhere") {
    SplitMix64 rng(20240817);
    for (int n = 2; n <= 6; ++n) {
        for (int rep = 0; rep < 200; ++rep) {
            std::vector<double> a(n - 1);
            for (auto& v : a) v = rng.next_double() * kPi;
            auto d = eigs(a);
            double s = 0.0;
            for (double v : d) {
                CHECK(v >= 0.0);
                s += v;
            }
            CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("analytic jacobian agrees with finite differences") {
    SplitMix64 rng(7);
    for (int n = 2; n <= 4; ++n) {
        for (int rep = 0; rep < 40; ++rep) {
            std::vector<double> a(n - 1);
            for (auto& v : a) v = 0.2 + rng.next_double() * (kPi - 0.4);
            double jd = angle_jacobian(a);
            double jf = fd_jacobian(a);
            CHECK(jf == doctest::Approx(jd).epsilon(1e-6));
        }
    }
}

TEST_CASE("reduced weight equals jacobian with the root prefactor") {
    SplitMix64 rng(99);
    for (int n = 2; n <= 5; ++n) {
        for (int rep = 0; rep < 50; ++rep) {
            std::vector<double> a(n - 1);
            for (auto& v : a) v = 0.1 + rng.next_double() * (kPi - 0.2);
            auto d = eigs(a);
            double prod = 1.0;
            for (double v : d) prod *= v;
            double expect = angle_jacobian(a) / std::sqrt(prod);
            CHECK(reduced_weight(a) == doctest::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("bound-transfer function endpoints and monotonicity") {
    CHECK(upper_bound_next(0.0) == doctest::Approx(0.5 * kPi).epsilon(1e-15));
    CHECK(upper_bound_next(kPi) == doctest::Approx(kPi).epsilon(1e-15));
    double prev = upper_bound_next(0.0);
    for (int i = 1; i <= 100; ++i) {
        double cur = upper_bound_next(i * kPi / 100.0);
        CHECK(cur >= prev);
        prev = cur;
    }
    auto b0 = ordered_region_bounds(0, {});
    CHECK(b0.first == 0.0);
    CHECK(b0.second == doctest::Approx(0.5 * kPi));
}

TEST_CASE("the mapped region is exactly the ordered set") {
    SplitMix64 rng(4242);
    for (int rep = 0; rep < 10000; ++rep) {
        std::array<double, 3> u{rng.next_double(), rng.next_double(), rng.next_double()};
        std::array<double, 3> a{};
        unit_cube_to_region(u, a);
        std::array<double, 4> d{};
        angles_to_eigenvalues(a, d);
        for (int i = 0; i + 1 < 4; ++i) CHECK(d[i] >= d[i + 1] - 1e-15);
    }
}

TEST_CASE("region map corners") {
    // all-zero corner: the pure state d = (1, 0, 0, 0)
    std::array<double, 3> a{};
    double s0 = unit_cube_to_region(std::array{0.0, 0.0, 0.0}, a);
    CHECK(s0 > 0.0);
    std::array<double, 4> d{};
    angles_to_eigenvalues(a, d);
    CHECK(d[0] == 1.0);
    // all-one corner: the fully mixed state d = 1/n
    unit_cube_to_region(std::array{1.0, 1.0, 1.0}, a);
    angles_to_eigenvalues(a, d);
    for (double v : d) CHECK(v == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("levels-to-angles reverses the nesting order") {
    std::array<double, 3> coords{0.1, 0.2, 0.3};
    std::array<double, 3> a{};
    levels_to_angles(coords, a);
    CHECK(a[0] == 0.3);
    CHECK(a[1] == 0.2);
    CHECK(a[2] == 0.1);
}

TEST_CASE("jacobian integrates to 1/(n-1)! over the full box") {
    // n = 2
    QuadratureEstimate q2 = integrate_1d(
        [](double t) { return angle_jacobian(std::array{t}); }, 0.0, kPi, {});
    CHECK(q2.value == doctest::Approx(1.0).epsilon(1e-11));
    // n = 3
    QuadratureEstimate q3 = integrate_box(
        [](std::span<const double> x) { return angle_jacobian(x); }, 2, 0.0, kPi, {});
    CHECK(q3.value == doctest::Approx(0.5).epsilon(1e-10));
    // n = 4, tensor grid
    TensorResult t4 = integrate_tensor(
        [](std::span<const double> x, std::span<double> out) { out[0] = angle_jacobian(x); },
        3, 0.0, kPi, 32, 1);
    CHECK(t4.values[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
}

TEST_CASE("ordered region measure through the cube map") {
    // integral of jacobian over the ordered region = (1/(n-1)!) / n!
    AdaptiveConfig cfg;
    cfg.rel_tol = 1e-10;
    QuadratureEstimate q = integrate_box(
        [](std::span<const double> u) {
            std::array<double, 2> a{};
            double scale = unit_cube_to_region(u, a);
            return angle_jacobian(a) * scale;
        },
        2, 0.0, 1.0, cfg);
    CHECK(q.value == doctest::Approx(1.0 / 12.0).epsilon(1e-9));
}
