#pragma once
// Deterministic adaptive quadrature on low-dimensional boxes and simplex-like
// regions, built from an embedded 7/15-point Gauss–Kronrod pair, plus tensor
// Gauss–Legendre grids for smooth medium-dimension integrands.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace buresnum {

struct AdaptiveConfig {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;                      // 0 => purely relative
    std::uint64_t max_evaluations = 200000000; // innermost integrand calls
    int max_depth = 12;                        // interval bisection depth
    double inner_tol_factor = 0.1;             // tightening per nesting level
};

struct QuadratureEstimate {
    double value = 0.0;
    double error_estimate = 0.0;
    std::uint64_t evaluations = 0;
    std::string method;
    bool converged = false;
};

// ----------------------------------------------------------------------
// 7/15-point embedded rule on one interval.  err is the raw |K15-G7| gap.
// ----------------------------------------------------------------------
struct RuleApplication {
    double k15 = 0.0;
    double g7 = 0.0;
    double err = 0.0;
};
RuleApplication g7k15_apply(const std::function<double(double)>& f, double a, double b);

// node/weight tables, exposed for verification (positive half, ascending)
std::span<const double> g7_nodes();
std::span<const double> g7_weights();
std::span<const double> k15_nodes();
std::span<const double> k15_weights();

// ----------------------------------------------------------------------
// adaptive integration
// ----------------------------------------------------------------------
QuadratureEstimate integrate_1d(const std::function<double(double)>& f,
                                double a, double b, const AdaptiveConfig& cfg = {});

using MultiFn = std::function<double(std::span<const double>)>;
// bounds(level, outer) gives the [lo,hi] range of coordinate `level` as a
// function of the already-fixed coordinates 0..level-1
using BoundsFn = std::function<std::pair<double, double>(int, std::span<const double>)>;

QuadratureEstimate integrate_iterated(const MultiFn& f, int dim, const BoundsFn& bounds,
                                      const AdaptiveConfig& cfg = {});
QuadratureEstimate integrate_box(const MultiFn& f, int dim, double lo, double hi,
                                 const AdaptiveConfig& cfg = {});

// ----------------------------------------------------------------------
// tensor Gauss-Legendre
// ----------------------------------------------------------------------
std::vector<double> gauss_legendre_nodes(int n);   // on [-1,1], ascending
std::vector<double> gauss_legendre_weights(int n);

struct TensorResult {
    std::vector<double> values;
    std::uint64_t evaluations = 0;
};
// f(point, out) writes n_outputs values for one grid point
TensorResult integrate_tensor(
    const std::function<void(std::span<const double>, std::span<double>)>& f,
    int dim, double lo, double hi, int points_per_axis, int n_outputs);

}  // namespace buresnum
