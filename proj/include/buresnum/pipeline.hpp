#pragma once
// End-to-end computations: normalization constants for the eigenvalue
// densities, average entropies with rational-fit reporting, and expected
// ordered eigenvalues.  Every routine is deterministic and reports its
// method, evaluation count, and convergence status.

#include "buresnum/kernels.hpp"
#include "buresnum/numbers.hpp"
#include "buresnum/quad.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace buresnum {

// raised when no finite normalization constant exists (the defining
// integral vanishes identically, e.g. odd exponents at n = 2)
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PipelineConfig {
    double rel_tol = 0.0;               // 0 => per-n default
    std::uint64_t max_evaluations = 0;  // 0 => engine default
    std::uint64_t qmc_points = 10000000;
    std::uint64_t qmc_batch = 100000;
    std::uint64_t seed = 0;             // qmc shift/scramble seed (0 = plain)
    int tensor_points = 0;              // 0 => per-n default
    std::vector<int> level_order;       // box-nesting permutation (full-box route)
    std::string cache_path;             // empty => caching off
};

double default_rel_tol(int n);

struct ConstantResult {
    int n = 0;
    int beta = 2;
    PairMean mean = PairMean::arithmetic;
    double integral = 0.0;  // full-box normalization integral
    double constant = 0.0;  // its reciprocal
    double error_estimate = 0.0;
    std::uint64_t evaluations = 0;
    std::string method;
    bool converged = false;
    bool from_cache = false;
    std::string note;  // route disclosure where a closed form replaces the integral
};

// arithmetic-mean family, beta = 2.  method: "auto", "adaptive" (ordered
// region times n!), "adaptive-fullbox" (honors cfg.level_order), "qmc",
// "tensor".
ConstantResult hall_constant(int n, const PipelineConfig& cfg = {},
                             const std::string& method = "auto");

// exponent variants.  Even beta integrates; odd beta at n = 2 raises
// DivergenceError; odd beta at n = 3 returns the gamma-family closed form
// with the route disclosed in note.
ConstantResult variant_constant(int n, int beta, const PipelineConfig& cfg = {});

// identric-mean denominators (beta = 2), n = 2 or 3
ConstantResult quasi_constant(int n, const PipelineConfig& cfg = {});

struct EntropyResult {
    int n = 0;
    double entropy = 0.0;  // mean von Neumann entropy under the density
    double error_estimate = 0.0;
    std::uint64_t evaluations = 0;
    std::string method;
    bool converged = false;
    bool from_cache = false;
    double fit_target = 0.0;  // n log n - entropy
    BigRational fit;          // best rational approximation of fit_target
    double fit_residual = 0.0;
    unsigned fit_max_den = 10000;
};
EntropyResult average_entropy(int n, const PipelineConfig& cfg = {});

struct EigenvalueResult {
    int n = 0;
    std::vector<double> values;  // expected ordered eigenvalues, descending
    double error_estimate = 0.0;
    std::uint64_t evaluations = 0;
    std::string method;
    bool converged = false;
};
EigenvalueResult expected_eigenvalues(int n, const PipelineConfig& cfg = {});

// ----------------------------------------------------------------------
// redundancy summaries for the two n = 2 priors (sample-size parameter m)
// ----------------------------------------------------------------------
// identric-family prior: pointwise constant in theta; returned exactly
double redundancy_quasi_prior(double m = 1.0);
// arithmetic-family prior (4/pi) cos^2: averaged over the prior
double redundancy_bures_prior_average(double m = 1.0);

// theta where the two n=2 eigenvalue-angle marginals cross on (0, pi/2)
double marginal_crossover_n2();

// ----------------------------------------------------------------------
// JSON serialization (single-line records; used by the CLI and the cache)
// ----------------------------------------------------------------------
std::string to_json_string(const ConstantResult& r);
std::string to_json_string(const EntropyResult& r);
std::string to_json_string(const EigenvalueResult& r);

}  // namespace buresnum
