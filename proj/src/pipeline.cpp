#include "buresnum/pipeline.hpp"
#include "buresnum/common.hpp"
#include "buresnum/eigenparam.hpp"
#include "buresnum/qmc.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

namespace buresnum {

using nlohmann::json;

double default_rel_tol(int n) {
    if (n <= 3) return 1e-8;
    if (n == 4) return 1e-6;
    if (n == 5) return 1e-4;
    return 5e-3;  // advisory territory
}

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

int default_tensor_points(int n) {
    if (n <= 4) return 96;
    if (n == 5) return 64;
    return 40;
}

const char* mean_name(PairMean m) {
    return m == PairMean::arithmetic ? "arithmetic" : "identric";
}

AdaptiveConfig adaptive_config(int n, const PipelineConfig& cfg) {
    AdaptiveConfig q;
    q.rel_tol = cfg.rel_tol > 0.0 ? cfg.rel_tol : default_rel_tol(n);
    if (cfg.max_evaluations > 0) q.max_evaluations = cfg.max_evaluations;
    return q;
}

// ----------------------------------------------------------------------
// ordered-region integration of an angle-space integrand
// ----------------------------------------------------------------------
QuadratureEstimate integrate_ordered(const std::function<double(std::span<const double>)>& f,
                                     int dims, const AdaptiveConfig& qcfg) {
    std::vector<double> angles(dims);
    return integrate_iterated(
        [f, angles](std::span<const double> coords) mutable {
            levels_to_angles(coords, angles);
            return f(angles);
        },
        dims, [](int level, std::span<const double> outer) {
            return ordered_region_bounds(level, outer);
        },
        qcfg);
}

// ----------------------------------------------------------------------
// JSONL cache keyed by a digest of the resolved inputs + code version
// ----------------------------------------------------------------------
std::optional<json> cache_get(const std::string& path, const std::string& digest) {
    if (path.empty()) return std::nullopt;
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::string line;
    std::optional<json> hit;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded()) continue;
        if (rec.value("key_digest", "") == digest) hit = rec;  // last write wins
    }
    return hit;
}

void cache_put(const std::string& path, const std::string& digest, json rec) {
    if (path.empty()) return;
    rec["key_digest"] = digest;
    rec["timestamp"] = static_cast<std::int64_t>(std::time(nullptr));
    std::ofstream out(path, std::ios::app);
    if (out) out << rec.dump() << "\n";
}

std::string key_digest_of(const json& key) { return to_hex(fnv1a64(key.dump())); }

json constant_to_json(const ConstantResult& r) {
    return json{{"n", r.n},
                {"beta", r.beta},
                {"mean", mean_name(r.mean)},
                {"integral", r.integral},
                {"constant", r.constant},
                {"error_estimate", r.error_estimate},
                {"evaluations", r.evaluations},
                {"method", r.method},
                {"converged", r.converged},
                {"note", r.note}};
}

ConstantResult constant_from_json(const json& j) {
    ConstantResult r;
    r.n = j.at("n").get<int>();
    r.beta = j.at("beta").get<int>();
    r.mean = j.at("mean").get<std::string>() == "identric" ? PairMean::identric
                                                           : PairMean::arithmetic;
    r.integral = j.at("integral").get<double>();
    r.constant = j.at("constant").get<double>();
    r.error_estimate = j.at("error_estimate").get<double>();
    r.evaluations = j.at("evaluations").get<std::uint64_t>();
    r.method = j.at("method").get<std::string>();
    r.converged = j.at("converged").get<bool>();
    r.note = j.value("note", "");
    return r;
}

// ----------------------------------------------------------------------
// core: normalization integral of a kernel by the selected route
// ----------------------------------------------------------------------
ConstantResult constant_via(const std::string& method, const KernelSpec& spec,
                            const PipelineConfig& cfg) {
    const int dims = spec.n - 1;
    ConstantResult r;
    r.n = spec.n;
    r.beta = spec.beta;
    r.mean = spec.mean;

    json key{{"fn", "constant"},
             {"n", spec.n},
             {"beta", spec.beta},
             {"mean", mean_name(spec.mean)},
             {"method", method},
             {"rel_tol", cfg.rel_tol > 0.0 ? cfg.rel_tol : default_rel_tol(spec.n)},
             {"max_evaluations", cfg.max_evaluations},
             {"version", kCodeVersion}};
    if (method == "qmc") {
        key["qmc_points"] = cfg.qmc_points;
        key["qmc_batch"] = cfg.qmc_batch;
        key["seed"] = cfg.seed;
    }
    if (method == "tensor")
        key["tensor_points"] = cfg.tensor_points > 0 ? cfg.tensor_points
                                                     : default_tensor_points(spec.n);
    if (method == "adaptive-fullbox") key["level_order"] = cfg.level_order;
    const std::string digest = key_digest_of(key);
    if (auto hit = cache_get(cfg.cache_path, digest)) {
        ConstantResult c = constant_from_json(*hit);
        c.from_cache = true;
        return c;
    }

    auto integrand = [spec](std::span<const double> angles) {
        return angle_integrand(angles, spec);
    };

    if (method == "adaptive") {
        AdaptiveConfig qcfg = adaptive_config(spec.n, cfg);
        QuadratureEstimate q = integrate_ordered(integrand, dims, qcfg);
        double nf = factorial(spec.n);
        r.integral = nf * q.value;
        r.error_estimate = nf * q.error_estimate;
        r.evaluations = q.evaluations;
        r.method = "adaptive-ordered";
        r.converged = q.converged;
    } else if (method == "adaptive-fullbox") {
        std::vector<int> perm = cfg.level_order;
        if (perm.empty()) {
            perm.resize(dims);
            std::iota(perm.begin(), perm.end(), 0);
        }
        if (static_cast<int>(perm.size()) != dims)
            throw std::invalid_argument("level_order size must be n-1");
        std::vector<double> angles(dims);
        AdaptiveConfig qcfg = adaptive_config(spec.n, cfg);
        QuadratureEstimate q = integrate_box(
            [&, angles](std::span<const double> coords) mutable {
                for (int l = 0; l < dims; ++l) angles[perm[l]] = coords[l];
                return integrand(angles);
            },
            dims, 0.0, kPi, qcfg);
        r.integral = q.value;
        r.error_estimate = q.error_estimate;
        r.evaluations = q.evaluations;
        r.method = "adaptive-fullbox";
        r.converged = q.converged;
    } else if (method == "qmc") {
        QmcConfig qc;
        qc.max_points = cfg.qmc_points;
        qc.batch_size = cfg.qmc_batch;
        qc.rel_tol = cfg.rel_tol > 0.0 ? cfg.rel_tol : default_rel_tol(spec.n);
        if (cfg.seed != 0) {
            qc.shift = true;
            qc.seed = cfg.seed;
        }
        QuadratureEstimate q = integrate_qmc(integrand, dims, 0.0, kPi, qc);
        r.integral = q.value;
        r.error_estimate = q.error_estimate;
        r.evaluations = q.evaluations;
        r.method = "qmc-fullbox";
        r.converged = q.converged;
    } else if (method == "tensor") {
        int big = cfg.tensor_points > 0 ? cfg.tensor_points : default_tensor_points(spec.n);
        int small = std::max(8, (3 * big) / 4);
        auto tf = [&](std::span<const double> pt, std::span<double> out) {
            out[0] = integrand(pt);
        };
        TensorResult tb = integrate_tensor(tf, dims, 0.0, kPi, big, 1);
        TensorResult ts = integrate_tensor(tf, dims, 0.0, kPi, small, 1);
        r.integral = tb.values[0];
        r.error_estimate = std::fabs(tb.values[0] - ts.values[0]);
        r.evaluations = tb.evaluations + ts.evaluations;
        r.method = "tensor-gl";
        double rel = cfg.rel_tol > 0.0 ? cfg.rel_tol : default_rel_tol(spec.n);
        r.converged = r.error_estimate <= rel * std::fabs(r.integral);
    } else {
        throw std::invalid_argument("unknown method: " + method);
    }

    r.constant = 1.0 / r.integral;
    cache_put(cfg.cache_path, digest, constant_to_json(r));
    return r;
}

std::string resolve_method(int n, const std::string& method) {
    if (method != "auto") return method;
    if (n <= 4) return "adaptive";
    if (n == 5) return "qmc";
    return "tensor";
}

}  // namespace

// ======================================================================
// constants
// ======================================================================
ConstantResult hall_constant(int n, const PipelineConfig& cfg, const std::string& method) {
    if (n < 2) throw std::invalid_argument("hall_constant: n must be >= 2");
    KernelSpec spec{n, PairMean::arithmetic, 2};
    return constant_via(resolve_method(n, method), spec, cfg);
}

ConstantResult variant_constant(int n, int beta, const PipelineConfig& cfg) {
    if (n != 2 && n != 3)
        throw std::invalid_argument("variant_constant: exponent variants cover n = 2, 3");
    if (beta < 1) throw std::invalid_argument("variant_constant: beta must be >= 1");
    if (n == 2 && beta % 2 == 1)
        throw DivergenceError(
            "variant_constant: at n=2 an odd exponent makes the signed normalization "
            "integral vanish identically; no finite constant exists");
    if (n == 3 && beta % 2 == 1) {
        ConstantResult r;
        r.n = n;
        r.beta = beta;
        r.mean = PairMean::arithmetic;
        double b = beta;
        r.constant = std::tgamma(0.5 * (b + 1.0)) * std::tgamma(1.5 * b) /
                     (2.0 * std::pow(kPi, 1.5) * std::tgamma(b) * std::tgamma(b));
        r.integral = 1.0 / r.constant;
        r.error_estimate = 0.0;
        r.evaluations = 0;
        r.method = "closed-form-gamma";
        r.converged = true;
        r.note =
            "odd exponents at n=3: constant from the gamma-function family; the "
            "box-integral convention does not reproduce these reference values";
        return r;
    }
    KernelSpec spec{n, PairMean::arithmetic, beta};
    return constant_via(resolve_method(n, "auto"), spec, cfg);
}

ConstantResult quasi_constant(int n, const PipelineConfig& cfg) {
    if (n != 2 && n != 3)
        throw std::invalid_argument("quasi_constant: identric family covers n = 2, 3");
    KernelSpec spec{n, PairMean::identric, 2};
    return constant_via("adaptive", spec, cfg);
}

// ======================================================================
// average entropy
// ======================================================================
EntropyResult average_entropy(int n, const PipelineConfig& cfg) {
    if (n < 2 || n > 6) throw std::invalid_argument("average_entropy: n in [2,6]");
    EntropyResult r;
    r.n = n;
    const int dims = n - 1;
    const double rel = cfg.rel_tol > 0.0 ? cfg.rel_tol : default_rel_tol(n);
    KernelSpec spec{n, PairMean::arithmetic, 2};

    json key{{"fn", "entropy"}, {"n", n},       {"rel_tol", rel},
             {"max_evaluations", cfg.max_evaluations},
             {"tensor_points", cfg.tensor_points},
             {"version", kCodeVersion}};
    const std::string digest = key_digest_of(key);
    if (auto hit = cache_get(cfg.cache_path, digest)) {
        r.entropy = hit->at("entropy").get<double>();
        r.error_estimate = hit->at("error_estimate").get<double>();
        r.evaluations = hit->at("evaluations").get<std::uint64_t>();
        r.method = hit->at("method").get<std::string>();
        r.converged = hit->at("converged").get<bool>();
        r.from_cache = true;
    } else if (n <= 3) {
        AdaptiveConfig qcfg = adaptive_config(n, cfg);
        std::vector<double> d(n);
        auto mass = [&](std::span<const double> a) { return angle_integrand(a, spec); };
        auto weighted = [&, d](std::span<const double> a) mutable {
            angles_to_eigenvalues(a, d);
            return angle_integrand(a, spec) * vn_entropy(d);
        };
        QuadratureEstimate den = integrate_ordered(mass, dims, qcfg);
        QuadratureEstimate num = integrate_ordered(weighted, dims, qcfg);
        r.entropy = num.value / den.value;
        r.error_estimate = (num.error_estimate + std::fabs(r.entropy) * den.error_estimate) /
                           std::fabs(den.value);
        r.evaluations = num.evaluations + den.evaluations;
        r.method = "adaptive-ordered";
        r.converged = num.converged && den.converged;
    } else {
        int big = cfg.tensor_points > 0 ? cfg.tensor_points : default_tensor_points(n);
        int small = std::max(8, big / 2);
        std::vector<double> d(n);
        auto tf = [&, d](std::span<const double> a, std::span<double> out) mutable {
            double mass = angle_integrand(a, spec);
            angles_to_eigenvalues(a, d);
            out[0] = mass;
            out[1] = mass * vn_entropy(d);
        };
        TensorResult tb = integrate_tensor(tf, dims, 0.0, kPi, big, 2);
        TensorResult ts = integrate_tensor(tf, dims, 0.0, kPi, small, 2);
        double sb = tb.values[1] / tb.values[0];
        double ss = ts.values[1] / ts.values[0];
        r.entropy = sb;
        r.error_estimate = std::fabs(sb - ss);
        r.evaluations = tb.evaluations + ts.evaluations;
        r.method = "tensor-gl";
        r.converged = r.error_estimate <= rel * std::fabs(sb);
    }

    if (!r.from_cache)
        cache_put(cfg.cache_path, digest,
                  json{{"entropy", r.entropy},
                       {"error_estimate", r.error_estimate},
                       {"evaluations", r.evaluations},
                       {"method", r.method},
                       {"converged", r.converged}});

    r.fit_target = n * std::log(static_cast<double>(n)) - r.entropy;
    r.fit = best_rational_approx(r.fit_target, BigInt(r.fit_max_den));
    r.fit_residual = std::fabs(r.fit_target - r.fit.get_d());
    return r;
}

// ======================================================================
// expected ordered eigenvalues
// ======================================================================
EigenvalueResult expected_eigenvalues(int n, const PipelineConfig& cfg) {
    if (n < 2 || n > 4) throw std::invalid_argument("expected_eigenvalues: n in [2,4]");
    EigenvalueResult r;
    r.n = n;
    const int dims = n - 1;
    AdaptiveConfig qcfg = adaptive_config(n, cfg);
    KernelSpec spec{n, PairMean::arithmetic, 2};

    auto mass = [&](std::span<const double> a) { return angle_integrand(a, spec); };
    QuadratureEstimate den = integrate_ordered(mass, dims, qcfg);

    r.values.resize(n);
    r.error_estimate = 0.0;
    r.evaluations = den.evaluations;
    r.converged = den.converged;
    std::vector<double> d(n);
    for (int k = 0; k < n; ++k) {
        auto weighted = [&, d, k](std::span<const double> a) mutable {
            angles_to_eigenvalues(a, d);
            return angle_integrand(a, spec) * d[k];
        };
        QuadratureEstimate num = integrate_ordered(weighted, dims, qcfg);
        r.values[k] = num.value / den.value;
        double err = (num.error_estimate + std::fabs(r.values[k]) * den.error_estimate) /
                     std::fabs(den.value);
        r.error_estimate = std::max(r.error_estimate, err);
        r.evaluations += num.evaluations;
        r.converged = r.converged && num.converged;
    }
    r.method = "adaptive-ordered";
    return r;
}

// ======================================================================
// redundancy summaries and the marginal crossover
// ======================================================================
double redundancy_quasi_prior(double m) {
    return 1.5 * std::log(m) + 0.5 * std::log(2.0 / kPi) - 0.5 + std::log(kQuasiThetaNorm);
}

double redundancy_bures_prior_average(double m) {
    auto f = [m](double t) {
        double w = bures_marginal_theta_n2(t);
        return redundancy_pointwise(t, m, std::log(w)) * w;
    };
    AdaptiveConfig qcfg;
    qcfg.rel_tol = 1e-10;
    return integrate_1d(f, 0.0, 0.5 * kPi, qcfg).value;
}

double marginal_crossover_n2() {
    auto gap = [](double t) {
        return quasi_marginal_theta_n2(t) - bures_marginal_theta_n2(t);
    };
    double lo = 0.2, hi = 0.7;
    double flo = gap(lo);
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = gap(mid);
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// ======================================================================
// serialization
// ======================================================================
std::string to_json_string(const ConstantResult& r) {
    json j = constant_to_json(r);
    j["from_cache"] = r.from_cache;
    return j.dump();
}

std::string to_json_string(const EntropyResult& r) {
    json j{{"n", r.n},
           {"entropy", r.entropy},
           {"error_estimate", r.error_estimate},
           {"evaluations", r.evaluations},
           {"method", r.method},
           {"converged", r.converged},
           {"from_cache", r.from_cache},
           {"fit_target", r.fit_target},
           {"fit", r.fit.get_str()},
           {"fit_residual", r.fit_residual},
           {"fit_max_den", r.fit_max_den}};
    return j.dump();
}

std::string to_json_string(const EigenvalueResult& r) {
    json j{{"n", r.n},
           {"values", r.values},
           {"error_estimate", r.error_estimate},
           {"evaluations", r.evaluations},
           {"method", r.method},
           {"converged", r.converged}};
    return j.dump();
}

}  // namespace buresnum
