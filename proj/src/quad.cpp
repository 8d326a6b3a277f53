#include "buresnum/quad.hpp"
#include "buresnum/common.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace buresnum {

// ======================================================================
// embedded 7/15 rule tables (positive half, ascending).  The 15-point
// weights solve the moment equations for the Stieltjes extension of the
// 7-point Gauss rule; exactness through degree 22 is certified in tests.
// ======================================================================
namespace {

constexpr double kG7N[4] = {
    0.0,
    0.4058451513773971669066,
    0.7415311855993944398639,
    0.9491079123427585245262,
};
constexpr double kG7W[4] = {
    0.4179591836734693877551,
    0.3818300505051189449504,
    0.2797053914892766679015,
    0.1294849661688696932706,
};
constexpr double kK15N[8] = {
    0.0,
    0.2077849550078984676007,
    0.4058451513773971669066,
    0.5860872354676911302941,
    0.7415311855993944398639,
    0.8648644233597690727897,
    0.9491079123427585245262,
    0.9914553711208126392069,
};
constexpr double kK15W[8] = {
    0.2094821410847278280130,
    0.2044329400752988924142,
    0.1903505780647854099133,
    0.1690047266392679028266,
    0.1406532597155259187452,
    0.1047900103222501838399,
    0.0630920926299785532907,
    0.0229353220105292249637,
};

// integrand returning {value, carried error from nested integrations}
using PairFn = std::function<std::pair<double, double>(double)>;

struct Seg {
    double a, b;
    double val;        // 15-point estimate
    double err_rule;   // |K15-G7|
    double err_inner;  // integrated carried error
    int depth;
};

Seg rule_apply(const PairFn& g, double a, double b, int depth) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    auto [fc, ec] = g(c);
    double k15 = kK15W[0] * fc;
    double g7 = kG7W[0] * fc;
    double ei = kK15W[0] * ec;
    for (int i = 1; i < 8; ++i) {
        auto [fp, ep] = g(c + h * kK15N[i]);
        auto [fm, em] = g(c - h * kK15N[i]);
        k15 += kK15W[i] * (fp + fm);
        ei += kK15W[i] * (ep + em);
        if (i % 2 == 0) g7 += kG7W[i / 2] * (fp + fm);
    }
    return Seg{a, b, k15 * h, std::fabs((k15 - g7) * h), ei * h, depth};
}

struct Adapt1D {
    double value = 0.0;
    double err_rule = 0.0;
    double err_inner = 0.0;
    bool converged = false;
};

Adapt1D adapt1d(const PairFn& g, double a, double b, double rel_tol, double abs_tol,
                int max_depth, const std::function<bool()>& budget_ok) {
    Adapt1D out;
    if (!(b > a)) {
        out.converged = true;
        return out;
    }
    std::vector<Seg> segs;
    segs.push_back(rule_apply(g, a, b, 0));
    for (;;) {
        NeumaierSum sv, sr, si;
        for (const Seg& s : segs) {
            sv.add(s.val);
            sr.add(s.err_rule);
            si.add(s.err_inner);
        }
        out.value = sv.value();
        out.err_rule = sr.value();
        out.err_inner = si.value();
        double tol = std::max(abs_tol, rel_tol * std::fabs(out.value));
        if (tol <= 0.0) tol = 1e-300;
        if (out.err_rule + out.err_inner <= tol) {
            out.converged = true;
            return out;
        }
        // splitting cannot reduce the carried inner error
        if (out.err_rule <= 0.01 * tol) return out;

        int best = -1;
        double worst = -1.0;
        for (int i = 0; i < static_cast<int>(segs.size()); ++i) {
            const Seg& s = segs[i];
            if (s.depth >= max_depth) continue;
            double scale = std::fabs(s.a) + std::fabs(s.b) + 1e-300;
            if (s.b - s.a <= 64.0 * std::numeric_limits<double>::epsilon() * scale) continue;
            if (s.err_rule > worst) {
                worst = s.err_rule;
                best = i;
            }
        }
        if (best < 0 || !budget_ok()) return out;
        Seg s = segs[best];
        segs.erase(segs.begin() + best);
        double mid = 0.5 * (s.a + s.b);
        segs.push_back(rule_apply(g, s.a, mid, s.depth + 1));
        segs.push_back(rule_apply(g, mid, s.b, s.depth + 1));
    }
}

[[noreturn]] void throw_nonfinite(std::span<const double> coords, double v) {
    std::ostringstream os;
    os << "non-finite integrand value " << v << " at (";
    for (std::size_t i = 0; i < coords.size(); ++i)
        os << (i ? ", " : "") << coords[i];
    os << ")";
    throw std::runtime_error(os.str());
}

}  // namespace

std::span<const double> g7_nodes() { return {kG7N, 4}; }
std::span<const double> g7_weights() { return {kG7W, 4}; }
std::span<const double> k15_nodes() { return {kK15N, 8}; }
std::span<const double> k15_weights() { return {kK15W, 8}; }

RuleApplication g7k15_apply(const std::function<double(double)>& f, double a, double b) {
    Seg s = rule_apply([&](double x) { return std::pair{f(x), 0.0}; }, a, b, 0);
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double g7 = kG7W[0] * f(c);
    for (int i = 1; i < 4; ++i)
        g7 += kG7W[i] * (f(c + h * kG7N[i]) + f(c - h * kG7N[i]));
    return RuleApplication{s.val, g7 * h, s.err_rule};
}

QuadratureEstimate integrate_1d(const std::function<double(double)>& f, double a, double b,
                                const AdaptiveConfig& cfg) {
    std::uint64_t remaining = cfg.max_evaluations;
    PairFn g = [&](double x) {
        if (remaining > 0) --remaining;
        double v = f(x);
        if (!std::isfinite(v)) throw_nonfinite(std::span<const double>(&x, 1), v);
        return std::pair{v, 0.0};
    };
    Adapt1D r = adapt1d(g, a, b, cfg.rel_tol, cfg.abs_tol, cfg.max_depth,
                        [&] { return remaining > 0; });
    QuadratureEstimate q;
    q.value = r.value;
    q.error_estimate = r.err_rule + r.err_inner;
    q.evaluations = cfg.max_evaluations - remaining;
    q.method = "adaptive-g7k15";
    q.converged = r.converged;
    return q;
}

QuadratureEstimate integrate_iterated(const MultiFn& f, int dim, const BoundsFn& bounds,
                                      const AdaptiveConfig& cfg) {
    if (dim < 1) throw std::invalid_argument("integrate_iterated: dim must be >= 1");
    std::uint64_t remaining = cfg.max_evaluations;
    bool all_converged = true;
    std::vector<double> coords(dim, 0.0);

    std::function<Adapt1D(int)> run_level = [&](int level) -> Adapt1D {
        auto [lo, hi] = bounds(level, std::span<const double>(coords.data(), level));
        double rel = cfg.rel_tol * std::pow(cfg.inner_tol_factor, level);
        double abs = cfg.abs_tol * std::pow(cfg.inner_tol_factor, level);
        PairFn g;
        if (level == dim - 1) {
            g = [&, level](double x) {
                coords[level] = x;
                if (remaining > 0) --remaining;
                double v = f(coords);
                if (!std::isfinite(v)) throw_nonfinite(coords, v);
                return std::pair{v, 0.0};
            };
        } else {
            g = [&, level](double x) {
                coords[level] = x;
                Adapt1D in = run_level(level + 1);
                if (!in.converged) all_converged = false;
                return std::pair{in.value, in.err_rule + in.err_inner};
            };
        }
        return adapt1d(g, lo, hi, rel, abs, cfg.max_depth, [&] { return remaining > 0; });
    };

    Adapt1D top = run_level(0);
    QuadratureEstimate q;
    q.value = top.value;
    q.error_estimate = top.err_rule + top.err_inner;
    q.evaluations = cfg.max_evaluations - remaining;
    q.method = "adaptive-g7k15";
    q.converged = top.converged && all_converged;
    return q;
}

QuadratureEstimate integrate_box(const MultiFn& f, int dim, double lo, double hi,
                                 const AdaptiveConfig& cfg) {
    return integrate_iterated(
        f, dim, [lo, hi](int, std::span<const double>) { return std::pair{lo, hi}; }, cfg);
}

// ======================================================================
// Gauss-Legendre
// ======================================================================
std::vector<double> gauss_legendre_nodes(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre_nodes: n must be >= 1");
    std::vector<double> x(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 64; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::fabs(dt) < 1e-15) break;
        }
        x[n - 1 - i] = t;
        x[i] = -t;
    }
    if (n % 2 == 1) x[n / 2] = 0.0;
    return x;
}

std::vector<double> gauss_legendre_weights(int n) {
    std::vector<double> x = gauss_legendre_nodes(n);
    std::vector<double> w(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = x[n - 1 - i];
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (t * p1 - p0) / (t * t - 1.0);
        double wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[n - 1 - i] = wi;
        w[i] = wi;
    }
    return w;
}

TensorResult integrate_tensor(
    const std::function<void(std::span<const double>, std::span<double>)>& f,
    int dim, double lo, double hi, int points_per_axis, int n_outputs) {
    if (dim < 1 || points_per_axis < 1 || n_outputs < 1)
        throw std::invalid_argument("integrate_tensor: bad arguments");
    const int n = points_per_axis;
    std::vector<double> xs = gauss_legendre_nodes(n);
    std::vector<double> ws = gauss_legendre_weights(n);
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    std::vector<double> node(n), wt(n);
    for (int i = 0; i < n; ++i) {
        node[i] = mid + half * xs[i];
        wt[i] = half * ws[i];
    }
    std::vector<int> idx(dim, 0);
    std::vector<double> pt(dim);
    std::vector<double> out(n_outputs);
    std::vector<NeumaierSum> acc(n_outputs);
    std::uint64_t count = 0;
    for (;;) {
        double w = 1.0;
        for (int d = 0; d < dim; ++d) {
            pt[d] = node[idx[d]];
            w *= wt[idx[d]];
        }
        f(pt, out);
        ++count;
        for (int j = 0; j < n_outputs; ++j) acc[j].add(w * out[j]);
        int d = dim - 1;
        while (d >= 0 && ++idx[d] == n) {
            idx[d] = 0;
            --d;
        }
        if (d < 0) break;
    }
    TensorResult r;
    r.values.resize(n_outputs);
    for (int j = 0; j < n_outputs; ++j) r.values[j] = acc[j].value();
    r.evaluations = count;
    return r;
}

}  // namespace buresnum
