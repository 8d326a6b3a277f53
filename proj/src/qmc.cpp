#include "buresnum/qmc.hpp"
#include "buresnum/common.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace buresnum {

namespace {

constexpr unsigned kBases[16] = {2,  3,  5,  7,  11, 13, 17, 19,
                                 23, 29, 31, 37, 41, 43, 47, 53};

// multiplicative digit scramble: d -> (m*d) mod b, fixing 0
double radical_inverse_scrambled(unsigned base, std::uint64_t index, unsigned mult) {
    double inv = 1.0 / base;
    double f = inv;
    double x = 0.0;
    while (index) {
        std::uint64_t d = index % base;
        if (d && mult > 1) d = (d * mult) % base;
        x += static_cast<double>(d) * f;
        index /= base;
        f *= inv;
    }
    return x;
}

}  // namespace

double radical_inverse(unsigned base, std::uint64_t index) {
    if (base < 2) throw std::invalid_argument("radical_inverse: base must be >= 2");
    return radical_inverse_scrambled(base, index, 1);
}

void halton_point(std::uint64_t index, std::span<double> out) {
    if (out.size() > 16) throw std::invalid_argument("halton_point: dimension > 16");
    for (std::size_t d = 0; d < out.size(); ++d)
        out[d] = radical_inverse(kBases[d], index);
}

QuadratureEstimate integrate_qmc(const MultiFn& f, int dim, double lo, double hi,
                                 const QmcConfig& cfg) {
    if (dim < 1 || dim > 16) throw std::invalid_argument("integrate_qmc: bad dimension");
    const double width = hi - lo;
    double volume = 1.0;
    for (int d = 0; d < dim; ++d) volume *= width;

    // per-dimension shift offsets and scramble multipliers
    std::vector<double> shift(dim, 0.0);
    std::vector<unsigned> mult(dim, 1);
    if (cfg.shift || cfg.scramble) {
        SplitMix64 rng(cfg.seed ^ 0x51a5c1ba7c0ffee5ull);
        for (int d = 0; d < dim; ++d) {
            double u = rng.next_double();
            std::uint64_t m = rng.next();
            if (cfg.shift) shift[d] = u;
            if (cfg.scramble && kBases[d] > 2)
                mult[d] = 1 + static_cast<unsigned>(m % (kBases[d] - 1));
        }
    }

    std::vector<double> pt(dim);
    NeumaierSum batch_sums;           // sum over completed batches
    NeumaierSum current;              // current batch
    std::vector<double> cumulative;   // estimate after each batch
    std::uint64_t used = 0;
    double spread = 0.0;
    bool converged = false;

    const std::uint64_t batch = std::max<std::uint64_t>(1, cfg.batch_size);
    for (std::uint64_t idx = 1; idx <= cfg.max_points; ++idx) {
        for (int d = 0; d < dim; ++d) {
            double u = radical_inverse_scrambled(kBases[d], idx, mult[d]);
            if (cfg.shift) {
                u += shift[d];
                if (u >= 1.0) u -= 1.0;
            }
            pt[d] = lo + width * u;
        }
        double v = f(pt);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "non-finite integrand value at qmc index " << idx;
            throw std::runtime_error(os.str());
        }
        current.add(v);
        ++used;
        if (used % batch == 0 || idx == cfg.max_points) {
            batch_sums.add(current.value());
            current = NeumaierSum{};
            double est = volume * batch_sums.value() / static_cast<double>(used);
            cumulative.push_back(est);
            if (static_cast<int>(cumulative.size()) >= cfg.window) {
                auto first = cumulative.end() - cfg.window;
                auto [mn, mx] = std::minmax_element(first, cumulative.end());
                double mean = std::fabs(est) + 1e-300;
                spread = (*mx - *mn) / mean;
                if (spread <= cfg.rel_tol) {
                    converged = true;
                    break;
                }
            }
        }
    }

    QuadratureEstimate q;
    q.value = cumulative.empty() ? 0.0 : cumulative.back();
    q.error_estimate = spread * std::fabs(q.value);
    q.evaluations = used;
    q.method = "qmc-halton";
    q.converged = converged;
    return q;
}

}  // namespace buresnum
