#pragma once
// Halton-sequence quasi-Monte-Carlo integration over boxes.  Fully
// deterministic: points are index-addressable, batch accumulation uses
// compensated sums, and convergence is judged by the spread of the last
// few cumulative estimates.

#include "buresnum/quad.hpp"

#include <cstdint>
#include <span>

namespace buresnum {

struct QmcConfig {
    std::uint64_t max_points = 10000000;
    std::uint64_t batch_size = 100000;
    int window = 8;             // cumulative estimates in the spread window
    double rel_tol = 5e-4;
    bool shift = false;         // random-rotation (mod 1) of the whole stream
    bool scramble = false;      // multiplicative digit scramble per base
    std::uint64_t seed = 0;     // drives shift/scramble only
};

// van der Corput radical inverse of `index` in `base`; index starts at 1
// (index 0 would map to the box corner).
double radical_inverse(unsigned base, std::uint64_t index);

// Halton point for 1-based `index`; bases are the first out.size() primes.
void halton_point(std::uint64_t index, std::span<double> out);

// Integrate f over [lo,hi]^dim.  converged reflects the spread criterion;
// error_estimate is the final window spread scaled by the estimate.
QuadratureEstimate integrate_qmc(const MultiFn& f, int dim, double lo, double hi,
                                 const QmcConfig& cfg = {});

}  // namespace buresnum
