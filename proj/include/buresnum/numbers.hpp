#pragma once
// Exact integer/rational machinery: Bernoulli numbers, the partial-sum
// denominator sequence they generate, integer factorization, and
// recognition of floating-point constants as N / pi^k with N tied back to
// the sequence.

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace buresnum {

using BigInt = mpz_class;
using BigRational = mpq_class;

// Exact Bernoulli number B_index with the B_1 = -1/2 convention.
BigRational bernoulli(unsigned index);

// 1-based sequence: entry j is the (positive, canonical) denominator of
// sum_{i=0}^{j-1} B_{2i}.  Starts 1, 6, 15, 70, 105, ...
std::vector<BigInt> partial_sum_denominators(unsigned count);

// ----------------------------------------------------------------------
// factorization
// ----------------------------------------------------------------------
struct Factor {
    BigInt prime;
    unsigned exponent = 0;
};
struct Factorization {
    std::vector<Factor> factors;  // ascending primes
    bool complete = true;
    BigInt remaining = 1;  // composite cofactor when incomplete
};
// Full factorization for inputs whose hard part fits in 64 bits (trial
// division, then deterministic Miller-Rabin + Brent's rho).  Larger
// leftovers are returned unfactored with complete = false.
Factorization factorize(const BigInt& n);

bool is_probable_prime(const BigInt& n);  // deterministic below 2^64

// ----------------------------------------------------------------------
// recognition
// ----------------------------------------------------------------------
struct SequenceMatch {
    unsigned index = 0;       // 1-based entry index
    BigRational multiplier;   // value = multiplier * entry  (exact)
};
// Exact relations value = m*entry or entry = m*value with m <= max_multiplier.
std::vector<SequenceMatch> match_against_sequence(const BigInt& value,
                                                  const std::vector<BigInt>& seq,
                                                  unsigned max_multiplier = 128);

struct PiPowerCandidate {
    int pi_power = 0;
    BigInt integer;
    double residual = 0.0;    // |x*pi^k - N| / N
    bool sequence_backed = false;
    BigInt structure_cost = 0;  // num*den of the simplest sequence tie (0 = bare)
    std::vector<SequenceMatch> matches;
};
struct RecognitionReport {
    double input = 0.0;
    bool recognized = false;
    bool ambiguous = false;                        // more than one power passed
    PiPowerCandidate best;                         // valid when recognized
    std::vector<PiPowerCandidate> all_candidates;  // every power that passed
    Factorization factorization;                   // of best.integer
};
// Try x = N / pi^k for k in [k_min, k_max].  A candidate passes when its
// relative residual is at most max_residual.  When a sequence is supplied,
// integers expressible as m*entry or entry/m (m <= max_multiplier) are
// preferred over bare nearest integers: near large magnitudes every real
// is close to SOME integer, so structure, not closeness, has to decide.
// Among sequence-backed candidates the SIMPLEST tie wins (smallest
// multiplier), not the smallest residual: once a residual is inside the
// tolerance it carries no further evidence, while a coincidental product
// needs a large multiplier to land close.  All passing candidates are
// reported, so a caller holding the expected integer can still check
// consistency under ambiguity.
RecognitionReport recognize_pi_rational(double x, int k_min, int k_max, double max_residual,
                                        const std::vector<BigInt>* sequence = nullptr,
                                        unsigned max_multiplier = 128);

// Best rational approximation p/q to x with 1 <= q <= max_den, by walking
// the continued-fraction convergents of x's exact binary value and
// comparing the last convergent against the final semiconvergent.
BigRational best_rational_approx(double x, const BigInt& max_den);

}  // namespace buresnum
