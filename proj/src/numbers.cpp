#include "buresnum/numbers.hpp"
#include "buresnum/common.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace buresnum {

// ======================================================================
// Bernoulli numbers via the defining recurrence
//   sum_{j=0}^{m} C(m+1, j) B_j = 0   (m >= 1),  B_0 = 1
// ======================================================================
BigRational bernoulli(unsigned index) {
    static std::vector<BigRational> memo{BigRational(1)};
    while (memo.size() <= index) {
        unsigned m = static_cast<unsigned>(memo.size());
        BigRational acc(0);
        for (unsigned j = 0; j < m; ++j) {
            BigInt binom;
            mpz_bin_uiui(binom.get_mpz_t(), m + 1, j);
            acc += BigRational(binom) * memo[j];
        }
        acc /= BigRational(m + 1);
        memo.push_back(-acc);
    }
    return memo[index];
}

std::vector<BigInt> partial_sum_denominators(unsigned count) {
    std::vector<BigInt> out;
    out.reserve(count);
    BigRational sum(0);
    for (unsigned j = 0; j < count; ++j) {
        sum += bernoulli(2 * j);
        out.push_back(sum.get_den());
    }
    return out;
}

// ======================================================================
// 64-bit primality and factorization helpers
// ======================================================================
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

bool miller_rabin_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // this base set is a deterministic witness set for all n < 2^64
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

u64 gcd_u64(u64 a, u64 b) {
    while (b) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Brent's cycle variant of Pollard's rho; deterministic restart schedule.
u64 pollard_rho(u64 n) {
    if (n % 2 == 0) return 2;
    SplitMix64 rng(n ^ 0x9e3779b97f4a7c15ull);
    for (;;) {
        u64 y = rng.next() % (n - 2) + 2;
        u64 c = rng.next() % (n - 1) + 1;
        u64 m = 128, g = 1, r = 1, q = 1, x = 0, ys = 0;
        while (g == 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = (mulmod(y, y, n) + c) % n;
            for (u64 k = 0; k < r && g == 1; k += m) {
                ys = y;
                u64 lim = std::min(m, r - k);
                for (u64 i = 0; i < lim; ++i) {
                    y = (mulmod(y, y, n) + c) % n;
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = gcd_u64(q, n);
            }
            r <<= 1;
        }
        if (g == n) {
            g = 1;
            while (g == 1) {
                ys = (mulmod(ys, ys, n) + c) % n;
                g = gcd_u64(x > ys ? x - ys : ys - x, n);
            }
        }
        if (g != n) return g;
    }
}

void factor_u64(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (miller_rabin_u64(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_rho(n);
    factor_u64(d, out);
    factor_u64(n / d, out);
}

constexpr unsigned kTrialLimit = 10000;

}  // namespace

bool is_probable_prime(const BigInt& n) {
    if (n < 2) return false;
    if (mpz_fits_ulong_p(n.get_mpz_t()))
        return miller_rabin_u64(mpz_get_ui(n.get_mpz_t()));
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

Factorization factorize(const BigInt& n) {
    if (n < 1) throw std::invalid_argument("factorize: input must be positive");
    Factorization f;
    if (n == 1) return f;

    BigInt rem = n;
    std::vector<BigInt> primes;

    // trial division by small primes
    for (unsigned p = 2; p <= kTrialLimit; p = (p == 2 ? 3 : p + 2)) {
        if (BigInt(p) * p > rem) break;
        while (mpz_divisible_ui_p(rem.get_mpz_t(), p)) {
            primes.emplace_back(p);
            mpz_divexact_ui(rem.get_mpz_t(), rem.get_mpz_t(), p);
        }
    }

    if (rem > 1) {
        if (is_probable_prime(rem)) {
            primes.push_back(rem);
            rem = 1;
        } else if (mpz_fits_ulong_p(rem.get_mpz_t())) {
            std::vector<u64> ps;
            factor_u64(mpz_get_ui(rem.get_mpz_t()), ps);
            for (u64 p : ps) primes.emplace_back(p);
            rem = 1;
        } else {
            f.complete = false;
            f.remaining = rem;
        }
    }

    std::sort(primes.begin(), primes.end());
    for (const BigInt& p : primes) {
        if (!f.factors.empty() && f.factors.back().prime == p)
            ++f.factors.back().exponent;
        else
            f.factors.push_back(Factor{p, 1});
    }
    return f;
}

// ======================================================================
// recognition
// ======================================================================
std::vector<SequenceMatch> match_against_sequence(const BigInt& value,
                                                  const std::vector<BigInt>& seq,
                                                  unsigned max_multiplier) {
    std::vector<SequenceMatch> out;
    if (value < 1) return out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const BigInt& e = seq[i];
        if (e < 1) continue;
        if (mpz_divisible_p(value.get_mpz_t(), e.get_mpz_t())) {
            BigInt m = value / e;
            if (m <= max_multiplier)
                out.push_back({static_cast<unsigned>(i + 1), BigRational(m)});
        }
        if (value < e && mpz_divisible_p(e.get_mpz_t(), value.get_mpz_t())) {
            BigInt m = e / value;
            if (m >= 2 && m <= max_multiplier)
                out.push_back({static_cast<unsigned>(i + 1), BigRational(1) / BigRational(m)});
        }
    }
    return out;
}

RecognitionReport recognize_pi_rational(double x, int k_min, int k_max, double max_residual,
                                        const std::vector<BigInt>* sequence,
                                        unsigned max_multiplier) {
    RecognitionReport rep;
    rep.input = x;
    if (!(x > 0.0) || !std::isfinite(x)) return rep;

    auto residual_of = [](const BigInt& cand, double t) {
        double c = mpz_get_d(cand.get_mpz_t());
        return std::fabs(t - c) / c;
    };

    for (int k = k_min; k <= k_max; ++k) {
        double t = x * std::pow(kPi, k);
        if (!(t >= 0.5)) continue;

        // bare nearest integer
        BigInt nearest;
        mpz_set_d(nearest.get_mpz_t(), std::nearbyint(t));
        bool have_best = false;
        BigInt best_int;
        double best_res = 0.0;
        bool best_seq = false;
        if (nearest >= 1) {
            best_int = nearest;
            best_res = residual_of(nearest, t);
            have_best = true;
        }

        // sequence-derived candidates: m*entry and entry/m.  The simplest
        // multiplier wins; residual only breaks exact cost ties.
        BigInt best_cost = 0;
        if (sequence) {
            BigInt best_seq_int;
            double best_seq_res = 2.0 * max_residual;
            auto consider = [&](const BigInt& cand, unsigned cost) {
                double r = residual_of(cand, t);
                if (r > max_residual) return;
                if (best_seq_int < 1 || BigInt(cost) < best_cost ||
                    (BigInt(cost) == best_cost && r < best_seq_res)) {
                    best_cost = cost;
                    best_seq_res = r;
                    best_seq_int = cand;
                }
            };
            for (const BigInt& e : *sequence) {
                if (e < 1) continue;
                double ed = mpz_get_d(e.get_mpz_t());
                for (unsigned m = 1; m <= max_multiplier; ++m) {
                    double cd = ed * m;
                    if (std::fabs(t - cd) / cd <= max_residual) consider(e * m, m);
                    if (m >= 2 && mpz_divisible_ui_p(e.get_mpz_t(), m)) {
                        double dd = ed / m;
                        if (dd >= 1.0 && std::fabs(t - dd) / dd <= max_residual)
                            consider(e / m, m);
                    }
                }
            }
            if (best_seq_int >= 1 && best_seq_res <= max_residual) {
                best_int = best_seq_int;
                best_res = best_seq_res;
                best_seq = true;
                have_best = true;
            }
        }

        if (!have_best || best_res > max_residual) continue;

        PiPowerCandidate c;
        c.pi_power = k;
        c.integer = best_int;
        c.residual = best_res;
        c.sequence_backed = best_seq;
        c.structure_cost = best_seq ? best_cost : BigInt(0);
        if (sequence) c.matches = match_against_sequence(best_int, *sequence, max_multiplier);
        rep.all_candidates.push_back(std::move(c));
    }

    if (rep.all_candidates.empty()) return rep;
    rep.recognized = true;
    rep.ambiguous = rep.all_candidates.size() > 1;
    // structure first, then simplicity of the tie, then residual
    const PiPowerCandidate* best = &rep.all_candidates.front();
    for (const PiPowerCandidate& c : rep.all_candidates) {
        if (c.sequence_backed != best->sequence_backed) {
            if (c.sequence_backed) best = &c;
            continue;
        }
        if (c.sequence_backed) {
            if (c.structure_cost < best->structure_cost ||
                (c.structure_cost == best->structure_cost && c.residual < best->residual))
                best = &c;
        } else if (c.residual < best->residual) {
            best = &c;
        }
    }
    rep.best = *best;
    rep.factorization = factorize(rep.best.integer);
    return rep;
}

BigRational best_rational_approx(double x, const BigInt& max_den) {
    if (!std::isfinite(x)) throw std::invalid_argument("best_rational_approx: non-finite input");
    if (max_den < 1) throw std::invalid_argument("best_rational_approx: max_den must be >= 1");
    BigRational target(x);  // exact binary value
    target.canonicalize();
    if (target.get_den() <= max_den) return target;

    BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    BigInt n = target.get_num(), d = target.get_den();
    for (;;) {
        BigInt a;  // floor division; numerator may be negative
        mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
        BigInt q2 = q0 + a * q1;
        if (q2 > max_den) break;
        BigInt p2 = p0 + a * p1;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        BigInt r = n - a * d;
        n = d;
        d = r;
        if (d == 0) return BigRational(p1, q1);
    }
    BigInt k = (max_den - q0) / q1;
    BigRational semi(p0 + k * p1, q0 + k * q1);
    semi.canonicalize();
    BigRational conv(p1, q1);
    conv.canonicalize();
    BigRational e1 = semi - target, e2 = conv - target;
    if (abs(e2) <= abs(e1)) return conv;
    return semi;
}

}  // namespace buresnum
