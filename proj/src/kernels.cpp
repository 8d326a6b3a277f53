#include "buresnum/kernels.hpp"
#include "buresnum/common.hpp"
#include "buresnum/eigenparam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace buresnum {

// ======================================================================
// means and kernels
// ======================================================================
double identric_mean(double x, double y) {
    if (x < 0.0 || y < 0.0) throw std::domain_error("identric_mean: negative argument");
    if (x == y) return x;
    if (x == 0.0) return y / std::exp(1.0);
    if (y == 0.0) return x / std::exp(1.0);
    double m = 0.5 * (x + y);
    double u = (x - y) / (x + y);
    if (std::fabs(u) < 1e-4) {
        // log I = log m - sum_{k>=1} u^(2k) / (2k (2k+1))
        double u2 = u * u, pw = u2, s = 0.0;
        for (int k = 1; k <= 7; ++k) {
            s += pw / static_cast<double>(2 * k * (2 * k + 1));
            pw *= u2;
        }
        return m * std::exp(-s);
    }
    return std::exp(-1.0 + (x * std::log(x) - y * std::log(y)) / (x - y));
}

double pair_product(std::span<const double> d, const KernelSpec& spec) {
    const std::size_t n = d.size();
    double prod = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double gap = std::fabs(d[i] - d[j]);
            double denom = (spec.mean == PairMean::arithmetic)
                               ? d[i] + d[j]
                               : 2.0 * identric_mean(d[i], d[j]);
            if (denom == 0.0) return 0.0;  // only at d_i = d_j = 0, where gap = 0 too
            // per-pair ratio keeps intermediate magnitudes near 1
            prod *= std::pow(gap, spec.beta) / denom;
        }
    }
    return prod;
}

double hall_kernel(std::span<const double> d, const KernelSpec& spec) {
    double root = 1.0;
    for (double v : d) {
        if (v <= 0.0) throw std::domain_error("hall_kernel: singular point, eigenvalue <= 0");
        root *= v;
    }
    return pair_product(d, spec) / std::sqrt(root);
}

double angle_integrand(std::span<const double> angles, const KernelSpec& spec) {
    std::vector<double> d(angles.size() + 1);
    angles_to_eigenvalues(angles, d);
    return pair_product(d, spec) * reduced_weight(angles);
}

double vn_entropy(std::span<const double> d) {
    double s = 0.0;
    for (double v : d)
        if (v > 0.0) s -= v * std::log(v);
    return s;
}

// ======================================================================
// closed-form helpers
// ======================================================================
void thetaphi_to_eigenvalues(double theta, double phi, std::span<double> d3) {
    if (d3.size() != 3) throw std::invalid_argument("thetaphi_to_eigenvalues: need 3 slots");
    double st = std::sin(0.5 * theta), ct = std::cos(0.5 * theta);
    double sf = std::sin(0.5 * phi), cf = std::cos(0.5 * phi);
    d3[0] = cf * cf * st * st;
    d3[1] = sf * sf * st * st;
    d3[2] = ct * ct;
}

namespace {

// common squared-polynomial factor of the n=3 closed forms
double upoly(double t, double f) {
    double s2 = std::sin(0.5 * t);
    double s4 = s2 * s2 * s2 * s2;
    double lin = (35.0 + 60.0 * std::cos(t) + 33.0 * std::cos(2.0 * t)) * std::cos(f) -
                 8.0 * std::cos(3.0 * f) * s4;
    return s2 * s2 * s2 * lin * lin;
}

double denom_poly(double t, double f) {
    double s2 = std::sin(0.5 * t);
    return 35.0 + 28.0 * std::cos(t) + std::cos(2.0 * t) -
           8.0 * std::cos(2.0 * f) * s2 * s2 * s2 * s2;
}

// r log(r) / (r-1), guarded near r = 1
double rlog_over(double r) {
    double del = r - 1.0;
    if (std::fabs(del) < 1e-5)
        return 1.0 + 0.5 * del - del * del / 6.0 + del * del * del / 12.0;
    return r * std::log(r) / del;
}

// log(s) / (s-1), guarded near s = 1
double log_over(double s) {
    double del = s - 1.0;
    if (std::fabs(del) < 1e-5)
        return 1.0 - 0.5 * del + del * del / 3.0 - del * del * del / 4.0;
    return std::log(s) / del;
}

}  // namespace

double haar_weight(int n, std::span<const double> angles) {
    if (n == 2) {
        if (angles.size() != 2) throw std::invalid_argument("haar_weight: n=2 takes 2 angles");
        return std::sin(angles[1]) / 8.0;
    }
    if (n == 3) {
        if (angles.size() != 6) throw std::invalid_argument("haar_weight: n=3 takes 6 angles");
        double k = angles[5];
        return std::sin(2.0 * angles[1]) * std::sin(2.0 * angles[4]) * std::sin(2.0 * k) *
               std::sin(k) * std::sin(k);
    }
    throw std::invalid_argument("haar_weight: only n = 2, 3 supported");
}

double haar_box_integral(int n) {
    if (n == 2) return 0.25 * kPi;
    if (n == 3) return 0.5 * kPi * kPi * kPi;
    throw std::invalid_argument("haar_box_integral: only n = 2, 3 supported");
}

// ======================================================================
// arithmetic-mean family
// ======================================================================
double bures_density_n2(double theta, std::span<const double> haar2) {
    if (haar2.size() != 2) throw std::invalid_argument("bures_density_n2: need 2 Haar angles");
    double c = std::cos(theta);
    return c * c * std::sin(haar2[1]) / (kPi * kPi);
}

double bures_marginal_theta_n2(double theta) {
    double c = std::cos(theta);
    return 4.0 / kPi * c * c;
}

double bures_marginal_thetaphi_n3(double theta, double phi) {
    double den = denom_poly(theta, phi);
    if (den == 0.0) return 0.0;  // box corners: numerator vanishes faster
    return 35.0 * upoly(theta, phi) / (256.0 * kPi * den);
}

double bures_density_n3(double theta, double phi, std::span<const double> haar6) {
    double den = denom_poly(theta, phi);
    if (den == 0.0) return 0.0;
    double p4 = kPi * kPi * kPi * kPi;
    return 35.0 * upoly(theta, phi) / (128.0 * p4 * den) * haar_weight(3, haar6);
}

double bures_marginal_theta_n3(double theta) {
    double t = theta;
    double poly = -1533.0 + 2816.0 * std::cos(0.5 * t) - 1988.0 * std::cos(t) +
                  1152.0 * std::cos(1.5 * t) - 447.0 * std::cos(2.0 * t) +
                  128.0 * std::cos(2.5 * t);
    double s = std::sin(0.5 * t);
    return 35.0 / 256.0 * poly * s * s * s;
}

namespace {

// Chebyshev fit of the phi-marginal on [0, 0.75]: the direct expression
// loses all precision there to cancellation among O(1e7) terms.
constexpr double kPhiCheb[] = {
    0.9757989735865874916595,
    -0.1950397958770614574177,
    0.05402992733842596024539,
    0.01266568609704897697872,
    -0.01418495832405591810568,
    0.002657126850419090792428,
    -0.0001105898372335607871917,
    -5.466424764316665767876e-6,
    -8.546927176546309430485e-7,
    1.596202782136296092669e-7,
    6.685025147064322318251e-10,
    -9.052887911530893495434e-10,
    4.13380465881112499068e-11,
    -3.07358265601307705554e-12,
    5.795941132218408899862e-13,
    -6.130201736583648172687e-14,
    4.764393207217650401731e-15,
    -1.79635600936531938026e-16,
};
constexpr int kPhiChebCount = static_cast<int>(sizeof(kPhiCheb) / sizeof(kPhiCheb[0]));
constexpr double kPhiChebEdge = 0.75;

double phi_marg_cheb(double phi) {
    double u = phi / (0.5 * kPhiChebEdge) - 1.0;
    double b1 = 0.0, b2 = 0.0;
    for (int k = kPhiChebCount - 1; k >= 1; --k) {
        double t = 2.0 * u * b1 - b2 + kPhiCheb[k];
        b2 = b1;
        b1 = t;
    }
    return u * b1 - b2 + 0.5 * kPhiCheb[0];
}

double phi_marg_direct(double f) {
    double t1 = 110100480.0 * (0.5 * (kPi - f)) * std::pow(std::cos(0.5 * f), 12);
    double t2 = 26880.0 * (792.0 * (2.0 * kPi - f) * std::cos(f) +
                           8.0 * kPi * (55.0 * std::cos(3.0 * f) + 3.0 * std::cos(5.0 * f)) +
                           f * (495.0 * std::cos(2.0 * f) - 220.0 * std::cos(3.0 * f) +
                                66.0 * std::cos(4.0 * f) - 12.0 * std::cos(5.0 * f) +
                                std::cos(6.0 * f)));
    double t3 = 16885656.0 * std::sin(2.0 * f) + 5069937.0 * std::sin(4.0 * f) +
                167012.0 * std::sin(6.0 * f);
    double t4 = 3.0 * (4139520.0 * f + 124.0 * std::sin(8.0 * f) - 4.0 * std::sin(10.0 * f) +
                       std::sin(12.0 * f));
    double s = std::sin(f);
    double csc8 = 1.0 / std::pow(s, 8);
    return (std::cos(f) / s) * csc8 * (t1 - t2 + t3 - t4) / (768.0 * kPi);
}

}  // namespace

double bures_marginal_phi_n3(double phi) {
    // exactly symmetric under phi <-> pi - phi (eigenvalue relabeling)
    if (phi > 0.5 * kPi) phi = kPi - phi;
    if (phi < 0.0) phi = 0.0;
    if (phi <= kPhiChebEdge) return phi_marg_cheb(phi);
    return phi_marg_direct(phi);
}

// ======================================================================
// identric-mean family
// ======================================================================
double quasi_theta_part(double theta) {
    if (theta <= 1e-6) return 0.5;  // limit value; next correction is O(t^2 log t)
    if (theta >= 0.5 * kPi) return 0.0;
    double tn = std::tan(0.5 * theta);
    double g = std::exp(std::log(tn) / std::cos(theta));
    return g * std::cos(theta) / std::tan(theta);
}

double quasi_marginal_theta_n2(double theta) { return quasi_theta_part(theta) / kQuasiThetaNorm; }

double quasi_density_n2(double theta, std::span<const double> haar2) {
    if (haar2.size() != 2) throw std::invalid_argument("quasi_density_n2: need 2 Haar angles");
    return kQuasi2Const * quasi_theta_part(theta) * std::sin(haar2[1]);
}

double quasi_shape_n3(double theta, double phi) {
    constexpr double eps = 1e-12;
    double t = std::clamp(theta, eps, kPi - eps);
    double f = std::clamp(phi, eps, kPi - eps);
    double u = upoly(t, f);
    if (u == 0.0) return 0.0;

    double d[3];
    thetaphi_to_eigenvalues(t, f, d);

    // exponent terms rewritten through eigenvalue ratios; each piece has a
    // finite limit on its coincidence locus
    double l1 = -rlog_over(d[0] / d[2]);
    double s = d[1] / d[2];
    double l2 = std::log1p(s - 1.0) - log_over(s);

    double c = std::cos(f);
    double logtan = std::log(std::tan(0.5 * f));
    double sec_term = (std::fabs(c) < 1e-6) ? (-1.0 - c * c / 3.0) : logtan / c;

    double g = logtan + sec_term - 4.0 * std::log(std::sin(0.5 * t)) -
               6.0 * std::log(std::sin(0.5 * f)) + l1 + l2;
    return u * std::exp(g);
}

double quasi_shape_n3_pair_route(double theta, double phi) {
    double d[3];
    thetaphi_to_eigenvalues(theta, phi, d);
    KernelSpec spec{3, PairMean::identric, 2};
    return kQuasi3ShapeOverPair * pair_product(std::span<const double>(d, 3), spec) *
           std::sin(0.5 * theta);
}

double quasi_marginal_thetaphi_n3(double theta, double phi) {
    return kQuasi3Const * haar_box_integral(3) * quasi_shape_n3(theta, phi);
}

double quasi_density_n3(double theta, double phi, std::span<const double> haar6) {
    return kQuasi3Const * quasi_shape_n3(theta, phi) * haar_weight(3, haar6);
}

// ======================================================================
// redundancy
// ======================================================================
double redundancy_pointwise(double theta, double m, double log_prior) {
    double qp = quasi_theta_part(theta);
    if (qp <= 0.0) return -std::numeric_limits<double>::infinity();
    return 1.5 * std::log(m) + 0.5 * std::log(2.0 / kPi) - 0.5 + std::log(qp) - log_prior;
}

}  // namespace buresnum
