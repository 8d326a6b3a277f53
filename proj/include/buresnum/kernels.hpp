#pragma once
// Eigenvalue-space integrand kernels and the closed-form densities they
// normalize.  Two denominator families share one structure: the pair term
// is |d_i - d_j|^beta over either the arithmetic mean sum (d_i + d_j) or
// twice the identric mean of the pair.

#include <span>

namespace buresnum {

enum class PairMean { arithmetic, identric };

struct KernelSpec {
    int n = 2;
    PairMean mean = PairMean::arithmetic;
    int beta = 2;  // exponent on each pair gap |d_i - d_j|
};

// identric mean I(x,y) = e^-1 (x^x / y^y)^(1/(x-y)), extended by limits to
// x == y and to the axes; series-stabilized near the diagonal
double identric_mean(double x, double y);

// prod_{i<j} |d_i-d_j|^beta / denom(d_i,d_j); finite on the closed simplex
double pair_product(std::span<const double> d, const KernelSpec& spec);

// pair_product times (prod_i d_i)^(-1/2); throws std::domain_error at a
// zero eigenvalue (singular point of the square-root prefactor)
double hall_kernel(std::span<const double> d, const KernelSpec& spec);

// angle-space integrand: pair_product(d(angles)) * reduced_weight(angles).
// The square-root prefactor is inside reduced_weight, cancelled exactly.
double angle_integrand(std::span<const double> angles, const KernelSpec& spec);

// von Neumann entropy -sum d_i log d_i (0 log 0 := 0)
double vn_entropy(std::span<const double> d);

// ----------------------------------------------------------------------
// two-angle layout used by the n = 3 closed forms:
//   d_1 = cos^2(phi/2) sin^2(theta/2),  d_2 = sin^2(phi/2) sin^2(theta/2),
//   d_3 = cos^2(theta/2)
// (a relabeling of the generic chain layout; kernels are symmetric)
// ----------------------------------------------------------------------
void thetaphi_to_eigenvalues(double theta, double phi, std::span<double> d3);

// ----------------------------------------------------------------------
// Haar (unitary-conjugation) factor.  Documented boxes:
//   n = 2: angles (alpha, beta), both in [0,pi];        weight sin(beta)/8
//   n = 3: angles (a0..a5), a0,a2,a3 in [0,pi], a1,a4,a5 in [0,pi/2];
//          weight sin(2 a1) sin(2 a4) sin(2 a5) sin^2(a5)
// ----------------------------------------------------------------------
double haar_weight(int n, std::span<const double> angles);
double haar_box_integral(int n);  // exact: pi/4 (n=2), pi^3/2 (n=3)

// ----------------------------------------------------------------------
// arithmetic-mean family, closed forms
// ----------------------------------------------------------------------
// full n=2 density over (theta, alpha, beta) in [0,pi]^3: cos^2(t) sin(b)/pi^2
double bures_density_n2(double theta, std::span<const double> haar2);
// ordered eigenvalue-angle marginal on [0,pi/2]: (4/pi) cos^2(theta)
double bures_marginal_theta_n2(double theta);

// full n=3 density over (theta, phi) in [0,pi]^2 and the 6-angle Haar box
double bures_density_n3(double theta, double phi, std::span<const double> haar6);
// bivariate marginal (integrates to 1 over [0,pi]^2)
double bures_marginal_thetaphi_n3(double theta, double phi);
// univariate marginals (each integrates to 1 over [0,pi])
double bures_marginal_theta_n3(double theta);
double bures_marginal_phi_n3(double phi);

// ----------------------------------------------------------------------
// identric-mean family, closed forms
// ----------------------------------------------------------------------
// eigenvalue-angle factor tan(t/2)^sec(t) cos(t) cot(t), guarded limits
double quasi_theta_part(double theta);
// normalized marginal on the ordered range [0,pi/2]
double quasi_marginal_theta_n2(double theta);
// full n=2 density over theta in [0,pi/2], alpha in [0,2pi], beta in [0,pi]
double quasi_density_n2(double theta, std::span<const double> haar2);

// bivariate closed-form shape on (theta,phi) in [0,pi]^2 (unnormalized);
// evaluated by log-assembly so the removable singularities stay finite
double quasi_shape_n3(double theta, double phi);
// same quantity through the kernel route: pair_product * sin(theta/2),
// scaled by the exact factor 2^17 e^-3 relating the two writings
double quasi_shape_n3_pair_route(double theta, double phi);
// normalized bivariate marginal and full density
double quasi_marginal_thetaphi_n3(double theta, double phi);
double quasi_density_n3(double theta, double phi, std::span<const double> haar6);

// ----------------------------------------------------------------------
// minimax-redundancy pointwise value at sample-size parameter m for a
// prior with log-density log_prior at theta (ordered n=2 coordinates)
// ----------------------------------------------------------------------
double redundancy_pointwise(double theta, double m, double log_prior);

// ----------------------------------------------------------------------
// frozen constants (re-derived by the test suite)
// ----------------------------------------------------------------------
// integral of quasi_theta_part over [0,pi/2]
inline constexpr double kQuasiThetaNorm = 0.3517529610017936499342;
// 1/(4 pi * kQuasiThetaNorm): the n=2 identric-family density constant
inline constexpr double kQuasi2Const = 0.2262311348263018272345;
// full-box integral of the n=2 identric pair form (equals 2 e Z)
inline constexpr double kQuasi2PairIntegral = 1.912327363995677749945;
// full-box integral of the n=3 identric pair form times sin(theta/2)
inline constexpr double kQuasi3PairIntegral = 0.15578507773847514;
// quasi_shape_n3 / (pair form * sin(theta/2)) = 2^17 e^-3
inline constexpr double kQuasi3ShapeOverPair = 6525.690625112662734188;
// normalization constant of the displayed n=3 shape against the Haar box
inline constexpr double kQuasi3Const = 6.344947626964267314146e-5;

}  // namespace buresnum
