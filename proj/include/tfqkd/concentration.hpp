#ifndef TFQKD_CONCENTRATION_HPP
#define TFQKD_CONCENTRATION_HPP

#include <cstdint>

// Concentration-inequality toolbox: the inverse multiplicative Chernoff bound
// for the expectation of a sum of independent Bernoulli variables, and Kato's
// deviation bound for sums of dependent Bernoulli variables (a sharpened
// Azuma inequality), in its simple (a = 0) and optimized forms.

namespace tfqkd {

// Two-sided confidence interval for E[chi] given the observed count chi.
// Total failure probability epsilon (epsilon/2 per side).
struct ChernoffInterval {
    double expectation_lower = 0.0;
    double expectation_upper = 0.0;
    double epsilon = 0.0;
};

// Inverts the multiplicative Chernoff tail bounds. The two roots of
//   chi - E - chi ln(chi/E) = ln(epsilon/2)
// are expressed through the two real branches of Lambert W:
//   E_lower = -chi W0(-e^(t-1)),  E_upper = -chi W-1(-e^(t-1)),
// with t = ln(epsilon/2)/chi. For chi = 0 the equations degenerate and the
// standard zero-observation convention (0, ln(2/epsilon)) is returned, which
// keeps the per-side epsilon/2 budget. Throws std::domain_error unless
// epsilon is in (0,1).
ChernoffInterval chernoff_mean_bounds(std::uint64_t chi, double epsilon);

// Simple Kato deviation: Delta = sqrt(n ln(1/eps_a) / 2). Accepts eps_a in
// (0,1]; eps_a = 1 gives 0.
double kato_delta_simple(double n, double eps_a);

// Coefficients (a, b) of the optimized Kato bound, chosen to minimize the
// deviation at a predicted count lambda_pred while keeping the bound's
// failure probability equal to eps_a:
//   minimize [b + a (2 lambda_pred / n - 1)] sqrt(n)
//   s.t.     exp(-2 (b^2 - a^2) / (1 + 4a / (3 sqrt(n)))^2) = eps_a,  b >= |a|.
// Evaluated in closed form and verified against the constraint; if the closed
// form is numerically invalid (non-real intermediate, b < |a|, or constraint
// violated beyond 1e-9 relative) it falls back to a = 0 with
// b = sqrt(ln(1/eps_a)/2) and sets fell_back.
struct KatoCoefficients {
    double a = 0.0;
    double b = 0.0;
    double n = 0.0;        // number of trials
    double epsilon_a = 0.0;
    bool fell_back = false;
};

KatoCoefficients kato_coefficients(double n, double lambda_pred, double eps_a);

// Optimized deviation evaluated at an observed count:
//   Delta' = [b + a (2 lambda_obs / n - 1)] sqrt(n).
double kato_delta_optimized(const KatoCoefficients& coeffs, double lambda_obs);

// Failure probability of the (a, b) pair, exp(-2(b^2-a^2)/(1+4a/(3 sqrt n))^2).
// Exposed for tests and the construction-time verification.
double kato_constraint_probability(double a, double b, double n);

} // namespace tfqkd

#endif
