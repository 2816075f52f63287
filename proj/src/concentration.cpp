#include "tfqkd/concentration.hpp"

#include "tfqkd/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace tfqkd {

ChernoffInterval chernoff_mean_bounds(std::uint64_t chi, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("chernoff_mean_bounds: epsilon outside (0,1)");
    ChernoffInterval out;
    out.epsilon = epsilon;
    if (chi == 0) {
        out.expectation_lower = 0.0;
        out.expectation_upper = std::log(2.0 / epsilon);
        return out;
    }
    const double c = double(chi);
    // t - 1 is the exponent of the W argument; t -> 0- for large chi, which
    // is the branch point, so use the cancellation-free entry points.
    const double t = std::log(epsilon / 2.0) / c;
    out.expectation_lower = -c * lambert_w0_branchpoint(t);
    out.expectation_upper = -c * lambert_wm1_branchpoint(t);
    return out;
}

double kato_delta_simple(double n, double eps_a) {
    if (!(eps_a > 0.0 && eps_a <= 1.0))
        throw std::domain_error("kato_delta_simple: eps_a outside (0,1]");
    if (!(n >= 0.0))
        throw std::domain_error("kato_delta_simple: n must be nonnegative");
    return std::sqrt(0.5 * n * std::log(1.0 / eps_a));
}

double kato_constraint_probability(double a, double b, double n) {
    const double d = 1.0 + 4.0 * a / (3.0 * std::sqrt(n));
    return std::exp(-2.0 * (b * b - a * a) / (d * d));
}

KatoCoefficients kato_coefficients(double n, double lambda_pred, double eps_a) {
    if (!(eps_a > 0.0 && eps_a < 1.0))
        throw std::domain_error("kato_coefficients: eps_a outside (0,1)");
    if (!(n > 0.0))
        throw std::domain_error("kato_coefficients: n must be positive");
    if (!(lambda_pred >= 0.0 && lambda_pred <= n))
        throw std::domain_error("kato_coefficients: lambda_pred outside [0,n]");

    KatoCoefficients out;
    out.n = n;
    out.epsilon_a = eps_a;

    const double X = lambda_pred;
    const double L = std::log(eps_a); // negative
    const double sn = std::sqrt(n);

    // Closed-form stationary point of the constrained minimization.
    const double S = 9.0 * X * (n - X) - 2.0 * n * L;
    const double D = 4.0 * (9.0 * n - 8.0 * L) * S;
    const double rad = -L * n * n * S;
    bool ok = S > 0.0 && D != 0.0 && rad >= 0.0;
    double a = 0.0, b = 0.0;
    if (ok) {
        const double num = 3.0 * (72.0 * sn * X * (n - X) * L -
                                  16.0 * n * sn * L * L +
                                  9.0 * std::sqrt(2.0) * (n - 2.0 * X) * std::sqrt(rad));
        a = num / D;
        const double b2 = 18.0 * a * a * n - (16.0 * a * a + 24.0 * a * sn + 9.0 * n) * L;
        ok = b2 >= 0.0 && std::isfinite(a);
        if (ok) {
            b = std::sqrt(b2) / (3.0 * std::sqrt(2.0 * n));
            ok = std::isfinite(b) && b >= std::abs(a) * (1.0 - 1e-12);
        }
        if (ok) {
            const double p = kato_constraint_probability(a, b, n);
            ok = std::isfinite(p) && std::abs(p - eps_a) <= 1e-9 * eps_a;
        }
    }
    if (!ok) {
        out.a = 0.0;
        out.b = std::sqrt(-0.5 * L);
        out.fell_back = true;
        return out;
    }
    out.a = a;
    out.b = b;
    return out;
}

double kato_delta_optimized(const KatoCoefficients& coeffs, double lambda_obs) {
    if (!(lambda_obs >= 0.0 && lambda_obs <= coeffs.n))
        throw std::domain_error("kato_delta_optimized: lambda_obs outside [0,n]");
    return (coeffs.b + coeffs.a * (2.0 * lambda_obs / coeffs.n - 1.0)) * std::sqrt(coeffs.n);
}

} // namespace tfqkd
