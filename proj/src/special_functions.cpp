#include "tfqkd/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tfqkd {

namespace {

constexpr double kInvE = 0.36787944117144233; // 1/e

// Series around the branch point x = -1/e in p = +-sqrt(2(e*x + 1)).
// Error is O(p^5); used alone when |p| is tiny, as a Halley seed otherwise.
double branch_series(double p) {
    const double p2 = p * p;
    return -1.0 + p - p2 / 3.0 + 11.0 / 72.0 * p * p2 - 43.0 / 540.0 * p2 * p2;
}

// Halley iteration on f(w) = w e^w - x, safeguarded against leaving the
// branch domain. Converges in a handful of steps from the seeds below.
double halley(double w, double x, double wmin, double wmax) {
    for (int it = 0; it < 60; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double fp = ew * (w + 1.0);
        const double denom = fp - f * (w + 2.0) / (2.0 * (w + 1.0));
        if (denom == 0.0 || !std::isfinite(denom)) break;
        double step = f / denom;
        double wn = w - step;
        if (wn < wmin) wn = 0.5 * (w + wmin);
        if (wn > wmax) wn = 0.5 * (w + wmax);
        if (std::abs(wn - w) <= 1e-16 * (1.0 + std::abs(wn))) return wn;
        w = wn;
    }
    return w;
}

double w0_impl(double x, double p_hint) {
    if (x == 0.0) return 0.0;
    double w;
    if (p_hint >= 0.0) {            // near branch point, p precomputed
        if (p_hint < 1e-3) return branch_series(p_hint);
        w = branch_series(p_hint);
    } else if (x < 0.0) {
        const double p = std::sqrt(2.0 * (1.0 + x / kInvE));
        if (p < 1e-3) return branch_series(p);
        w = (x < -0.25) ? branch_series(p) : x * (1.0 - x);
    } else if (x < 3.0) {
        w = x / (1.0 + x);          // crude but inside basin
    } else {
        const double l1 = std::log(x), l2 = std::log(std::log(x));
        w = l1 - l2 + l2 / l1;
    }
    return halley(w, x, -1.0, std::numeric_limits<double>::infinity());
}

double wm1_impl(double x, double p_hint) {
    double w;
    if (p_hint >= 0.0) {
        if (p_hint < 1e-3) return branch_series(-p_hint);
        w = branch_series(-p_hint);
    } else {
        const double p = std::sqrt(2.0 * (1.0 + x / kInvE));
        if (p < 1e-3) return branch_series(-p);
        if (x > -0.25) {
            // asymptotic seed for x -> 0-
            const double l1 = std::log(-x), l2 = std::log(-l1);
            w = l1 - l2 + l2 / l1 + l2 * (l2 - 2.0) / (2.0 * l1 * l1);
        } else {
            w = branch_series(-p);
        }
    }
    return halley(w, x, -std::numeric_limits<double>::infinity(), -1.0);
}

} // namespace

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("binary_entropy: argument outside [0,1]");
    if (x > 0.5) x = 1.0 - x; // h(x) = h(1-x)
    if (x == 0.0) return 0.0;
    const double ln2 = 0.6931471805599453;
    return (-x * std::log(x) - (1.0 - x) * std::log1p(-x)) / ln2;
}

double lambert_w0(double x) {
    if (x < -kInvE) {
        if (x > -kInvE * (1.0 + 4e-16)) x = -kInvE; // rounding slop at the branch point
        else throw std::domain_error("lambert_w0: argument below -1/e");
    }
    return w0_impl(x, -1.0);
}

double lambert_wm1(double x) {
    if (x >= 0.0) throw std::domain_error("lambert_wm1: argument must be negative");
    if (x < -kInvE) {
        if (x > -kInvE * (1.0 + 4e-16)) x = -kInvE;
        else throw std::domain_error("lambert_wm1: argument below -1/e");
    }
    return wm1_impl(x, -1.0);
}

double lambert_w0_branchpoint(double t) {
    if (t > 0.0) throw std::domain_error("lambert_w0_branchpoint: t must be <= 0");
    // x = -exp(t-1);  2(1 + e x) = -2 expm1(t), computed without cancellation
    const double p = std::sqrt(-2.0 * std::expm1(t));
    const double x = -std::exp(t - 1.0);
    return w0_impl(x, p);
}

double lambert_wm1_branchpoint(double t) {
    if (t > 0.0) throw std::domain_error("lambert_wm1_branchpoint: t must be <= 0");
    const double p = std::sqrt(-2.0 * std::expm1(t));
    const double x = -std::exp(t - 1.0);
    return wm1_impl(x, p);
}

double bessel_i0(double z) {
    z = std::abs(z); // even function
    if (z > kBesselI0Overflow)
        throw std::range_error("bessel_i0: argument exceeds overflow threshold");
    if (z <= 20.0) {
        // I0(z) = sum_k (z^2/4)^k / (k!)^2; all terms positive
        const double q = 0.25 * z * z;
        double term = 1.0;
        NeumaierSum sum;
        sum.add(1.0);
        for (int k = 1; k < 200; ++k) {
            term *= q / (double(k) * double(k));
            sum.add(term);
            if (term < 1e-17 * sum.value()) break;
        }
        return sum.value();
    }
    // asymptotic expansion: I0(z) ~ e^z / sqrt(2 pi z) * sum_k a_k,
    // a_k = prod_j ((2j-1)^2) / (k! (8z)^k); truncated at the smallest term
    const double inv8z = 1.0 / (8.0 * z);
    double term = 1.0;
    NeumaierSum sum;
    sum.add(1.0);
    for (int k = 1; k < 40; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = term * odd * odd * inv8z / double(k);
        if (std::abs(next) >= std::abs(term)) break; // divergence onset
        term = next;
        sum.add(term);
        if (std::abs(term) < 1e-17 * sum.value()) break;
    }
    const double two_pi = 6.283185307179586;
    return std::exp(z) / std::sqrt(two_pi * z) * sum.value();
}

} // namespace tfqkd
