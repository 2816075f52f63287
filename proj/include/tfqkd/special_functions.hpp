#ifndef TFQKD_SPECIAL_FUNCTIONS_HPP
#define TFQKD_SPECIAL_FUNCTIONS_HPP

// Scalar special functions used throughout the key-rate engine. All functions
// are pure and thread-safe.

namespace tfqkd {

// Shannon binary entropy h(x) = -x log2(x) - (1-x) log2(1-x), with the
// continuous extension h(0) = h(1) = 0. Throws std::domain_error outside [0,1].
double binary_entropy(double x);

// Principal branch W0 of the Lambert W function (w >= -1), defined on
// x >= -1/e. Solves w * exp(w) = x with relative residual <= 1e-12.
// Throws std::domain_error for x < -1/e (beyond a small rounding slop).
double lambert_w0(double x);

// Secondary real branch W-1 (w <= -1), defined on -1/e <= x < 0.
double lambert_wm1(double x);

// Evaluates W0(-exp(t - 1)) for t <= 0, i.e. the branch point is t = 0.
// Computing the argument first would lose precision near t = 0; this entry
// point keeps the branch-point expansion accurate. Same residual contract.
double lambert_w0_branchpoint(double t);

// Same for W-1: evaluates W-1(-exp(t - 1)), t <= 0.
double lambert_wm1_branchpoint(double t);

// Modified Bessel function of the first kind, order zero. Power series for
// |z| <= 20, asymptotic expansion above. Relative error <= 1e-12.
// Throws std::range_error for |z| > 700 (exp(z) would overflow).
double bessel_i0(double z);

inline constexpr double kBesselI0Overflow = 700.0;

// Neumaier compensated accumulator. Sums spanning many orders of magnitude
// (photon-number expansions, bracket sums) go through this.
class NeumaierSum {
public:
    void add(double value) {
        double t = sum_ + value;
        comp_ += (abs_(sum_) >= abs_(value)) ? (sum_ - t) + value
                                             : (value - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    static double abs_(double v) { return v < 0 ? -v : v; }
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace tfqkd

#endif
