#ifndef TFQKD_DECOY_HPP
#define TFQKD_DECOY_HPP

#include "tfqkd/protocol.hpp"

#include <cmath>

// Analytical decoy-state estimation: converts the 3x3 intensity-resolved
// counts M^{mu nu} into upper bounds M_nm^U on the photon-pair counts, for
// the nine (n,m) with n+m even and <= 4, plus single-emitter vacuum lower
// bounds. The estimator works on the rescaled expectations
//
//   Mhat^{mu nu} = e^(mu+nu) E[M^{mu nu}] / (p_Z^2 p_mu p_nu)
//               = sum_nm mu^n nu^m M_nm / (n! m! q_n q_m),   q_n = p_Z p_{n|Z},
//
// where the joint estimation-basis probability p_Z^2 is carried explicitly
// (it cancels between numerators and coefficients, so the resulting bounds
// are normalization-invariant; the Monte-Carlo assignment oracle pins this).
// Bounds on each Mhat come from the inverse Chernoff interval of the
// observed count. A target M_ij is then isolated through a fixed linear
// combination Omega = sum_kl chat_kl Mhat^{mu_k nu_l} whose expansion
// coefficients c_nm have known signs.

namespace tfqkd {

// Poisson mixture p_{n|Z} = sum_mu p_mu p_{n|mu} with log-space evaluation
// (the raw probability underflows near n ~ 150).
class PhotonMixture {
public:
    PhotonMixture(const Intensities& in, int n_max);

    double log_pnz(int n) const { return log_pnz_[n]; }
    double pnz(int n) const { return std::exp(log_pnz_[n]); }
    int n_max() const { return static_cast<int>(log_pnz_.size()) - 1; }

private:
    std::vector<double> log_pnz_;
};

struct HatMBounds {
    std::array<std::array<double, 3>, 3> lower{};
    std::array<std::array<double, 3>, 3> upper{};
    // single-emitter marginals Mhat^{mu} = e^mu E[M^mu] / (p_Z p_mu)
    std::array<double, 3> marg_a_lower{}, marg_a_upper{};
    std::array<double, 3> marg_b_lower{}, marg_b_upper{};
};

// Chernoff-widened hat bounds from observed counts. Each of the nine matrix
// entries consumes one inverse-Chernoff application at eps_chernoff; the four
// marginal bounds used by the vacuum estimates (rows/columns of mu1, mu2)
// consume four more. Budget accounting lives in the key-length module.
HatMBounds hat_m_bounds(const ObservedCounts& counts, const ProtocolParams& params,
                        const SecurityParams& sec);

// Collapsed intervals (lower = upper = observed-count scaling). Used by the
// zero-deviation evaluation mode and by oracle tests.
HatMBounds hat_m_exact(const ObservedCounts& counts, const ProtocolParams& params);

// Linear-combination specification isolating one target pair. kappa are
// per-intensity factors, w per-adjacent-pair factors ({mu0,mu1} and
// {mu1,mu2}); all strictly positive for mu0 > mu1 > mu2. For the negated
// targets (1,3) and (3,1) the expansion of Omega carries the target with a
// negative coefficient, and the bound consumes -Omega^L instead of Omega^U.
struct OmegaSpec {
    PairIndex target;
    std::array<double, 3> kappa_a{}, kappa_b{};
    std::array<double, 2> w_a{}, w_b{}; // [0]: {mu0,mu1} pair, [1]: {mu1,mu2} pair
    bool negated = false;

    // hat-side coefficients chat_kl = a_k * b_l; sign of chat_kl is (-1)^(k+l)
    std::array<double, 3> hat_coeff_a() const;
    std::array<double, 3> hat_coeff_b() const;

    // one-sided kernel of the M_nm expansion (before 1/(n! q_n q_m))
    double kernel_a(double n, const Intensities& in) const;
    double kernel_b(double m, const Intensities& in) const;

    static OmegaSpec for_target(PairIndex target, const Intensities& in);
};

// Upper/lower bounds on Omega by replacing each Mhat with the side matching
// the sign of its coefficient. Equal hat sides collapse both to Omega itself.
double omega_upper(const OmegaSpec& spec, const HatMBounds& hat);
double omega_lower(const OmegaSpec& spec, const HatMBounds& hat);

// Coefficient c_nm of M_nm in the expansion of Omega (sign flip applied for
// negated targets, so the target coefficient is always positive). Valid for
// n, m up to the mixture depth; factorial ratios are taken in log space.
double omega_m_coefficient(const OmegaSpec& spec, const ProtocolParams& params,
                           int n, int m);

// Bound assembly from precomputed hat bounds. m_z is the observed Z-basis
// success count; every M_nm^U is clamped to [0, m_z] (counts cannot exceed
// the number of successful estimation-basis rounds, so the clamp only
// tightens a valid bound).
DecoyBounds decoy_bounds_from_hat(const HatMBounds& hat, std::uint64_t m_z,
                                  const ProtocolParams& params);

// Full production path: Chernoff-widened hat bounds, then assembly.
DecoyBounds decoy_upper_bounds(const ObservedCounts& counts,
                               const ProtocolParams& params,
                               const SecurityParams& sec);

} // namespace tfqkd

#endif
