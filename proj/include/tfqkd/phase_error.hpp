#ifndef TFQKD_PHASE_ERROR_HPP
#define TFQKD_PHASE_ERROR_HPP

#include "tfqkd/concentration.hpp"
#include "tfqkd/decoy.hpp"
#include "tfqkd/protocol.hpp"

// Assembly of the phase-error upper bound: photon-pair probability ratios,
// certified tail coefficients for the pairs above the cutoff, and the
// nonlinear combination of the decoy bounds with their deviation terms.

namespace tfqkd {

// p_{nm|X}: probability that a joint key-basis emission carries (n, m)
// photons; a product of Poissonians of mean alpha^2, evaluated in log space.
double pnm_x(int n, int m, double alpha);

// p_{nm|Z}: the estimation-basis mixture sum_{mu,nu} p_mu p_nu p_{n|mu} p_{m|nu};
// factorizes into the two single-user mixtures.
double pnm_z(int n, int m, const Intensities& intensities);

// Certified over-estimates of t_j = sum over same-parity pairs with
// n + m > s_cut of sqrt(p_{nm|X}/p_{nm|Z}), j in {even, odd}. Each value is
// an exact partial sum up to n + m <= n_trunc plus a closed-form geometric
// remainder obtained from p_{nm|Z} >= p_{mu0}^2 p_{n|mu0} p_{m|mu0}, under
// which each term is at most e^(mu0 - alpha^2) (alpha/sqrt(mu0))^(n+m) / p_mu0.
// Finite only when mu0 > alpha^2; otherwise throws std::domain_error.
struct TailCoefficients {
    double t0 = 0.0; // both indices even
    double t1 = 0.0; // both indices odd
};

TailCoefficients tail_coefficients(const ProtocolParams& params, int n_trunc = 200);

// Per-pair deviation terms entering the bracket sums. delta is the simple
// Kato deviation shared by every pair except (0,0), which uses the optimized
// deviation evaluated at M_00^U.
struct DeviationTerms {
    double delta = 0.0;    // sqrt(M_s ln(1/eps_a) / 2)
    double delta_00 = 0.0; // optimized vacuum deviation
};

// The phase-error count bound: with brackets indexed by parity j,
//   N_ph^U = (p_X/p_Z)^2 * sum_j [ sum_{(n,m): parity j, n+m <= s_cut}
//              sqrt(p_{nm|X}/p_{nm|Z}) sqrt(M_nm^U + Delta_nm)
//              + sqrt(M_Z + Delta) t_j ]^2  + Delta.
// kato00 must be built for n = M_s with the caller's predicted vacuum bound.
// When zero_deviation is set, all Delta terms are forced to zero (asymptotic
// evaluation mode); the decoy bounds are whatever the caller supplied.
double nph_upper(const DecoyBounds& decoy, const ObservedCounts& counts,
                 const ProtocolParams& params, const SecurityParams& sec,
                 const KatoCoefficients& kato00, bool zero_deviation = false,
                 std::map<std::string, double>* diagnostics = nullptr);

// e_ph^U = N_ph^U / M_X, clamped to [0,1]. Throws std::domain_error when
// m_x = 0. *clamped reports whether the raw ratio exceeded 1.
double eph_upper(double n_ph_upper, std::uint64_t m_x, bool* clamped = nullptr);

} // namespace tfqkd

#endif
