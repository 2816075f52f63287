#ifndef TFQKD_ORACLE_HPP
#define TFQKD_ORACLE_HPP

#include "tfqkd/concentration.hpp"
#include "tfqkd/decoy.hpp"
#include "tfqkd/protocol.hpp"

#include <cstdint>
#include <functional>
#include <map>

// Verification oracles: Monte-Carlo coverage measurements for the
// concentration bounds, the multinomial intensity-assignment sampler, and a
// brute-force linear program for decoy dominance checks. Test machinery;
// nothing here sits on the production estimation path.

namespace tfqkd {

struct McConfig {
    std::uint64_t seed = 0;
    std::uint64_t trials = 1;
    int n_max = 6; // photon-space truncation for assignment/LP instances
};

// Fraction of trials in which the true mean n*p escapes the inverse-Chernoff
// interval computed from the realized Binomial(n, p) count. Trials use
// independent, trial-indexed RNG streams, so any execution order (or
// parallel split) reproduces the same draws.
double mc_coverage_chernoff(const McConfig& cfg, double p, std::uint64_t n,
                            double epsilon);

// Round-dependent Bernoulli schedule: probability of success at round u given
// the number of successes so far (sufficient history for the adversarial
// schedules exercised in tests).
using KatoSchedule = std::function<double(std::uint64_t u, std::uint64_t successes)>;

struct KatoCoverage {
    double freq_simple = 0.0;    // violations of  sum Pr <= Lambda_n + Delta
    double freq_optimized = 0.0; // violations of  sum Pr <= Lambda_n + Delta'
};

// Coverage of both Kato forms under an adversarial schedule. The optimized
// coefficients are fixed before sampling from lambda_pred, as a real user
// would fix them from a channel prediction.
KatoCoverage mc_coverage_kato(const McConfig& cfg, const KatoSchedule& schedule,
                              std::uint64_t n, double eps_a, double lambda_pred);

// One multinomial assignment of photon-pair counts to intensity cells with
// probabilities p_{mu nu|nm}; trial selects the RNG stream.
std::array<std::array<std::uint64_t, 3>, 3> mc_intensity_assignment(
    const McConfig& cfg, std::uint64_t trial,
    const std::map<PairIndex, std::uint64_t>& m_true, const ProtocolParams& params);

// Exact conditional assignment probability p_{mu nu|nm}.
double assignment_probability(const ProtocolParams& params, int cell_i, int cell_j,
                              int n, int m);

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;
};

// Exact maximum of M_ij over the truncated photon space {M_nm : n,m <= n_max}
// subject to the expectation-interval constraints encoded in hat (variables
// beyond the truncation are dropped; the optimum is therefore a valid <=
// comparison target for dominance tests). Dense two-phase simplex with
// Bland's rule; desk scale only (n_max <= 8).
LpResult lp_decoy_oracle(const HatMBounds& hat, const ProtocolParams& params,
                         int n_max, PairIndex target);

} // namespace tfqkd

#endif
