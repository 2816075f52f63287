#ifndef TFQKD_OPTIMIZER_HPP
#define TFQKD_OPTIMIZER_HPP

#include "tfqkd/pipeline.hpp"

#include <array>
#include <cstdint>

// Derivative-free maximization of the key rate over the free protocol
// parameters (alpha^2, mu0, mu1, p_X and the two intensity-probability
// degrees of freedom; mu2 stays fixed). Nelder-Mead runs on an unconstrained
// reparametrization, so every probed point is feasible by construction.

namespace tfqkd {

struct SearchSpace {
    double mu0_min = 0.05;
    double mu0_max = 2.0;
    double alpha_sq_min = 1e-4;
    double mu2 = 1e-4;        // fixed weakest intensity
    std::uint64_t n_rounds = 0;
    int s_cut = 4;
};

// Smooth bijection R^6 -> feasible parameter set:
//   mu0      = mu0_min + sigmoid(x1) (mu0_max - mu0_min)
//   alpha^2  = alpha_sq_min + sigmoid(x0) (0.999 mu0 - alpha_sq_min)
//   mu1      = mu2 + sigmoid(x2) (mu0 - mu2)
//   p_X      = sigmoid(x3)
//   p_mu0    = sigmoid(x4),  p_mu1 = (1 - p_mu0) sigmoid(x5)   (stick breaking)
ProtocolParams decode_point(const std::array<double, 6>& x, const SearchSpace& space);
std::array<double, 6> encode_point(const ProtocolParams& params, const SearchSpace& space);

struct OptimizeResult {
    ProtocolParams params;
    KeyRateResult result;
    std::uint64_t evaluations = 0;
};

// Multi-start Nelder-Mead. Deterministic for a fixed seed: start points are
// a fixed heuristic list plus seeded perturbations, each start consumes an
// equal share of the evaluation budget, and the aggregation is a max with a
// lexicographic tie-break on the encoded coordinates (so the outcome does
// not depend on evaluation order). The returned point is never worse than
// the best start point. threads > 1 runs starts concurrently (results are
// identical to the sequential run).
OptimizeResult optimize(const ChannelParams& ch, const SecurityParams& sec,
                        const SearchSpace& space, std::uint64_t budget,
                        std::uint64_t seed, const AnalysisOptions& opts = {},
                        int threads = 1);

} // namespace tfqkd

#endif
