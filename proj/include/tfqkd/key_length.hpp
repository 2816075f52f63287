#ifndef TFQKD_KEY_LENGTH_HPP
#define TFQKD_KEY_LENGTH_HPP

#include "tfqkd/protocol.hpp"

#include <cstdint>

// Failure-probability bookkeeping and the final key-length formula.

namespace tfqkd {

// Which inverse-Chernoff applications are charged to the estimation budget.
// Paper mode charges the d^2 matrix entries only (the published accounting);
// Strict mode additionally charges the four marginal applications behind the
// single-emitter vacuum bounds.
enum class BudgetMode { Paper, Strict };

struct EpsilonBudget {
    double eps_param = 0.0;   // overall estimation failure probability
    double eps_secret = 0.0;  // 2 eps_param + eps_pa
    double eps_sec = 0.0;     // eps_cor + eps_secret
    int n_chernoff_uses = 0;
    int n_kato_uses = 0;
    BudgetMode mode = BudgetMode::Paper;
};

// eps_param = n_ch eps_chernoff + n_kato eps_kato with
//   n_kato = (floor(s_cut/2) + 1)^2 + 1,
//   n_ch   = d^2            (Paper)  or  d^2 + 4  (Strict).
EpsilonBudget epsilon_budget(const SecurityParams& sec, int s_cut, BudgetMode mode);

// Splits a secrecy target eps_s into per-application failure probabilities
// following the convention eps_param = eps_pa = eps_s / 3 and
// eps_chernoff = eps_kato = eps_param / (n_ch + n_kato).
SecurityParams derive_security(double eps_cor, double eps_secret_target, int s_cut,
                               BudgetMode mode);

// Error-correction leakage model: f * m_x * h(e_x) bits.
double lambda_ec(std::uint64_t m_x, double e_x_obs, double f);

// Extractable key length:
//   l = max(0, floor( m_x [1 - h(min(e_ph, 1/2))] - lambda_ec
//                     - log2(2/eps_cor) - log2(1/(4 eps_pa^2)) )).
// The entropy argument is capped at 1/2 instead of aborting; callers flag
// the cap through the phase-error clamp diagnostics.
std::uint64_t key_length(std::uint64_t m_x, double e_ph_upper, double lambda_ec_bits,
                         const SecurityParams& sec);

} // namespace tfqkd

#endif
