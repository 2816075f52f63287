#include "tfqkd/key_length.hpp"

#include "tfqkd/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace tfqkd {

EpsilonBudget epsilon_budget(const SecurityParams& sec, int s_cut, BudgetMode mode) {
    if (s_cut < 2 || s_cut % 2 != 0)
        throw std::domain_error("epsilon_budget: s_cut must be even and >= 2");
    EpsilonBudget b;
    b.mode = mode;
    const int half = s_cut / 2;
    b.n_kato_uses = (half + 1) * (half + 1) + 1;
    b.n_chernoff_uses = sec.d * sec.d + (mode == BudgetMode::Strict ? 4 : 0);
    b.eps_param = b.n_chernoff_uses * sec.eps_chernoff + b.n_kato_uses * sec.eps_kato;
    b.eps_secret = 2.0 * b.eps_param + sec.eps_pa;
    b.eps_sec = sec.eps_cor + b.eps_secret;
    return b;
}

SecurityParams derive_security(double eps_cor, double eps_secret_target, int s_cut,
                               BudgetMode mode) {
    if (!(eps_cor > 0.0 && eps_cor < 1.0) ||
        !(eps_secret_target > 0.0 && eps_secret_target < 1.0))
        throw std::domain_error("derive_security: epsilons outside (0,1)");
    SecurityParams sec;
    sec.d = 3;
    sec.eps_cor = eps_cor;
    sec.eps_pa = eps_secret_target / 3.0;
    const double eps_param = eps_secret_target / 3.0;
    const int half = s_cut / 2;
    const int n_kato = (half + 1) * (half + 1) + 1;
    const int n_ch = sec.d * sec.d + (mode == BudgetMode::Strict ? 4 : 0);
    sec.eps_chernoff = sec.eps_kato = eps_param / double(n_ch + n_kato);
    return sec;
}

double lambda_ec(std::uint64_t m_x, double e_x_obs, double f) {
    if (!(e_x_obs >= 0.0 && e_x_obs <= 1.0))
        throw std::domain_error("lambda_ec: e_x outside [0,1]");
    if (!(f >= 1.0)) throw std::domain_error("lambda_ec: inefficiency below 1");
    return f * double(m_x) * binary_entropy(e_x_obs);
}

std::uint64_t key_length(std::uint64_t m_x, double e_ph_upper, double lambda_ec_bits,
                         const SecurityParams& sec) {
    const double e = std::min(e_ph_upper, 0.5);
    const double bits = double(m_x) * (1.0 - binary_entropy(e)) - lambda_ec_bits -
                        std::log2(2.0 / sec.eps_cor) -
                        std::log2(1.0 / (4.0 * sec.eps_pa * sec.eps_pa));
    if (!(bits > 0.0)) return 0;
    return static_cast<std::uint64_t>(std::floor(bits));
}

} // namespace tfqkd
