#include "tfqkd/protocol.hpp"

#include <cmath>

namespace tfqkd {

const std::array<PairIndex, 9>& decoy_pair_set() {
    static const std::array<PairIndex, 9> pairs = {{
        {0, 0}, {1, 1}, {2, 2}, {0, 2}, {2, 0}, {0, 4}, {4, 0}, {1, 3}, {3, 1},
    }};
    return pairs;
}

std::vector<std::string> validate(const ProtocolParams& params,
                                  const SecurityParams& sec) {
    std::vector<std::string> errors;
    const auto& in = params.intensities;

    if (!(in.mu[0] > in.mu[1] && in.mu[1] > in.mu[2] && in.mu[2] >= 0.0))
        errors.push_back("intensities must satisfy mu0 > mu1 > mu2 >= 0");
    double psum = 0.0;
    bool ppos = true;
    for (double p : in.p) {
        psum += p;
        ppos = ppos && p > 0.0;
    }
    if (!ppos)
        errors.push_back("intensity probabilities must be strictly positive");
    if (std::abs(psum - 1.0) > 1e-12)
        errors.push_back("intensity probabilities must sum to 1 within 1e-12");

    if (!(params.p_x > 0.0 && params.p_x < 1.0))
        errors.push_back("p_x must lie strictly inside (0,1)");
    if (!(params.alpha > 0.0 && std::isfinite(params.alpha)))
        errors.push_back("alpha must be positive and finite");
    else if (!(in.mu[0] > params.alpha_sq()))
        errors.push_back(kTailDivergenceError);
    if (params.s_cut < 2 || params.s_cut % 2 != 0)
        errors.push_back("s_cut must be a positive even integer >= 2");
    else if (params.s_cut > 4)
        errors.push_back("analytical decoy estimation serves s_cut in {2,4} only");

    auto check_eps = [&](double v, const char* name) {
        if (!(v > 0.0 && v < 1.0)) {
            errors.push_back(std::string(name) + " must lie in (0,1)");
        }
    };
    check_eps(sec.eps_cor, "eps_cor");
    check_eps(sec.eps_pa, "eps_pa");
    check_eps(sec.eps_chernoff, "eps_chernoff");
    check_eps(sec.eps_kato, "eps_kato");
    if (sec.d != 3)
        errors.push_back("analytical decoy estimation requires d = 3 intensities");

    return errors;
}

} // namespace tfqkd
