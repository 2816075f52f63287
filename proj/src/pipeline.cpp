#include "tfqkd/pipeline.hpp"

#include "tfqkd/concentration.hpp"
#include "tfqkd/decoy.hpp"
#include "tfqkd/phase_error.hpp"
#include "tfqkd/special_functions.hpp"

#include <cmath>
#include <sstream>

namespace tfqkd {

namespace {

KeyRateResult failed_result(std::string reason) {
    KeyRateResult r;
    r.failure_reason = std::move(reason);
    return r;
}

void record_budget(KeyRateResult& r, const EpsilonBudget& b, const SecurityParams& sec) {
    r.diagnostics["eps_param"] = b.eps_param;
    r.diagnostics["eps_secret"] = b.eps_secret;
    r.diagnostics["eps_sec"] = b.eps_sec;
    r.diagnostics["n_chernoff_uses"] = double(b.n_chernoff_uses);
    r.diagnostics["n_kato_uses"] = double(b.n_kato_uses);
    r.diagnostics["eps_chernoff"] = sec.eps_chernoff;
    r.diagnostics["eps_kato"] = sec.eps_kato;
    r.diagnostics["eps_cor"] = sec.eps_cor;
    r.diagnostics["eps_pa"] = sec.eps_pa;
}

} // namespace

KeyRateResult keyrate_from_counts(const ProtocolParams& params,
                                  const SecurityParams& sec,
                                  const ChannelParams& prior_channel,
                                  const ObservedCounts& counts,
                                  const AnalysisOptions& opts) {
    const auto errors = validate(params, sec);
    if (!errors.empty()) {
        std::ostringstream os;
        for (std::size_t i = 0; i < errors.size(); ++i)
            os << (i ? "; " : "") << errors[i];
        return failed_result(os.str());
    }

    KeyRateResult r;
    const EpsilonBudget budget = epsilon_budget(sec, params.s_cut, opts.budget_mode);
    record_budget(r, budget, sec);

    if (counts.m_x == 0) {
        r.failure_reason = "M_X = 0";
        return r;
    }
    if (params.n_rounds == 0) {
        r.failure_reason = "N = 0 with nonzero counts";
        return r;
    }

    const std::uint64_t m_z = counts.m_z();
    const std::uint64_t m_s = counts.m_s();
    r.diagnostics["m_x"] = double(counts.m_x);
    r.diagnostics["m_z"] = double(m_z);
    r.diagnostics["m_s"] = double(m_s);
    r.diagnostics["e_x_obs"] = counts.e_x_obs;

    try {
        // prediction of the post-decoy vacuum bound from the prior channel
        const ObservedCounts predicted =
            expected_counts(params, prior_channel, opts.convention);
        const DecoyBounds predicted_bounds =
            opts.zero_deviation
                ? decoy_bounds_from_hat(hat_m_exact(predicted, params),
                                        predicted.m_z(), params)
                : decoy_upper_bounds(predicted, params, sec);
        const double m00u_pred =
            std::min(predicted_bounds.upper(0, 0), double(m_s));
        const KatoCoefficients kato00 =
            kato_coefficients(double(m_s), m00u_pred, sec.eps_kato);
        r.diagnostics["m00u_predicted"] = m00u_pred;
        r.diagnostics["kato_a"] = kato00.a;
        r.diagnostics["kato_b"] = kato00.b;
        r.diagnostics["kato_fell_back"] = kato00.fell_back ? 1.0 : 0.0;

        const DecoyBounds bounds =
            opts.zero_deviation
                ? decoy_bounds_from_hat(hat_m_exact(counts, params), m_z, params)
                : decoy_upper_bounds(counts, params, sec);
        for (const PairIndex& t : decoy_pair_set()) {
            r.diagnostics["m_upper_" + std::to_string(t.n) + std::to_string(t.m)] =
                bounds.upper(t.n, t.m);
        }
        r.diagnostics["m0a_lower"] = bounds.m0a_lower;
        r.diagnostics["m0b_lower"] = bounds.m0b_lower;

        r.n_ph_upper = nph_upper(bounds, counts, params, sec, kato00,
                                 opts.zero_deviation, &r.diagnostics);
        bool clamped = false;
        r.e_ph_upper = eph_upper(r.n_ph_upper, counts.m_x, &clamped);
        r.diagnostics["e_ph_clamped"] = clamped ? 1.0 : 0.0;

        const double lam = lambda_ec(counts.m_x, counts.e_x_obs, prior_channel.f_ec);
        r.diagnostics["lambda_ec"] = lam;
        r.key_length = key_length(counts.m_x, r.e_ph_upper, lam, sec);
        r.rate = double(r.key_length) / double(params.n_rounds);
    } catch (const EstimationError& e) {
        return failed_result(e.what());
    } catch (const std::domain_error& e) {
        return failed_result(e.what());
    }
    return r;
}

KeyRateResult evaluate(const ProtocolParams& params, const SecurityParams& sec,
                       const ChannelParams& ch, const AnalysisOptions& opts) {
    const auto errors = validate(params, sec);
    if (!errors.empty()) {
        std::ostringstream os;
        for (std::size_t i = 0; i < errors.size(); ++i)
            os << (i ? "; " : "") << errors[i];
        return failed_result(os.str());
    }
    bool rounded = false;
    const ObservedCounts counts = expected_counts(params, ch, opts.convention, &rounded);
    KeyRateResult r = keyrate_from_counts(params, sec, ch, counts, opts);
    r.diagnostics["counts_rounded"] = rounded ? 1.0 : 0.0;
    return r;
}

double asymptotic_rate(const ProtocolParams& params, const ChannelParams& ch,
                       const AnalysisOptions& opts) {
    // evaluate the deviation-free chain at a large reference block so the
    // count flooring is negligible, then rebuild the rate without the
    // finite-size subtractions
    ProtocolParams big = params;
    big.n_rounds = 100000000000000ull; // 1e14
    AnalysisOptions o = opts;
    o.zero_deviation = true;
    SecurityParams sec = derive_security(1e-10, 1e-10, params.s_cut, opts.budget_mode);
    const KeyRateResult r = evaluate(big, sec, ch, o);
    if (!r.failure_reason.empty()) return 0.0;
    const double q = qx(ch, params.alpha);
    const double e_x = ex(ch, params.alpha);
    const double per_pulse =
        params.p_x * params.p_x * q *
        (1.0 - binary_entropy(std::min(r.e_ph_upper, 0.5)) -
         ch.f_ec * binary_entropy(e_x));
    return per_pulse > 0.0 ? per_pulse : 0.0;
}

} // namespace tfqkd
