#include "tfqkd/phase_error.hpp"

#include "tfqkd/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace tfqkd {

namespace {

double log_poisson(double mu, int n) {
    if (mu <= 0.0) return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    return -mu + n * std::log(mu) - std::lgamma(double(n) + 1.0);
}

// log sqrt(p_{n|X}/p_{n|Z}) for n = 0..n_max; the pair ratio factorizes into
// per-index factors g_n, so all sums run over these.
std::vector<double> log_g(const ProtocolParams& params, int n_max) {
    const PhotonMixture mix(params.intensities, n_max);
    const double a2 = params.alpha_sq();
    std::vector<double> g(n_max + 1);
    for (int n = 0; n <= n_max; ++n)
        g[n] = 0.5 * (log_poisson(a2, n) - mix.log_pnz(n));
    return g;
}

} // namespace

double pnm_x(int n, int m, double alpha) {
    if (n < 0 || m < 0) throw std::domain_error("pnm_x: negative photon number");
    const double a2 = alpha * alpha;
    return std::exp(log_poisson(a2, n) + log_poisson(a2, m));
}

double pnm_z(int n, int m, const Intensities& intensities) {
    if (n < 0 || m < 0) throw std::domain_error("pnm_z: negative photon number");
    const PhotonMixture mix(intensities, std::max(n, m));
    return std::exp(mix.log_pnz(n) + mix.log_pnz(m));
}

TailCoefficients tail_coefficients(const ProtocolParams& params, int n_trunc) {
    const double a2 = params.alpha_sq();
    const double mu0 = params.intensities.mu[0];
    if (!(mu0 > a2)) throw std::domain_error(kTailDivergenceError);

    const auto g = log_g(params, n_trunc);
    NeumaierSum partial0, partial1;
    for (int n = 0; n <= n_trunc; ++n) {
        for (int m = 0; m <= n_trunc - n; ++m) {
            if (n + m <= params.s_cut) continue;
            if ((n % 2) != (m % 2)) continue; // only same-parity pairs occur
            const double v = std::exp(g[n] + g[m]);
            if (n % 2 == 0) partial0.add(v);
            else partial1.add(v);
        }
    }

    // remainder over n + m > n_trunc: each term <= C r^(n+m) with
    // C = e^(mu0 - alpha^2)/p_mu0, r = alpha/sqrt(mu0); per even total s there
    // are s/2 + 1 even-even pairs and s/2 odd-odd pairs
    const double c = std::exp(mu0 - a2) / params.intensities.p[0];
    const double q = a2 / mu0; // r^2
    const int s0 = (n_trunc + 1) % 2 == 0 ? n_trunc + 1 : n_trunc + 2;
    const double k0 = double(s0 / 2);
    const double qk0 = std::exp(k0 * std::log(q));
    const double denom = (1.0 - q) * (1.0 - q);
    const double rem0 = c * qk0 * ((k0 + 1.0) - k0 * q) / denom;
    const double rem1 = c * qk0 * (k0 - (k0 - 1.0) * q) / denom;

    TailCoefficients out;
    out.t0 = partial0.value() + rem0;
    out.t1 = partial1.value() + rem1;
    if (!std::isfinite(out.t0) || !std::isfinite(out.t1))
        throw EstimationError("tail coefficient not finite");
    return out;
}

double nph_upper(const DecoyBounds& decoy, const ObservedCounts& counts,
                 const ProtocolParams& params, const SecurityParams& sec,
                 const KatoCoefficients& kato00, bool zero_deviation,
                 std::map<std::string, double>* diagnostics) {
    const double m_s = double(counts.m_s());
    const double m_z = double(counts.m_z());

    DeviationTerms dev;
    if (!zero_deviation) {
        dev.delta = kato_delta_simple(m_s, sec.eps_kato);
        dev.delta_00 = kato_delta_optimized(
            kato00, std::min(decoy.upper(0, 0), kato00.n));
    }

    const TailCoefficients tails = tail_coefficients(params);
    const auto g = log_g(params, params.s_cut);

    NeumaierSum bracket[2];
    for (const PairIndex& t : decoy_pair_set()) {
        if (t.n + t.m > params.s_cut) continue;
        const double coeff = std::exp(g[t.n] + g[t.m]); // sqrt(p_nm|X / p_nm|Z)
        const double dnm = (t.n == 0 && t.m == 0) ? dev.delta_00 : dev.delta;
        bracket[t.n % 2].add(coeff * std::sqrt(decoy.upper(t.n, t.m) + dnm));
    }
    const double tail_factor = std::sqrt(m_z + dev.delta);
    bracket[0].add(tail_factor * tails.t0);
    bracket[1].add(tail_factor * tails.t1);

    const double ratio = params.p_x / params.p_z();
    const double b0 = bracket[0].value();
    const double b1 = bracket[1].value();
    const double nph = ratio * ratio * (b0 * b0 + b1 * b1) + dev.delta;
    if (!std::isfinite(nph))
        throw EstimationError("phase-error bound not finite");

    if (diagnostics) {
        (*diagnostics)["delta"] = dev.delta;
        (*diagnostics)["delta_00"] = dev.delta_00;
        (*diagnostics)["tail_t0"] = tails.t0;
        (*diagnostics)["tail_t1"] = tails.t1;
        (*diagnostics)["bracket_even"] = b0;
        (*diagnostics)["bracket_odd"] = b1;
    }
    return nph;
}

double eph_upper(double n_ph_upper, std::uint64_t m_x, bool* clamped) {
    if (m_x == 0) throw std::domain_error("eph_upper: M_X = 0");
    const double raw = n_ph_upper / double(m_x);
    if (clamped) *clamped = raw > 1.0;
    return std::clamp(raw, 0.0, 1.0);
}

} // namespace tfqkd
