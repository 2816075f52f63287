#include "tfqkd/channel.hpp"

#include "tfqkd/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tfqkd {

namespace {
constexpr double kPi = 3.141592653589793;
}

double ChannelParams::eta() const { return std::pow(10.0, -loss_db / 10.0); }

double ChannelParams::theta() const {
    const double theta_a = std::asin(std::sqrt(delta_pol));
    return 2.0 * theta_a; // theta_A - theta_B with theta_B = -theta_A
}

double ChannelParams::visibility() const {
    return std::cos(delta_ph * kPi) * std::cos(theta());
}

double qx(const ChannelParams& ch, double alpha) {
    const double g = std::sqrt(ch.eta()) * alpha * alpha;
    const double om = ch.visibility();
    const double q = (1.0 - ch.p_d) * (std::exp(-g * om) + std::exp(g * om)) * std::exp(-g) -
                     2.0 * (1.0 - ch.p_d) * (1.0 - ch.p_d) * std::exp(-2.0 * g);
    return q < 0.0 ? 0.0 : q; // clip fp residue at gamma = 0, p_d = 0
}

double ex(const ChannelParams& ch, double alpha) {
    const double g = std::sqrt(ch.eta()) * alpha * alpha;
    const double om = ch.visibility();
    const double den = std::exp(-g * om) + std::exp(g * om) -
                       2.0 * (1.0 - ch.p_d) * std::exp(-g);
    if (!(den > 0.0))
        throw std::domain_error("ex: QBER undefined, detection probability vanishes");
    const double num = std::exp(-g * om) - (1.0 - ch.p_d) * std::exp(-g);
    return num / den;
}

double q_munu(const ChannelParams& ch, double mu, double nu, IntensityConvention conv) {
    const double se = std::sqrt(ch.eta());
    double s, v;
    if (conv == IntensityConvention::Intensity) {
        s = (mu + nu) * se;
        v = std::sqrt(mu * nu) * se * std::cos(ch.theta());
    } else {
        s = (mu * mu + nu * nu) * se;
        v = mu * nu * se * std::cos(ch.theta());
    }
    const double q = 2.0 * (1.0 - ch.p_d) *
                     (std::exp(-0.5 * s) * bessel_i0(v) -
                      (1.0 - ch.p_d) * std::exp(-s));
    return q < 0.0 ? 0.0 : q;
}

ObservedCounts expected_counts(const ProtocolParams& params, const ChannelParams& ch,
                               IntensityConvention conv, bool* rounded) {
    ObservedCounts counts;
    bool any_rounded = false;
    auto to_count = [&](double v) -> std::uint64_t {
        if (v < 0.0) v = 0.0;
        const double f = std::floor(v);
        if (f != v) any_rounded = true;
        return static_cast<std::uint64_t>(f);
    };
    const double n = static_cast<double>(params.n_rounds);
    const double pz2 = params.p_z() * params.p_z();
    counts.m_x = to_count(n * params.p_x * params.p_x * qx(ch, params.alpha));
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double q = q_munu(ch, params.intensities.mu[i],
                                    params.intensities.mu[j], conv);
            counts.m_matrix[i][j] =
                to_count(n * pz2 * params.intensities.p[i] * params.intensities.p[j] * q);
        }
    }
    counts.e_x_obs = ex(ch, params.alpha);
    if (rounded) *rounded = any_rounded;
    return counts;
}

double plob(double eta) {
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::domain_error("plob: eta outside (0,1]");
    if (eta == 1.0) return std::numeric_limits<double>::infinity();
    return -std::log2(1.0 - eta);
}

} // namespace tfqkd
