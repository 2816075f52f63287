#include "tfqkd/decoy.hpp"

#include "tfqkd/concentration.hpp"
#include "tfqkd/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tfqkd {

namespace {

double log_poisson(double mu, int n) {
    if (mu <= 0.0) return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    return -mu + n * std::log(mu) - std::lgamma(double(n) + 1.0);
}

double logsumexp3(double a, double b, double c) {
    const double m = std::max({a, b, c});
    if (!std::isfinite(m)) return m;
    return m + std::log(std::exp(a - m) + std::exp(b - m) + std::exp(c - m));
}

constexpr int kMixtureDepth = 24;

} // namespace

PhotonMixture::PhotonMixture(const Intensities& in, int n_max) {
    log_pnz_.resize(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        log_pnz_[n] = logsumexp3(std::log(in.p[0]) + log_poisson(in.mu[0], n),
                                 std::log(in.p[1]) + log_poisson(in.mu[1], n),
                                 std::log(in.p[2]) + log_poisson(in.mu[2], n));
    }
}

std::array<double, 3> OmegaSpec::hat_coeff_a() const {
    return {w_a[1] * kappa_a[1], -(w_a[1] * kappa_a[0] + w_a[0] * kappa_a[2]),
            w_a[0] * kappa_a[1]};
}

std::array<double, 3> OmegaSpec::hat_coeff_b() const {
    return {w_b[1] * kappa_b[1], -(w_b[1] * kappa_b[0] + w_b[0] * kappa_b[2]),
            w_b[0] * kappa_b[1]};
}

double OmegaSpec::kernel_a(double n, const Intensities& in) const {
    return w_a[1] * (kappa_a[1] * std::pow(in.mu[0], n) - kappa_a[0] * std::pow(in.mu[1], n)) -
           w_a[0] * (kappa_a[2] * std::pow(in.mu[1], n) - kappa_a[1] * std::pow(in.mu[2], n));
}

double OmegaSpec::kernel_b(double m, const Intensities& in) const {
    return w_b[1] * (kappa_b[1] * std::pow(in.mu[0], m) - kappa_b[0] * std::pow(in.mu[1], m)) -
           w_b[0] * (kappa_b[2] * std::pow(in.mu[1], m) - kappa_b[1] * std::pow(in.mu[2], m));
}

OmegaSpec OmegaSpec::for_target(PairIndex target, const Intensities& in) {
    const double m0 = in.mu[0], m1 = in.mu[1], m2 = in.mu[2];
    const std::array<double, 3> unit = {1.0, 1.0, 1.0};
    const std::array<double, 2> w_lin = {m0 - m1, m1 - m2};
    const std::array<double, 2> w_sq = {m0 * m0 - m1 * m1, m1 * m1 - m2 * m2};
    const std::array<double, 2> w_vac = {m0 * m1 * (m0 - m1), m1 * m2 * (m1 - m2)};
    // single-emitter vacuum eliminator: the high pair keeps the strong
    // intensity, the low pair the weak one
    const std::array<double, 2> w_svac = {(m0 - m1) * m0, (m1 - m2) * m2};

    OmegaSpec s;
    s.target = target;
    const int n = target.n, m = target.m;
    if (n == 0 && m == 0) {
        s.kappa_a = s.kappa_b = in.mu;
        s.w_a = s.w_b = w_vac;
    } else if (n == 1 && m == 1) {
        s.kappa_a = s.kappa_b = unit;
        s.w_a = s.w_b = w_sq;
    } else if (n == 2 && m == 2) {
        s.kappa_a = s.kappa_b = unit;
        s.w_a = s.w_b = w_lin;
    } else if (n == 0 && (m == 2 || m == 4)) {
        s.kappa_a = in.mu;
        s.kappa_b = unit;
        s.w_a = w_svac;
        s.w_b = w_lin;
    } else if ((n == 2 || n == 4) && m == 0) {
        s.kappa_a = unit;
        s.kappa_b = in.mu;
        s.w_a = w_lin;
        s.w_b = w_svac;
    } else if (n == 1 && m == 3) {
        s.kappa_a = s.kappa_b = unit;
        s.w_a = w_sq;
        s.w_b = w_lin;
        s.negated = true;
    } else if (n == 3 && m == 1) {
        s.kappa_a = s.kappa_b = unit;
        s.w_a = w_lin;
        s.w_b = w_sq;
        s.negated = true;
    } else {
        throw std::domain_error("OmegaSpec: unsupported target pair");
    }
    return s;
}

double omega_upper(const OmegaSpec& spec, const HatMBounds& hat) {
    const auto a = spec.hat_coeff_a();
    const auto b = spec.hat_coeff_b();
    NeumaierSum sum;
    for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
            const double c = a[k] * b[l];
            sum.add(c * (c > 0.0 ? hat.upper[k][l] : hat.lower[k][l]));
        }
    }
    return sum.value();
}

double omega_lower(const OmegaSpec& spec, const HatMBounds& hat) {
    const auto a = spec.hat_coeff_a();
    const auto b = spec.hat_coeff_b();
    NeumaierSum sum;
    for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
            const double c = a[k] * b[l];
            sum.add(c * (c > 0.0 ? hat.lower[k][l] : hat.upper[k][l]));
        }
    }
    return sum.value();
}

double omega_m_coefficient(const OmegaSpec& spec, const ProtocolParams& params,
                           int n, int m) {
    const Intensities& in = params.intensities;
    const PhotonMixture mix(in, std::max(kMixtureDepth, std::max(n, m)));
    const double z = params.p_z();
    const double log_norm = std::lgamma(double(n) + 1.0) + std::lgamma(double(m) + 1.0) +
                            mix.log_pnz(n) + mix.log_pnz(m) + 2.0 * std::log(z);
    const double kk = spec.kernel_a(n, in) * spec.kernel_b(m, in);
    const double sign = spec.negated ? -1.0 : 1.0;
    return sign * kk * std::exp(-log_norm);
}

namespace {

HatMBounds build_hat(const ObservedCounts& counts, const ProtocolParams& params,
                     const SecurityParams* sec) {
    HatMBounds hat;
    const auto& in = params.intensities;
    const double z = params.p_z();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double scale =
                std::exp(in.mu[i] + in.mu[j]) / (z * z * in.p[i] * in.p[j]);
            if (sec) {
                const auto iv = chernoff_mean_bounds(counts.m_matrix[i][j], sec->eps_chernoff);
                hat.lower[i][j] = scale * iv.expectation_lower;
                hat.upper[i][j] = scale * iv.expectation_upper;
            } else {
                hat.lower[i][j] = hat.upper[i][j] =
                    scale * double(counts.m_matrix[i][j]);
            }
        }
    }
    for (int i = 0; i < 3; ++i) {
        const double scale = std::exp(in.mu[i]) / (z * in.p[i]);
        if (sec) {
            const auto iva = chernoff_mean_bounds(counts.row_sum(i), sec->eps_chernoff);
            hat.marg_a_lower[i] = scale * iva.expectation_lower;
            hat.marg_a_upper[i] = scale * iva.expectation_upper;
            const auto ivb = chernoff_mean_bounds(counts.col_sum(i), sec->eps_chernoff);
            hat.marg_b_lower[i] = scale * ivb.expectation_lower;
            hat.marg_b_upper[i] = scale * ivb.expectation_upper;
        } else {
            hat.marg_a_lower[i] = hat.marg_a_upper[i] = scale * double(counts.row_sum(i));
            hat.marg_b_lower[i] = hat.marg_b_upper[i] = scale * double(counts.col_sum(i));
        }
    }
    return hat;
}

} // namespace

HatMBounds hat_m_bounds(const ObservedCounts& counts, const ProtocolParams& params,
                        const SecurityParams& sec) {
    return build_hat(counts, params, &sec);
}

HatMBounds hat_m_exact(const ObservedCounts& counts, const ProtocolParams& params) {
    return build_hat(counts, params, nullptr);
}

DecoyBounds decoy_bounds_from_hat(const HatMBounds& hat, std::uint64_t m_z,
                                  const ProtocolParams& params) {
    const Intensities& in = params.intensities;
    const double m0 = in.mu[0], m1 = in.mu[1], m2 = in.mu[2];
    const double z = params.p_z();
    const double mz = double(m_z);
    const PhotonMixture mix(in, 8);

    DecoyBounds out;
    auto clamp_bound = [&](double v, const char* name) {
        if (!std::isfinite(v))
            throw EstimationError(std::string("decoy bound not finite: ") + name);
        return std::clamp(v, 0.0, mz);
    };
    auto target_coeff = [&](const OmegaSpec& spec) {
        const double sign = spec.negated ? -1.0 : 1.0;
        const int n = spec.target.n, m = spec.target.m;
        const double log_norm = std::lgamma(double(n) + 1.0) +
                                std::lgamma(double(m) + 1.0) + mix.log_pnz(n) +
                                mix.log_pnz(m) + 2.0 * std::log(z);
        return sign * spec.kernel_a(n, in) * spec.kernel_b(m, in) * std::exp(-log_norm);
    };

    // all-positive-coefficient targets: M_ij <= Omega^U / c_ij
    for (PairIndex t : {PairIndex{0, 0}, PairIndex{2, 2}, PairIndex{0, 2},
                        PairIndex{0, 4}, PairIndex{2, 0}, PairIndex{4, 0}}) {
        const auto spec = OmegaSpec::for_target(t, in);
        const double v = omega_upper(spec, hat) / target_coeff(spec);
        out.m_upper[t] = clamp_bound(v, ("M" + std::to_string(t.n) + std::to_string(t.m)).c_str());
    }

    // single-emitter vacuum lower bounds from the mu1/mu2 marginals
    const double p0 = z * mix.pnz(0);
    const double m0a = p0 * (m1 * hat.marg_a_lower[2] - m2 * hat.marg_a_upper[1]) / (m1 - m2);
    const double m0b = p0 * (m1 * hat.marg_b_lower[2] - m2 * hat.marg_b_upper[1]) / (m1 - m2);
    if (!std::isfinite(m0a) || !std::isfinite(m0b))
        throw EstimationError("decoy bound not finite: M0A/M0B");
    out.m0a_lower = std::max(0.0, m0a);
    out.m0b_lower = std::max(0.0, m0b);

    // negative-set targets share the slack term
    //   c_max (M_Z - M_0A^L - M_0B^L + M_00^U)
    const double m00u = out.m_upper.at(PairIndex{0, 0});
    const double slack = mz - out.m0a_lower - out.m0b_lower + m00u;

    // caps on |c_nm| over the negative sets; e^{mu0}/(z p_{mu0}) bounds
    // mu0^n / (n! p_Z p_{n|Z}) for every n
    const double cap_a_lin = (m1 - m2) * std::exp(m0) / (z * in.p[0]);
    const double cap_b_lin = cap_a_lin; // symmetric users
    const double cap_a_sq = (m1 * m1 - m2 * m2) * std::exp(m0) / (z * in.p[0]);
    const double cap_b_sq = cap_a_sq;

    {
        const auto spec = OmegaSpec::for_target({1, 1}, in);
        const double g1_a = std::abs(spec.kernel_a(1, in)) / (z * mix.pnz(1));
        const double g1_b = std::abs(spec.kernel_b(1, in)) / (z * mix.pnz(1));
        const double cmax = std::max(cap_a_sq * g1_b, cap_b_sq * g1_a);
        const double v = (omega_upper(spec, hat) + cmax * slack) / (target_coeff(spec) + cmax);
        out.m_upper[{1, 1}] = clamp_bound(v, "M11");
    }
    {
        const auto spec = OmegaSpec::for_target({1, 3}, in);
        const double cmax = cap_a_sq * cap_b_lin;
        const double v = (-omega_lower(spec, hat) + cmax * slack) / (target_coeff(spec) + cmax);
        out.m_upper[{1, 3}] = clamp_bound(v, "M13");
    }
    {
        const auto spec = OmegaSpec::for_target({3, 1}, in);
        const double cmax = cap_a_lin * cap_b_sq;
        const double v = (-omega_lower(spec, hat) + cmax * slack) / (target_coeff(spec) + cmax);
        out.m_upper[{3, 1}] = clamp_bound(v, "M31");
    }
    return out;
}

DecoyBounds decoy_upper_bounds(const ObservedCounts& counts,
                               const ProtocolParams& params,
                               const SecurityParams& sec) {
    return decoy_bounds_from_hat(hat_m_bounds(counts, params, sec), counts.m_z(), params);
}

} // namespace tfqkd
