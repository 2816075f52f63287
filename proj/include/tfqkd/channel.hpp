#ifndef TFQKD_CHANNEL_HPP
#define TFQKD_CHANNEL_HPP

#include "tfqkd/protocol.hpp"

// Honest-node channel model: detection probabilities for key- and
// estimation-basis emissions under loss, dark counts and phase/polarization
// misalignment, plus the repeaterless benchmark.

namespace tfqkd {

struct ChannelParams {
    double loss_db = 0.0;    // total Alice-Bob loss, detector inefficiency included
    double p_d = 0.0;        // dark-count probability per pulse per detector
    double delta_ph = 0.0;   // phase misalignment fraction; phi = delta_ph * pi
    double delta_pol = 0.0;  // polarization misalignment fraction
    double f_ec = 1.0;       // error-correction inefficiency (>= 1)

    double eta() const;          // 10^(-loss_db/10)
    double theta() const;        // theta_A - theta_B, theta_A = asin(sqrt(delta_pol))
    double visibility() const;   // cos(phi) cos(theta)
};

// How the estimation-basis intensities enter the detection formula. The
// detection probability for a pair of phase-randomized pulses is
//   Q = 2(1-p_d) [ e^(-s/2) I0(v) - (1-p_d) e^(-s) ],
// and the two conventions differ in what s and v are:
//   Intensity:  s = (mu + nu) sqrt(eta),   v = sqrt(mu nu) sqrt(eta) cos(theta)
//   Amplitude:  s = (mu^2 + nu^2) sqrt(eta), v = mu nu sqrt(eta) cos(theta)
// Intensity treats mu as a mean photon number (consistent with the decoy
// grid, and with the key-basis formula where gamma = sqrt(eta) alpha^2);
// Amplitude treats the symbols as field amplitudes. Intensity is the default.
enum class IntensityConvention { Intensity, Amplitude };

// Probability that the middle node reports a successful detection when both
// users pick the key basis with amplitude alpha.
double qx(const ChannelParams& ch, double alpha);

// Bit-error probability of the sifted key. Throws std::domain_error when the
// detection probability vanishes (QBER undefined).
double ex(const ChannelParams& ch, double alpha);

// Successful-detection probability for estimation-basis intensities (mu, nu).
double q_munu(const ChannelParams& ch, double mu, double nu,
              IntensityConvention conv = IntensityConvention::Intensity);

// Deterministic expected-value counts: M_X = floor(N p_X^2 Q_X),
// M^{mu nu} = floor(N p_Z^2 p_mu p_nu Q^{mu nu}), e_x_obs = e_X.
// rounded (optional) is set when any floor discarded a fractional part.
ObservedCounts expected_counts(const ProtocolParams& params,
                               const ChannelParams& ch,
                               IntensityConvention conv = IntensityConvention::Intensity,
                               bool* rounded = nullptr);

// Repeaterless secret-key capacity -log2(1 - eta), in bits per pulse.
// Returns +infinity at eta = 1.
double plob(double eta);

} // namespace tfqkd

#endif
