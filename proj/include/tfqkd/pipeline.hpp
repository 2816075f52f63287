#ifndef TFQKD_PIPELINE_HPP
#define TFQKD_PIPELINE_HPP

#include "tfqkd/channel.hpp"
#include "tfqkd/key_length.hpp"
#include "tfqkd/protocol.hpp"

// End-to-end evaluation: counts -> decoy bounds -> phase-error bound -> key
// length. The channel model supplies both the simulated counts and the prior
// prediction used to tune the optimized vacuum deviation.

namespace tfqkd {

struct AnalysisOptions {
    BudgetMode budget_mode = BudgetMode::Paper;
    IntensityConvention convention = IntensityConvention::Intensity;
    bool zero_deviation = false; // collapse every statistical term (asymptotic mode)
};

// Runs the estimation chain on observed counts. prior_channel provides the
// prediction of the post-decoy vacuum bound (expected counts are pushed
// through the same decoy analysis); the Kato coefficients are then built for
// n = M_s of the observed data. Never throws for estimation failures: those
// return a zero-length result carrying failure_reason.
KeyRateResult keyrate_from_counts(const ProtocolParams& params,
                                  const SecurityParams& sec,
                                  const ChannelParams& prior_channel,
                                  const ObservedCounts& counts,
                                  const AnalysisOptions& opts = {});

// Expected-value evaluation at a parameter point: simulate deterministic
// counts from the channel, then run the same chain. This is the optimizer's
// objective.
KeyRateResult evaluate(const ProtocolParams& params, const SecurityParams& sec,
                       const ChannelParams& ch, const AnalysisOptions& opts = {});

// Closed-form asymptotic rate at a parameter point: zero-deviation decoy
// bounds with exact expectations, no floor, no log-term costs. The
// zero-deviation pipeline converges to this value as N grows.
double asymptotic_rate(const ProtocolParams& params, const ChannelParams& ch,
                       const AnalysisOptions& opts = {});

} // namespace tfqkd

#endif
