#ifndef TFQKD_PROTOCOL_HPP
#define TFQKD_PROTOCOL_HPP

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

// Shared domain model for the protocol: emission settings, security budget,
// observed counts, decoy-state bounds and the final key-rate result. All
// types are immutable value types.

namespace tfqkd {

// Three decoy intensities mu0 > mu1 > mu2 >= 0 with selection probabilities.
// Both users are symmetric (same set, same probabilities).
struct Intensities {
    std::array<double, 3> mu{};
    std::array<double, 3> p{};
};

struct ProtocolParams {
    std::uint64_t n_rounds = 0;   // N, total transmission rounds
    double p_x = 0.0;             // key-basis probability; p_z = 1 - p_x
    double alpha = 0.0;           // key-basis coherent amplitude (intensity alpha^2)
    Intensities intensities;
    int s_cut = 4;                // photon-pair cutoff, even; analytical decoy serves 2 and 4

    double p_z() const { return 1.0 - p_x; }
    double alpha_sq() const { return alpha * alpha; }
};

struct SecurityParams {
    double eps_cor = 0.0;       // correctness failure probability
    double eps_pa = 0.0;        // privacy-amplification failure probability
    double eps_chernoff = 0.0;  // per-application Chernoff failure probability
    double eps_kato = 0.0;      // per-application Kato failure probability
    int d = 3;                  // number of decoy intensities per user
};

// Sifted counts. m_z and m_s are always derived, never stored.
struct ObservedCounts {
    std::uint64_t m_x = 0;                              // sifted-key length
    std::array<std::array<std::uint64_t, 3>, 3> m_matrix{}; // M^{mu nu}
    double e_x_obs = 0.0;                               // observed bit-error rate

    std::uint64_t m_z() const {
        std::uint64_t s = 0;
        for (const auto& row : m_matrix)
            for (std::uint64_t v : row) s += v;
        return s;
    }
    std::uint64_t m_s() const { return m_x + m_z(); }
    std::uint64_t row_sum(int i) const {
        return m_matrix[i][0] + m_matrix[i][1] + m_matrix[i][2];
    }
    std::uint64_t col_sum(int j) const {
        return m_matrix[0][j] + m_matrix[1][j] + m_matrix[2][j];
    }
};

// Photon-pair indices served by the analytical decoy method.
struct PairIndex {
    int n = 0;
    int m = 0;
    bool operator<(const PairIndex& o) const {
        return n != o.n ? n < o.n : m < o.m;
    }
    bool operator==(const PairIndex& o) const { return n == o.n && m == o.m; }
};

// The nine (n,m) with n+m even and <= 4, in a fixed order.
const std::array<PairIndex, 9>& decoy_pair_set();

struct DecoyBounds {
    std::map<PairIndex, double> m_upper; // M_nm^U, clamped to [0, m_z]
    double m0a_lower = 0.0;              // lower bound on sum_m M_0m
    double m0b_lower = 0.0;              // lower bound on sum_n M_n0

    double upper(int n, int m) const { return m_upper.at(PairIndex{n, m}); }
};

struct KeyRateResult {
    double n_ph_upper = 0.0;
    double e_ph_upper = 0.0;
    std::uint64_t key_length = 0;
    double rate = 0.0;                   // key_length / n_rounds
    std::string failure_reason;          // empty when the evaluation completed
    std::map<std::string, double> diagnostics;
};

// Aggregated invariant checking. Returns one message per violated invariant;
// an empty vector means the configuration is valid. alpha^2 >= mu0 (which
// makes the tail sum diverge) is reported with a distinguished message.
std::vector<std::string> validate(const ProtocolParams& params,
                                  const SecurityParams& sec);

inline constexpr const char* kTailDivergenceError =
    "tail divergence: alpha^2 must be strictly below mu0";

// Raised when a bound or intermediate of the estimation chain turns out
// non-finite; the message names the offending quantity.
struct EstimationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace tfqkd

#endif
