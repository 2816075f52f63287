#include "tfqkd/oracle.hpp"

#include "tfqkd/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace tfqkd {

double mc_coverage_chernoff(const McConfig& cfg, double p, std::uint64_t n,
                            double epsilon) {
    if (epsilon >= 1.0) return 0.0; // interval degenerates to everything
    const double true_mean = p * double(n);
    std::uint64_t failures = 0;
    for (std::uint64_t trial = 0; trial < cfg.trials; ++trial) {
        Rng rng(cfg.seed, trial);
        std::uint64_t chi = 0;
        for (std::uint64_t i = 0; i < n; ++i) chi += rng.bernoulli(p) ? 1 : 0;
        const auto iv = chernoff_mean_bounds(chi, epsilon);
        if (true_mean < iv.expectation_lower || true_mean > iv.expectation_upper)
            ++failures;
    }
    return double(failures) / double(cfg.trials);
}

KatoCoverage mc_coverage_kato(const McConfig& cfg, const KatoSchedule& schedule,
                              std::uint64_t n, double eps_a, double lambda_pred) {
    const KatoCoefficients coeffs = kato_coefficients(double(n), lambda_pred, eps_a);
    const double delta_simple = kato_delta_simple(double(n), eps_a);
    std::uint64_t fail_simple = 0, fail_opt = 0;
    for (std::uint64_t trial = 0; trial < cfg.trials; ++trial) {
        Rng rng(cfg.seed, trial);
        std::uint64_t lambda = 0;
        double prob_sum = 0.0;
        for (std::uint64_t u = 0; u < n; ++u) {
            const double p = schedule(u, lambda);
            prob_sum += p;
            lambda += rng.bernoulli(p) ? 1 : 0;
        }
        if (prob_sum > double(lambda) + delta_simple) ++fail_simple;
        if (prob_sum > double(lambda) + kato_delta_optimized(coeffs, double(lambda)))
            ++fail_opt;
    }
    return {double(fail_simple) / double(cfg.trials),
            double(fail_opt) / double(cfg.trials)};
}

double assignment_probability(const ProtocolParams& params, int cell_i, int cell_j,
                              int n, int m) {
    const auto& in = params.intensities;
    const PhotonMixture mix(in, std::max(n, m));
    auto log_pois = [](double mu, int k) {
        if (mu <= 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
        return -mu + k * std::log(mu) - std::lgamma(double(k) + 1.0);
    };
    const double log_p = std::log(in.p[cell_i]) + std::log(in.p[cell_j]) +
                         log_pois(in.mu[cell_i], n) + log_pois(in.mu[cell_j], m) -
                         mix.log_pnz(n) - mix.log_pnz(m);
    return std::exp(log_p);
}

std::array<std::array<std::uint64_t, 3>, 3> mc_intensity_assignment(
    const McConfig& cfg, std::uint64_t trial,
    const std::map<PairIndex, std::uint64_t>& m_true, const ProtocolParams& params) {
    Rng rng(cfg.seed, trial);
    std::array<std::array<std::uint64_t, 3>, 3> out{};
    for (const auto& [pair, count] : m_true) {
        double cdf[9];
        double acc = 0.0;
        for (int c = 0; c < 9; ++c) {
            acc += assignment_probability(params, c / 3, c % 3, pair.n, pair.m);
            cdf[c] = acc;
        }
        for (std::uint64_t k = 0; k < count; ++k) {
            const double u = rng.next_double() * acc; // acc == 1 up to rounding
            int c = 0;
            while (c < 8 && u >= cdf[c]) ++c;
            out[c / 3][c % 3] += 1;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// dense two-phase simplex, Bland's rule

namespace {

constexpr double kRedTol = 1e-9;  // reduced-cost optimality tolerance
constexpr double kPivMin = 1e-8;  // smallest admissible pivot magnitude

// dense tableau; row `rows` is the maintained objective (reduced-cost) row
struct Tableau {
    int rows = 0, cols = 0;
    std::vector<std::vector<double>> a; // rows+1 rows of cols+1 entries (rhs last)
    std::vector<int> basis;

    double rhs(int r) const { return a[r][cols]; }
    double red_cost(int j) const { return a[rows][j]; }
    double objective() const { return -a[rows][cols]; }

    void set_costs(const std::vector<double>& cost) {
        for (int j = 0; j < cols; ++j) a[rows][j] = cost[j];
        a[rows][cols] = 0.0;
        for (int r = 0; r < rows; ++r) {
            const double cb = cost[basis[r]];
            if (cb == 0.0) continue;
            for (int j = 0; j <= cols; ++j) a[rows][j] -= cb * a[r][j];
        }
    }

    void pivot(int pr, int pc) {
        const double pv = a[pr][pc];
        for (double& v : a[pr]) v /= pv;
        a[pr][pc] = 1.0;
        for (int r = 0; r <= rows; ++r) {
            if (r == pr) continue;
            const double factor = a[r][pc];
            if (factor == 0.0) continue;
            for (int j = 0; j <= cols; ++j) a[r][j] -= factor * a[pr][j];
            a[r][pc] = 0.0;
        }
        basis[pr] = pc;
        if (std::abs(a[pr][cols]) < 1e-11) a[pr][cols] = 0.0;
    }

    void drop_row(int r) {
        a.erase(a.begin() + r);
        basis.erase(basis.begin() + r);
        --rows;
    }

    void drop_columns_from(int first) {
        for (auto& row : a) row.erase(row.begin() + first, row.end() - 1);
        cols = first;
    }
};

// minimize the current objective row. Entering by Bland's rule; leaving by
// minimum ratio with ties broken toward the largest pivot element (numerical
// stability), then the smallest basis index (determinism). Returns false on
// unboundedness.
bool simplex_minimize(Tableau& t) {
    for (long iter = 0; iter < 200000; ++iter) {
        int enter = -1;
        for (int j = 0; j < t.cols; ++j) {
            if (t.red_cost(j) < -kRedTol) {
                enter = j;
                break;
            }
        }
        if (enter < 0) return true;
        int leave = -1;
        double best_ratio = 0.0, best_piv = 0.0;
        for (int r = 0; r < t.rows; ++r) {
            const double arj = t.a[r][enter];
            if (arj < kPivMin) continue;
            const double ratio = std::max(t.rhs(r), 0.0) / arj;
            if (leave < 0 || ratio < best_ratio - 1e-12) {
                leave = r;
                best_ratio = ratio;
                best_piv = arj;
            } else if (ratio <= best_ratio + 1e-12) {
                if (arj > best_piv * (1.0 + 1e-12) ||
                    (std::abs(arj - best_piv) <= 1e-12 * best_piv &&
                     t.basis[r] < t.basis[leave])) {
                    leave = r;
                    best_ratio = std::min(best_ratio, ratio);
                    best_piv = arj;
                }
            }
        }
        if (leave < 0) return false;
        t.pivot(leave, enter);
    }
    return true; // iteration cap: current vertex is feasible, value is a valid lower bound on the max
}

} // namespace

LpResult lp_decoy_oracle(const HatMBounds& hat, const ProtocolParams& params,
                         int n_max, PairIndex target) {
    if (n_max > 8) throw std::domain_error("lp_decoy_oracle: n_max above desk scale");
    const auto& in = params.intensities;
    const double z = params.p_z();
    const int side = n_max + 1;
    const int nvar = side * side;

    // recover expectation bounds from the hat scaling
    double elo[3][3], ehi[3][3];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double scale = std::exp(in.mu[i] + in.mu[j]) / (z * z * in.p[i] * in.p[j]);
            elo[i][j] = hat.lower[i][j] / scale;
            ehi[i][j] = hat.upper[i][j] / scale;
        }
    }

    // constraint rows; collapsed intervals become single equality rows so the
    // tableau avoids duplicated-row degeneracy
    enum class Sense { Le, Ge, Eq };
    struct Row {
        std::vector<double> a;
        double b;
        Sense sense;
    };
    std::vector<Row> rows;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            std::vector<double> coef(nvar);
            for (int n = 0; n < side; ++n)
                for (int m = 0; m < side; ++m)
                    coef[n * side + m] = assignment_probability(params, i, j, n, m);
            if (elo[i][j] > ehi[i][j] * (1.0 + 1e-12) + 1e-12)
                return {LpStatus::Infeasible, 0.0};
            if (ehi[i][j] - elo[i][j] <=
                1e-12 * std::max(1.0, std::abs(ehi[i][j]))) {
                rows.push_back({std::move(coef), 0.5 * (elo[i][j] + ehi[i][j]), Sense::Eq});
            } else {
                rows.push_back({coef, ehi[i][j], Sense::Le});
                rows.push_back({std::move(coef), elo[i][j], Sense::Ge});
            }
        }
    }

    const int nrows = int(rows.size());
    int nslack = 0;
    for (const Row& r : rows) nslack += r.sense != Sense::Eq ? 1 : 0;
    const int ncols = nvar + nslack + nrows; // structural + slack + artificial
    Tableau t;
    t.rows = nrows;
    t.cols = ncols;
    t.a.assign(nrows + 1, std::vector<double>(ncols + 1, 0.0));
    t.basis.assign(nrows, -1);

    int slack_at = nvar;
    for (int r = 0; r < nrows; ++r) {
        Row& row = rows[r];
        double scale = std::abs(row.b);
        for (double v : row.a) scale = std::max(scale, std::abs(v));
        if (scale > 0.0) { // row equilibration
            for (double& v : row.a) v /= scale;
            row.b /= scale;
        }
        if (row.b < 0.0) { // normalize rhs nonnegative
            for (double& v : row.a) v = -v;
            row.b = -row.b;
            if (row.sense != Sense::Eq)
                row.sense = row.sense == Sense::Le ? Sense::Ge : Sense::Le;
        }
        for (int c = 0; c < nvar; ++c) t.a[r][c] = row.a[c];
        t.a[r][ncols] = row.b;
        if (row.sense == Sense::Le) {
            t.a[r][slack_at] = 1.0;
            t.basis[r] = slack_at++;
        } else {
            if (row.sense == Sense::Ge) t.a[r][slack_at++] = -1.0;
            t.a[r][nvar + nslack + r] = 1.0;
            t.basis[r] = nvar + nslack + r;
        }
    }

    // phase 1: minimize the artificial sum
    std::vector<double> cost1(ncols, 0.0);
    for (int c = nvar + nslack; c < ncols; ++c) cost1[c] = 1.0;
    t.set_costs(cost1);
    if (!simplex_minimize(t)) return {LpStatus::Unbounded, 0.0};
    if (t.objective() > 1e-7) return {LpStatus::Infeasible, 0.0};

    // eliminate artificials: pivot basic ones onto any usable real column,
    // drop rows that turn out redundant, then drop the artificial columns
    for (int r = t.rows - 1; r >= 0; --r) {
        if (t.basis[r] < nvar + nslack) continue;
        int pc = -1;
        for (int j = 0; j < nvar + nslack; ++j) {
            if (std::abs(t.a[r][j]) > kPivMin) {
                pc = j;
                break;
            }
        }
        if (pc >= 0) t.pivot(r, pc);
        else t.drop_row(r);
    }
    t.drop_columns_from(nvar + nslack);

    // phase 2: maximize the target variable (minimize its negation)
    std::vector<double> cost2(t.cols, 0.0);
    cost2[target.n * side + target.m] = -1.0;
    t.set_costs(cost2);
    if (!simplex_minimize(t)) return {LpStatus::Unbounded, 0.0};
    return {LpStatus::Optimal, -t.objective()};
}

} // namespace tfqkd
