// tfkeyforge: finite-key secret-key-rate engine for twin-field QKD.
//
// Subcommands:
//   simulate  write expected detection counts for a configured loss
//   keyrate   turn a counts file into a certified key length (full audit trail)
//   sweep     rate-versus-loss table with per-point parameter optimization
//   optimize  parameter search at a single loss point
//
// All commands are pure functions of (config, inputs, seed): reruns are
// byte-identical, for any --threads value.

#include <CLI11.hpp>

#include "tfqkd/config.hpp"
#include "tfqkd/optimizer.hpp"
#include "tfqkd/pipeline.hpp"

#include <atomic>
#include <cstddef>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw tfqkd::ConfigError("cannot open output file: " + path);
    out << content;
    if (!out) throw tfqkd::ConfigError("failed writing output file: " + path);
}

// validation errors -> exit 2 before any output is produced
void require_valid(const tfqkd::ProtocolParams& params, const tfqkd::SecurityParams& sec) {
    const auto errors = tfqkd::validate(params, sec);
    if (errors.empty()) return;
    std::ostringstream os;
    os << "invalid configuration:";
    for (const auto& e : errors) os << "\n  - " << e;
    throw tfqkd::ConfigError(os.str());
}

struct SweepRow {
    double loss_db = 0.0;
    tfqkd::ProtocolParams params;
    tfqkd::KeyRateResult result;
    double plob = 0.0;
    double e_x = 0.0;
};

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    using tfqkd::format_double;
    std::ostringstream os;
    os << "loss_db,rate,plob,key_length,e_ph_upper,e_x,alpha_sq,mu0,mu1,mu2,"
          "p_x,p_mu0,p_mu1,p_mu2,reason\n";
    for (const auto& r : rows) {
        os << format_double(r.loss_db) << ',' << format_double(r.result.rate) << ','
           << format_double(r.plob) << ',' << r.result.key_length << ','
           << format_double(r.result.e_ph_upper) << ',' << format_double(r.e_x) << ','
           << format_double(r.params.alpha_sq()) << ','
           << format_double(r.params.intensities.mu[0]) << ','
           << format_double(r.params.intensities.mu[1]) << ','
           << format_double(r.params.intensities.mu[2]) << ','
           << format_double(r.params.p_x) << ','
           << format_double(r.params.intensities.p[0]) << ','
           << format_double(r.params.intensities.p[1]) << ','
           << format_double(r.params.intensities.p[2]) << ','
           << (r.result.failure_reason.empty() ? "ok" : r.result.failure_reason) << '\n';
    }
    return os.str();
}

// static index partition; row i's work is independent of the executing
// thread, so outputs match the single-thread run exactly
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const int n = std::min<int>(threads, int(count));
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < n; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-key twin-field QKD secret-key-rate engine"};
    app.require_subcommand(1);

    std::string config_path, counts_path, out_path;
    double loss_db = 50.0;
    double from_db = 30.0, to_db = 80.0, step_db = 5.0;
    std::uint64_t budget = 500, seed = 1;
    int threads = 1;
    bool no_optimize = false;
    std::string eps_budget_flag, convention_flag;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "configuration file (JSON)")->required();
        cmd->add_option("--eps-budget", eps_budget_flag,
                        "failure-budget accounting: paper|strict");
        cmd->add_option("--intensity-convention", convention_flag,
                        "detection-model convention: intensity|amplitude");
    };

    auto* sim = app.add_subcommand("simulate", "write expected counts for one loss value");
    add_common(sim);
    sim->add_option("--loss-db", loss_db, "total loss in dB")->required();
    sim->add_option("--out", out_path, "counts output path")->required();

    auto* key = app.add_subcommand("keyrate", "certified key length from a counts file");
    add_common(key);
    key->add_option("--counts", counts_path, "counts file (JSON)")->required();
    key->add_option("--out", out_path, "result output path")->required();

    auto* swp = app.add_subcommand("sweep", "rate-versus-loss table (CSV)");
    add_common(swp);
    swp->add_option("--from-db", from_db, "sweep start (dB)")->required();
    swp->add_option("--to-db", to_db, "sweep end (dB), inclusive")->required();
    swp->add_option("--step-db", step_db, "sweep step (dB)")->required();
    swp->add_option("--out", out_path, "CSV output path")->required();
    swp->add_option("--budget", budget, "optimizer evaluations per point");
    swp->add_option("--seed", seed, "optimizer seed");
    swp->add_option("--threads", threads, "worker threads");
    swp->add_flag("--no-optimize", no_optimize, "evaluate the configured parameters as-is");

    auto* opt = app.add_subcommand("optimize", "optimize parameters at one loss value");
    add_common(opt);
    opt->add_option("--loss-db", loss_db, "total loss in dB")->required();
    opt->add_option("--budget", budget, "optimizer evaluations");
    opt->add_option("--seed", seed, "optimizer seed");
    opt->add_option("--threads", threads, "worker threads");
    opt->add_option("--out", out_path, "result output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        tfqkd::RunConfig config = tfqkd::load_config(config_path);
        if (eps_budget_flag == "paper") config.budget_mode = tfqkd::BudgetMode::Paper;
        else if (eps_budget_flag == "strict") config.budget_mode = tfqkd::BudgetMode::Strict;
        else if (!eps_budget_flag.empty())
            throw tfqkd::ConfigError("--eps-budget must be paper or strict");
        if (convention_flag == "intensity")
            config.convention = tfqkd::IntensityConvention::Intensity;
        else if (convention_flag == "amplitude")
            config.convention = tfqkd::IntensityConvention::Amplitude;
        else if (!convention_flag.empty())
            throw tfqkd::ConfigError("--intensity-convention must be intensity or amplitude");

        const tfqkd::SecurityParams sec = config.security();
        const tfqkd::AnalysisOptions opts = config.analysis_options();

        if (*sim) {
            tfqkd::ChannelParams ch = config.channel;
            ch.loss_db = loss_db;
            require_valid(config.protocol, sec);
            bool rounded = false;
            tfqkd::CountsFile f;
            f.counts = tfqkd::expected_counts(config.protocol, ch, config.convention, &rounded);
            f.n_rounds = config.protocol.n_rounds;
            f.loss_db = loss_db;
            f.rounded = rounded;
            f.config_hash = tfqkd::config_hash(config);
            write_file(out_path, tfqkd::serialize_counts(f));
        } else if (*key) {
            require_valid(config.protocol, sec);
            const tfqkd::CountsFile f = tfqkd::load_counts(counts_path);
            tfqkd::ChannelParams ch = config.channel;
            ch.loss_db = f.loss_db; // prediction channel matches the data's loss
            tfqkd::ProtocolParams params = config.protocol;
            params.n_rounds = f.n_rounds;
            const tfqkd::KeyRateResult result =
                tfqkd::keyrate_from_counts(params, sec, ch, f.counts, opts);
            write_file(out_path, tfqkd::serialize_result(config, result, params, f.loss_db));
        } else if (*swp) {
            require_valid(config.protocol, sec);
            if (!(step_db > 0.0) || to_db < from_db)
                throw tfqkd::ConfigError("sweep range invalid");
            std::vector<double> losses;
            for (double db = from_db; db <= to_db + 1e-9; db += step_db)
                losses.push_back(db);
            std::vector<SweepRow> rows(losses.size());
            parallel_for(losses.size(), threads, [&](std::size_t i) {
                SweepRow row;
                row.loss_db = losses[i];
                tfqkd::ChannelParams ch = config.channel;
                ch.loss_db = losses[i];
                row.plob = tfqkd::plob(ch.eta());
                if (no_optimize) {
                    row.params = config.protocol;
                    row.result = tfqkd::evaluate(row.params, sec, ch, opts);
                } else {
                    tfqkd::SearchSpace space;
                    space.n_rounds = config.protocol.n_rounds;
                    space.s_cut = config.protocol.s_cut;
                    space.mu2 = config.protocol.intensities.mu[2];
                    // per-point optimizations stay independent and seeded
                    const auto best =
                        tfqkd::optimize(ch, sec, space, budget, seed + i, opts, 1);
                    row.params = best.params;
                    row.result = best.result;
                }
                row.e_x = tfqkd::ex(ch, row.params.alpha);
                rows[i] = row;
            });
            write_file(out_path, sweep_csv(rows));
        } else if (*opt) {
            require_valid(config.protocol, sec);
            tfqkd::ChannelParams ch = config.channel;
            ch.loss_db = loss_db;
            tfqkd::SearchSpace space;
            space.n_rounds = config.protocol.n_rounds;
            space.s_cut = config.protocol.s_cut;
            space.mu2 = config.protocol.intensities.mu[2];
            const auto best = tfqkd::optimize(ch, sec, space, budget, seed, opts, threads);
            write_file(out_path, tfqkd::serialize_result(config, best.result,
                                                         best.params, loss_db));
        }
    } catch (const tfqkd::ConfigError& e) {
        std::cerr << tfqkd::kToolName << ": " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << tfqkd::kToolName << ": internal numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}
