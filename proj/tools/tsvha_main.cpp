// Command-line front end: regret experiments, best-arm identification,
// regret-bound sweeps, selection-probability tables and CSV ingestion.
//
// Exit codes: 0 success, 2 configuration/usage error, 1 runtime error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsvha/config.hpp"
#include "tsvha/csv.hpp"
#include "tsvha/harness.hpp"
#include "tsvha/ingest.hpp"
#include "tsvha/theory.hpp"

namespace fs = std::filesystem;

namespace {

void resolve_tabular_env(tsvha::RunConfig& config) {
    if (config.experiment.env.family != tsvha::EnvFamily::Tabular) return;
    const tsvha::ArmMeansTable table = tsvha::load_arm_means_csv(config.table_path);
    if (table.rows.empty()) throw std::runtime_error("tabular env file has no arms: " + config.table_path);
    config.experiment.env.fixed_means = table.means();
    config.experiment.env.arms = static_cast<int>(table.rows.size());
}

struct CommonOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    int workers = 0;
};

tsvha::RunConfig load_config(const CommonOptions& opts) {
    tsvha::RunConfig config = tsvha::load_run_config(opts.config_path);
    if (opts.seed) config.experiment.base_seed = *opts.seed;
    resolve_tabular_env(config);
    return config;
}

int run_command(const CommonOptions& opts) {
    const tsvha::RunConfig config = load_config(opts);
    const tsvha::ExperimentResult result = tsvha::run_experiment(config.experiment, opts.workers);
    fs::create_directories(opts.out_dir);
    for (const auto& policy : result.policies) {
        if (config.experiment.metrics.cumulative) {
            const fs::path path = fs::path(opts.out_dir) / ("trace_" + policy.name + ".csv");
            tsvha::csv::write_trace_file(path, policy.cumulative);
            std::cout << "wrote " << path.string() << '\n';
        }
        if (config.experiment.metrics.per_period) {
            const fs::path path = fs::path(opts.out_dir) / ("perperiod_" + policy.name + ".csv");
            tsvha::csv::write_trace_file(path, policy.per_period);
            std::cout << "wrote " << path.string() << '\n';
        }
        if (config.experiment.metrics.final_distribution) {
            const fs::path path = fs::path(opts.out_dir) / ("final_" + policy.name + ".csv");
            tsvha::csv::write_final_summary_file(path, policy.cumulative);
            std::cout << "wrote " << path.string() << '\n';
        }
    }
    return 0;
}

int bai_command(const CommonOptions& opts) {
    const tsvha::RunConfig config = load_config(opts);
    if (config.bai_budgets.empty()) {
        throw tsvha::ConfigError("bai requires a [bai] section with a budget list");
    }
    std::vector<tsvha::csv::BaiRow> rows;
    for (const std::int64_t budget : config.bai_budgets) {
        const std::vector<double> rates =
            tsvha::bai_experiment(config.experiment, budget, opts.workers);
        for (std::size_t p = 0; p < rates.size(); ++p) {
            rows.push_back({budget, config.experiment.policies[p].name, rates[p],
                            config.experiment.runs});
        }
    }
    fs::create_directories(opts.out_dir);
    const fs::path path = fs::path(opts.out_dir) / "bai.csv";
    tsvha::csv::write_bai_file(path, rows);
    std::cout << "wrote " << path.string() << '\n';
    return 0;
}

struct BoundOptions {
    std::vector<double> gammas;
    double beta = 1.0;
    double epsilon = 0.5;
    std::vector<double> gaps;
    std::vector<std::int64_t> horizons;
    std::string out_dir = ".";
};

int bound_command(const BoundOptions& opts) {
    std::vector<tsvha::csv::BoundRow> rows;
    for (const double gamma : opts.gammas) {
        for (const std::int64_t horizon : opts.horizons) {
            tsvha::BoundParams params;
            params.gamma = gamma;
            params.beta = opts.beta;
            params.epsilon = opts.epsilon;
            params.gaps = opts.gaps;
            params.horizon = horizon;
            rows.push_back({gamma, opts.beta, opts.epsilon, horizon, tsvha::theorem1_bound(params)});
        }
    }
    fs::create_directories(opts.out_dir);
    const fs::path path = fs::path(opts.out_dir) / "bound.csv";
    tsvha::csv::write_bound_file(path, rows);
    std::cout << "wrote " << path.string() << '\n';
    return 0;
}

struct AnalyzeOptions {
    double mu1 = 0.0;
    double mu2 = 0.0;
    std::int64_t k1 = 0;
    std::int64_t k2 = 0;
    std::vector<int> agents{2};
    std::string out_dir = ".";
};

int analyze_command(const AnalyzeOptions& opts) {
    std::vector<tsvha::csv::AnalyzeRow> rows;
    rows.push_back({opts.mu1, opts.mu2, opts.k1, opts.k2, "TS", 1,
                    tsvha::selection_probability(opts.mu1, opts.mu2, opts.k1, opts.k2,
                                                 tsvha::SelectionVariant::TS)});
    for (const int n : opts.agents) {
        rows.push_back({opts.mu1, opts.mu2, opts.k1, opts.k2, "C1", n,
                        tsvha::selection_probability(opts.mu1, opts.mu2, opts.k1, opts.k2,
                                                     tsvha::SelectionVariant::C1, n)});
        rows.push_back({opts.mu1, opts.mu2, opts.k1, opts.k2, "C2", n,
                        tsvha::selection_probability(opts.mu1, opts.mu2, opts.k1, opts.k2,
                                                     tsvha::SelectionVariant::C2, n)});
    }
    fs::create_directories(opts.out_dir);
    const fs::path path = fs::path(opts.out_dir) / "analyze.csv";
    tsvha::csv::write_analyze_file(path, rows);
    std::cout << "wrote " << path.string() << '\n';
    return 0;
}

struct IngestOptions {
    std::string input;
    std::string schema = "arm_means";
    std::string output;
};

int ingest_command(const IngestOptions& opts) {
    tsvha::ArmMeansTable table;
    if (opts.schema == "arm_means") {
        table = tsvha::load_arm_means_csv(opts.input);
    } else if (opts.schema == "coupon") {
        table = tsvha::load_coupon_raw_csv(opts.input);
    } else if (opts.schema == "edx") {
        table = tsvha::load_edx_raw_csv(opts.input);
    } else {
        throw std::domain_error("unknown ingest schema '" + opts.schema + "'");
    }
    tsvha::write_arm_means_csv(opts.output, table);
    std::cout << "wrote " << opts.output << " (" << table.rows.size() << " arms)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thompson sampling with virtual helping agents: benchmark harness"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    CLI::App* run = app.add_subcommand("run", "Run a regret experiment from a config file");
    run->add_option("--config", run_opts.config_path, "Experiment config file")->required();
    run->add_option("--out", run_opts.out_dir, "Output directory");
    run->add_option("--seed", run_opts.seed, "Override the config seed");
    run->add_option("--workers", run_opts.workers, "Worker thread cap (default: hardware)");

    CommonOptions bai_opts;
    CLI::App* bai = app.add_subcommand("bai", "Fixed-budget best-arm identification");
    bai->add_option("--config", bai_opts.config_path, "Experiment config file with a [bai] section")
        ->required();
    bai->add_option("--out", bai_opts.out_dir, "Output directory");
    bai->add_option("--seed", bai_opts.seed, "Override the config seed");
    bai->add_option("--workers", bai_opts.workers, "Worker thread cap (default: hardware)");

    BoundOptions bound_opts;
    CLI::App* bound = app.add_subcommand("bound", "Evaluate the regret bound over a parameter sweep");
    bound->add_option("--gamma", bound_opts.gammas, "Variance scaling factors")->required();
    bound->add_option("--beta", bound_opts.beta, "Beta in [1, 2)")->required();
    bound->add_option("--eps", bound_opts.epsilon, "Epsilon > 0")->required();
    bound->add_option("--gaps", bound_opts.gaps, "Suboptimality gaps of arms 2..K")->required();
    bound->add_option("--horizon", bound_opts.horizons, "Horizons T")->required();
    bound->add_option("--out", bound_opts.out_dir, "Output directory");

    AnalyzeOptions analyze_opts;
    CLI::App* analyze =
        app.add_subcommand("analyze", "Selection probabilities for a two-armed Gaussian state");
    analyze->add_option("--mu1", analyze_opts.mu1, "Empirical mean of arm 1")->required();
    analyze->add_option("--mu2", analyze_opts.mu2, "Empirical mean of arm 2")->required();
    analyze->add_option("--k1", analyze_opts.k1, "Play count of arm 1")->required();
    analyze->add_option("--k2", analyze_opts.k2, "Play count of arm 2")->required();
    analyze->add_option("--agents", analyze_opts.agents, "Agent counts for C1/C2 rows");
    analyze->add_option("--out", analyze_opts.out_dir, "Output directory");

    IngestOptions ingest_opts;
    CLI::App* ingest = app.add_subcommand("ingest", "Build an arm-means CSV from raw data");
    ingest->add_option("--input", ingest_opts.input, "Input CSV")->required();
    ingest->add_option("--schema", ingest_opts.schema, "arm_means | coupon | edx");
    ingest->add_option("--out", ingest_opts.output, "Output arm-means CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return run_command(run_opts);
        if (bai->parsed()) return bai_command(bai_opts);
        if (bound->parsed()) return bound_command(bound_opts);
        if (analyze->parsed()) return analyze_command(analyze_opts);
        if (ingest->parsed()) return ingest_command(ingest_opts);
    } catch (const tsvha::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
