#pragma once
// Monte Carlo experiment runner with deterministic, schedule-independent
// aggregation.
//
// Each run r owns streams derived from (base_seed, r): channel 0 samples the
// problem instance, channel 1 + p drives policy p. Policies compared within
// a run share the instance but never reward draws. Runs execute on a worker
// pool; per-run results land in run-indexed slots and the reduction is a
// sequential pass over run order, so output is identical for any worker
// count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "envs.hpp"
#include "policy.hpp"
#include "random.hpp"

namespace tsvha {

enum class InstanceMode { ResampledPerRun, FixedAcrossRuns };

struct MetricSet {
    bool cumulative = true;
    bool per_period = false;
    bool final_distribution = false;
};

struct NamedPolicy {
    std::string name;
    PolicySpec spec;
};

struct ExperimentSpec {
    EnvConfig env;
    std::vector<NamedPolicy> policies;
    std::int64_t horizon = 1;
    int runs = 1;
    std::uint64_t base_seed = 0;
    InstanceMode instance_mode = InstanceMode::ResampledPerRun;
    MetricSet metrics;
};

struct SummaryRow {
    double mean = 0.0;
    double stddev = 0.0;
    double q10 = 0.0;
    double q25 = 0.0;
    double q50 = 0.0;
    double q75 = 0.0;
    double q90 = 0.0;
};

struct RegretTrace {
    std::vector<SummaryRow> rows;  // rows[t - 1] aggregates period t
    int runs = 0;
};

struct PolicyResult {
    std::string name;
    RegretTrace cumulative;
    RegretTrace per_period;
    std::vector<double> final_regret;  // final cumulative regret per run, run order
};

struct ExperimentResult {
    std::vector<PolicyResult> policies;
};

/// Run stream for (base_seed, run_index); channel 0 of the derivation scheme.
inline rng::Stream derive_run_rng(std::uint64_t base_seed, std::uint64_t run_index) {
    return rng::derive(base_seed, run_index, 0);
}

/// Exact mean, (n-1) standard deviation and nearest-rank quantiles.
inline SummaryRow aggregate(std::span<const double> values) {
    if (values.empty()) throw std::domain_error("aggregate requires at least one value");
    const auto n = values.size();
    SummaryRow row;
    row.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    if (n > 1 && sorted.front() != sorted.back()) {
        double ss = 0.0;
        for (const double v : values) ss += (v - row.mean) * (v - row.mean);
        row.stddev = std::sqrt(ss / static_cast<double>(n - 1));
    }
    const auto rank = [&](double p) {
        const auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
        return sorted[idx == 0 ? 0 : idx - 1];
    };
    row.q10 = rank(0.10);
    row.q25 = rank(0.25);
    row.q50 = rank(0.50);
    row.q75 = rank(0.75);
    row.q90 = rank(0.90);
    return row;
}

namespace detail {

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

inline int resolve_arm_count(const EnvConfig& env) {
    if (env.family == EnvFamily::Fixed || env.family == EnvFamily::Tabular) {
        return static_cast<int>(env.fixed_means.size());
    }
    return env.arms;
}

inline void validate_experiment(const ExperimentSpec& spec) {
    std::vector<std::string> issues;
    if (spec.runs < 1) issues.push_back("runs must be >= 1");
    if (spec.horizon < 1) issues.push_back("horizon must be >= 1");
    if (spec.policies.empty()) issues.push_back("at least one policy is required");
    if (resolve_arm_count(spec.env) < 1) issues.push_back("environment must have at least 1 arm");
    for (const auto& policy : spec.policies) {
        try {
            validate_policy_spec(policy.spec);
        } catch (const std::domain_error& e) {
            issues.push_back("policy '" + policy.name + "': " + e.what());
        }
    }
    for (std::size_t i = 0; i < spec.policies.size(); ++i) {
        for (std::size_t j = i + 1; j < spec.policies.size(); ++j) {
            if (spec.policies[i].name == spec.policies[j].name) {
                issues.push_back("duplicate policy name '" + spec.policies[i].name + "'");
            }
        }
    }
    if (!issues.empty()) {
        std::string joined = "invalid experiment spec: ";
        for (std::size_t i = 0; i < issues.size(); ++i) {
            if (i > 0) joined += "; ";
            joined += issues[i];
        }
        throw std::domain_error(joined);
    }
}

// Runs `work(run_index)` for every run on `workers` threads; rethrows the
// first failure after joining.
template <typename Work>
inline void parallel_runs(int runs, int workers, Work&& work) {
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto loop = [&] {
        int r;
        while ((r = next.fetch_add(1)) < runs) {
            if (failed.load()) return;
            try {
                work(r);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    const int n = std::min(std::max(1, workers), runs);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n - 1));
    for (int i = 1; i < n; ++i) pool.emplace_back(loop);
    loop();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace detail

inline ExperimentResult run_experiment(const ExperimentSpec& spec, int workers = 0) {
    detail::validate_experiment(spec);
    const int arms = detail::resolve_arm_count(spec.env);
    const auto T = static_cast<std::size_t>(spec.horizon);
    const auto R = static_cast<std::size_t>(spec.runs);
    const auto P = spec.policies.size();

    BanditInstance shared_instance;
    if (spec.instance_mode == InstanceMode::FixedAcrossRuns) {
        rng::Stream stream = rng::derive(spec.base_seed, 0, 0);
        shared_instance = make_instance(spec.env, stream);
    }

    // instant_regret[p][r * T + t]
    std::vector<std::vector<double>> instant_regret(P, std::vector<double>(R * T));

    detail::parallel_runs(spec.runs, detail::resolve_workers(workers), [&](int run) {
        BanditInstance local_instance;
        const BanditInstance* instance = &shared_instance;
        if (spec.instance_mode == InstanceMode::ResampledPerRun) {
            rng::Stream stream = rng::derive(spec.base_seed, static_cast<std::uint64_t>(run), 0);
            local_instance = make_instance(spec.env, stream);
            instance = &local_instance;
        }
        for (std::size_t p = 0; p < P; ++p) {
            rng::Stream stream = rng::derive(spec.base_seed, static_cast<std::uint64_t>(run), 1 + p);
            const PolicySpec& policy = spec.policies[p].spec;
            PolicyState state = make_policy_state(policy, arms);
            double* row = instant_regret[p].data() + static_cast<std::size_t>(run) * T;
            for (std::size_t t = 0; t < T; ++t) {
                const Selection sel = select_arm(state, policy, stream);
                const double reward = pull(*instance, sel.arm, stream);
                state = step(std::move(state), policy, sel.arm, reward, sel.theta);
                row[t] = instance->gap(sel.arm);
            }
        }
    });

    ExperimentResult result;
    result.policies.resize(P);
    std::vector<double> column(R);
    for (std::size_t p = 0; p < P; ++p) {
        PolicyResult& out = result.policies[p];
        out.name = spec.policies[p].name;
        auto& matrix = instant_regret[p];
        if (spec.metrics.per_period) {
            out.per_period.runs = spec.runs;
            out.per_period.rows.resize(T);
            for (std::size_t t = 0; t < T; ++t) {
                for (std::size_t r = 0; r < R; ++r) column[r] = matrix[r * T + t];
                out.per_period.rows[t] = aggregate(column);
            }
        }
        for (std::size_t r = 0; r < R; ++r) {  // prefix sums: instantaneous -> cumulative
            double* row = matrix.data() + r * T;
            for (std::size_t t = 1; t < T; ++t) row[t] += row[t - 1];
        }
        if (spec.metrics.cumulative || spec.metrics.final_distribution) {
            out.cumulative.runs = spec.runs;
            out.cumulative.rows.resize(T);
            for (std::size_t t = 0; t < T; ++t) {
                for (std::size_t r = 0; r < R; ++r) column[r] = matrix[r * T + t];
                out.cumulative.rows[t] = aggregate(column);
            }
        }
        out.final_regret.resize(R);
        for (std::size_t r = 0; r < R; ++r) out.final_regret[r] = matrix[r * T + T - 1];
        matrix.clear();
        matrix.shrink_to_fit();
    }
    return result;
}

/// Fixed-budget best-arm identification: play each policy for `budget`
/// steps, recommend the arm with the highest empirical mean (lowest index on
/// ties) and report the misidentification fraction per policy.
inline std::vector<double> bai_experiment(const ExperimentSpec& spec, std::int64_t budget,
                                          int workers = 0) {
    detail::validate_experiment(spec);
    if (budget < 1) throw std::domain_error("bai budget must be >= 1");
    const int arms = detail::resolve_arm_count(spec.env);
    const auto R = static_cast<std::size_t>(spec.runs);
    const auto P = spec.policies.size();

    BanditInstance shared_instance;
    if (spec.instance_mode == InstanceMode::FixedAcrossRuns) {
        rng::Stream stream = rng::derive(spec.base_seed, 0, 0);
        shared_instance = make_instance(spec.env, stream);
    }

    std::vector<std::vector<unsigned char>> miss(P, std::vector<unsigned char>(R, 0));
    detail::parallel_runs(spec.runs, detail::resolve_workers(workers), [&](int run) {
        BanditInstance local_instance;
        const BanditInstance* instance = &shared_instance;
        if (spec.instance_mode == InstanceMode::ResampledPerRun) {
            rng::Stream stream = rng::derive(spec.base_seed, static_cast<std::uint64_t>(run), 0);
            local_instance = make_instance(spec.env, stream);
            instance = &local_instance;
        }
        for (std::size_t p = 0; p < P; ++p) {
            rng::Stream stream = rng::derive(spec.base_seed, static_cast<std::uint64_t>(run), 1 + p);
            const PolicySpec& policy = spec.policies[p].spec;
            PolicyState state = make_policy_state(policy, arms);
            for (std::int64_t t = 0; t < budget; ++t) {
                const Selection sel = select_arm(state, policy, stream);
                const double reward = pull(*instance, sel.arm, stream);
                state = step(std::move(state), policy, sel.arm, reward, sel.theta);
            }
            const std::vector<double> means = detail::collect_empirical_means(state);
            const int recommended = detail::argmax_lowest(means);
            if (instance->means[static_cast<std::size_t>(recommended)] < instance->optimal_mean) {
                miss[p][static_cast<std::size_t>(run)] = 1;
            }
        }
    });

    std::vector<double> error_rates(P, 0.0);
    for (std::size_t p = 0; p < P; ++p) {
        std::size_t misses = 0;
        for (const unsigned char m : miss[p]) misses += m;
        error_rates[p] = static_cast<double>(misses) / static_cast<double>(R);
    }
    return error_rates;
}

}  // namespace tsvha
