#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include "support/stats.hpp"
#include "tsvha/policy.hpp"
#include "tsvha/theory.hpp"

using namespace tsvha;

namespace {

PolicySpec ts_spec() { return PolicySpec{PolicyKind::TS, PosteriorFamily::Gaussian, {}, 0.0}; }

PolicySpec tsvha_spec(CombinerKind kind, int agents) {
    PolicySpec spec;
    spec.kind = PolicyKind::TSVHA;
    spec.combiner.kind = kind;
    spec.combiner.agents = agents;
    return spec;
}

// Two Gaussian arms with chosen empirical means and play counts.
PolicyState two_arm_state(double mu1, double mu2, std::int64_t k1, std::int64_t k2) {
    PolicyState state = make_policy_state(ts_spec(), 2);
    state.posteriors[0] = GaussianArmState{mu1 * static_cast<double>(k1 + 1), k1};
    state.posteriors[1] = GaussianArmState{mu2 * static_cast<double>(k2 + 1), k2};
    return state;
}

}  // namespace

TEST_CASE("single arm is always selected") {
    const PolicyState state = make_policy_state(ts_spec(), 1);
    rng::Stream stream(1);
    for (int i = 0; i < 100; ++i) {
        REQUIRE(select_arm(state, ts_spec(), stream).arm == 0);
    }
}

TEST_CASE("identical posteriors are selected with equal frequency under TS") {
    const PolicyState state = two_arm_state(0.5, 0.5, 3, 3);
    rng::Stream stream(2);
    const std::size_t trials = 100000;
    std::size_t first = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        if (select_arm(state, ts_spec(), stream).arm == 0) ++first;
    }
    const double freq = static_cast<double>(first) / static_cast<double>(trials);
    REQUIRE(freq == Catch::Approx(0.5).margin(3.0 * std::sqrt(0.25 / static_cast<double>(trials))));
}

TEST_CASE("tsvha c1 selection frequency matches the q-function prediction") {
    const PolicyState state = two_arm_state(0.6, 0.4, 7, 7);
    const PolicySpec spec = tsvha_spec(CombinerKind::C1, 4);
    rng::Stream stream(3);
    const std::size_t trials = 100000;
    std::size_t first = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        if (select_arm(state, spec, stream).arm == 0) ++first;
    }
    const double freq = static_cast<double>(first) / static_cast<double>(trials);
    const double predicted = selection_probability(0.6, 0.4, 7, 7, SelectionVariant::C1, 4);
    REQUIRE(predicted == Catch::Approx(0.788145).margin(1e-6));
    REQUIRE(freq == Catch::Approx(predicted).margin(3.0 * teststat::se_proportion(predicted, trials)));
}

TEST_CASE("identity combiner reproduces plain thompson sampling") {
    // Four arms sharing one configuration; selection counts must be
    // homogeneous across the two policies (chi-square, p > 0.01 at df = 3).
    PolicyState state = make_policy_state(ts_spec(), 4);
    for (auto& post : state.posteriors) post = GaussianArmState{1.8, 5};
    const PolicySpec identity = tsvha_spec(CombinerKind::Identity, 1);
    rng::Stream stream_a(4);
    rng::Stream stream_b(5);
    const std::size_t trials = 100000;
    std::vector<std::int64_t> counts_ts(4, 0);
    std::vector<std::int64_t> counts_vha(4, 0);
    for (std::size_t i = 0; i < trials; ++i) {
        ++counts_ts[static_cast<std::size_t>(select_arm(state, ts_spec(), stream_a).arm)];
        ++counts_vha[static_cast<std::size_t>(select_arm(state, identity, stream_b).arm)];
    }
    const double stat = teststat::chi_square_homogeneity(counts_ts, counts_vha);
    REQUIRE(stat < 11.3449);  // chi-square 0.99 quantile, df = 3
}

TEST_CASE("c1 exploits more and c2 explores more than TS") {
    const PolicyState state = two_arm_state(0.6, 0.4, 7, 7);
    const std::size_t trials = 1000000;
    auto frequency = [&](const PolicySpec& spec, std::uint64_t seed) {
        rng::Stream stream(seed);
        std::size_t first = 0;
        for (std::size_t i = 0; i < trials; ++i) {
            if (select_arm(state, spec, stream).arm == 0) ++first;
        }
        return static_cast<double>(first) / static_cast<double>(trials);
    };
    const double p_ts = frequency(ts_spec(), 6);
    const double p_c1 = frequency(tsvha_spec(CombinerKind::C1, 2), 7);
    const double p_c2 = frequency(tsvha_spec(CombinerKind::C2, 2), 8);
    const double se = std::sqrt(2.0 * 0.25 / static_cast<double>(trials));
    REQUIRE(p_c1 - p_ts > 3.0 * se);
    REQUIRE(p_ts - p_c2 > 3.0 * se);
}

TEST_CASE("c1 approaches greedy as the agent count grows") {
    const PolicyState state = two_arm_state(0.55, 0.45, 10, 10);
    const PolicySpec many = tsvha_spec(CombinerKind::C1, 10000);
    const PolicySpec greedy{PolicyKind::Greedy, PosteriorFamily::Gaussian, {}, 0.0};
    rng::Stream stream(9);
    rng::Stream greedy_stream(10);
    const std::size_t trials = 10000;
    std::size_t agree = 0;
    for (std::size_t i = 0; i < trials; ++i) {
        const int a = select_arm(state, many, stream).arm;
        const int b = select_arm(state, greedy, greedy_stream).arm;
        if (a == b) ++agree;
    }
    REQUIRE(static_cast<double>(agree) / static_cast<double>(trials) >= 0.99);
}

TEST_CASE("greedy picks the highest empirical mean deterministically") {
    const PolicyState state = two_arm_state(0.2, 0.8, 5, 5);
    const PolicySpec greedy{PolicyKind::Greedy, PosteriorFamily::Gaussian, {}, 0.0};
    rng::Stream stream(11);
    const Selection sel = select_arm(state, greedy, stream);
    REQUIRE(sel.arm == 1);
    REQUIRE(sel.theta == Catch::Approx(0.8));
}

TEST_CASE("greedy breaks the all-zero tie at the lowest index") {
    const PolicyState state = make_policy_state(ts_spec(), 5);
    const PolicySpec greedy{PolicyKind::Greedy, PosteriorFamily::Gaussian, {}, 0.0};
    rng::Stream stream(12);
    REQUIRE(select_arm(state, greedy, stream).arm == 0);
}

TEST_CASE("sts replays the earliest satisficing period") {
    // Six nearly deterministic arms: huge play counts pin the draws to the
    // empirical means.
    PolicySpec spec;
    spec.kind = PolicyKind::STS;
    PolicyState state = make_policy_state(spec, 6);
    const std::int64_t k = 1000000000;
    for (int i = 0; i < 6; ++i) {
        state.posteriors[static_cast<std::size_t>(i)] = GaussianArmState{0.0, k};
    }
    state.posteriors[0] = GaussianArmState{0.72 * static_cast<double>(k + 1), k};  // candidate
    state.history = {{1, 3, 0.70}, {2, 5, 0.60}};
    state.t = 3;

    rng::Stream stream(13);
    REQUIRE(sts_select(state, 0.05, stream) == 3);   // 0.70 + 0.05 >= 0.72
    REQUIRE(sts_select(state, 0.01, stream) == 0);   // no past period qualifies

    spec.epsilon = 0.05;
    REQUIRE(select_arm(state, spec, stream).arm == 3);
}

TEST_CASE("sts with an empty history plays the candidate") {
    PolicySpec spec;
    spec.kind = PolicyKind::STS;
    spec.epsilon = 0.5;
    const PolicyState state = make_policy_state(spec, 3);
    rng::Stream stream(14);
    const int arm = sts_select(state, 0.5, stream);
    REQUIRE(arm >= 0);
    REQUIRE(arm < 3);
    REQUIRE(select_arm(state, spec, stream).arm >= 0);
}

TEST_CASE("step updates only the played arm") {
    const PolicySpec spec = ts_spec();
    PolicyState state = make_policy_state(spec, 3);
    state = step(std::move(state), spec, 1, 0.8, 0.4);
    const auto& played = std::get<GaussianArmState>(state.posteriors[1]);
    REQUIRE(played.play_count == 1);
    REQUIRE(played.mean() == Catch::Approx(0.4));
    for (const std::size_t i : {std::size_t{0}, std::size_t{2}}) {
        const auto& other = std::get<GaussianArmState>(state.posteriors[i]);
        REQUIRE(other.play_count == 0);
        REQUIRE(other.reward_sum == 0.0);
    }
    REQUIRE(state.t == 2);
    REQUIRE(state.history.empty());
    REQUIRE_THROWS_AS(step(std::move(state), spec, 5, 0.0, 0.0), std::domain_error);
}

TEST_CASE("sts step appends exactly one history entry per period") {
    PolicySpec spec;
    spec.kind = PolicyKind::STS;
    spec.epsilon = 0.1;
    PolicyState state = make_policy_state(spec, 2);
    rng::Stream stream(15);
    for (int t = 1; t <= 20; ++t) {
        const Selection sel = select_arm(state, spec, stream);
        state = step(std::move(state), spec, sel.arm, 1.0, sel.theta);
        REQUIRE(static_cast<std::int64_t>(state.history.size()) == state.t - 1);
        REQUIRE(state.history.back().period == state.t - 1);
    }
}

TEST_CASE("replaying the same seed reproduces the trajectory") {
    const PolicySpec spec = tsvha_spec(CombinerKind::C3, 1);
    auto play = [&] {
        PolicyState state = make_policy_state(spec, 4);
        rng::Stream stream(16);
        std::vector<int> arms;
        for (int t = 0; t < 50; ++t) {
            const Selection sel = select_arm(state, spec, stream);
            const double reward = stream.uniform01() < 0.4 ? 1.0 : 0.0;
            state = step(std::move(state), spec, sel.arm, reward, sel.theta);
            arms.push_back(sel.arm);
        }
        return std::pair{arms, state};
    };
    const auto [arms_a, state_a] = play();
    const auto [arms_b, state_b] = play();
    REQUIRE(arms_a == arms_b);
    REQUIRE(state_a.t == state_b.t);
    for (std::size_t i = 0; i < state_a.posteriors.size(); ++i) {
        const auto& ga = std::get<GaussianArmState>(state_a.posteriors[i]);
        const auto& gb = std::get<GaussianArmState>(state_b.posteriors[i]);
        REQUIRE(ga.reward_sum == gb.reward_sum);
        REQUIRE(ga.play_count == gb.play_count);
    }
}

TEST_CASE("c3 uses a beta-family materialized average when posteriors are beta") {
    PolicySpec spec = tsvha_spec(CombinerKind::C3, 1);
    spec.family = PosteriorFamily::Beta;
    PolicyState state = make_policy_state(spec, 3);
    rng::Stream stream(17);
    for (int t = 0; t < 200; ++t) {
        const Selection sel = select_arm(state, spec, stream);
        REQUIRE(sel.arm >= 0);
        REQUIRE(sel.arm < 3);
        const double reward = stream.uniform01() < 0.5 ? 1.0 : 0.0;
        state = step(std::move(state), spec, sel.arm, reward, sel.theta);
    }
    REQUIRE(state.t == 201);
}

TEST_CASE("policy spec validation rejects malformed combiner settings") {
    REQUIRE_THROWS_AS(make_policy_state(tsvha_spec(CombinerKind::Identity, 2), 2), std::domain_error);
    REQUIRE_THROWS_AS(make_policy_state(tsvha_spec(CombinerKind::C2, 1), 2), std::domain_error);
    PolicySpec bad_eps;
    bad_eps.epsilon = -0.1;
    REQUIRE_THROWS_AS(make_policy_state(bad_eps, 2), std::domain_error);
    REQUIRE_THROWS_AS(make_policy_state(ts_spec(), 0), std::domain_error);
}
