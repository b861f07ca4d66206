#pragma once
// Reward-generating bandit environments.
//
// An instance is a fixed mean vector plus a reward-noise family; policies
// never observe the means, only rewards from pull(). Mean vectors come from
// i.i.d. U[0,1] or N(0,1) draws, from a linear-Gaussian model L theta with
// unit-sphere rows of L correlating the arms, or verbatim from fixed /
// tabular data.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "random.hpp"

namespace tsvha {

enum class RewardNoise { None, GaussianUnit, GaussianVar2, Bernoulli };

enum class EnvFamily { RandomUniform, RandomNormal, LinearGaussian, Fixed, Tabular };

struct BanditInstance {
    std::vector<double> means;
    RewardNoise noise = RewardNoise::GaussianUnit;
    double optimal_mean = 0.0;

    int arms() const { return static_cast<int>(means.size()); }
    double gap(int arm) const { return optimal_mean - means[static_cast<std::size_t>(arm)]; }
};

struct EnvConfig {
    EnvFamily family = EnvFamily::RandomUniform;
    int arms = 1;
    RewardNoise noise = RewardNoise::GaussianUnit;
    std::vector<double> fixed_means;  // Fixed / Tabular
};

/// Independent uniform draw from the unit sphere in `dim` dimensions.
inline std::vector<double> unit_sphere_row(int dim, rng::Stream& stream) {
    if (dim < 1) throw std::domain_error("unit sphere row requires dimension >= 1");
    std::vector<double> row(static_cast<std::size_t>(dim));
    double norm = 0.0;
    do {
        norm = 0.0;
        for (auto& v : row) {
            v = stream.normal01();
            norm += v * v;
        }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (auto& v : row) v /= norm;
    return row;
}

inline BanditInstance make_instance(const EnvConfig& config, rng::Stream& stream) {
    std::vector<double> means;
    switch (config.family) {
        case EnvFamily::RandomUniform: {
            if (config.arms < 1) throw std::domain_error("environment requires at least 1 arm");
            means.resize(static_cast<std::size_t>(config.arms));
            for (auto& m : means) m = stream.uniform01();
            break;
        }
        case EnvFamily::RandomNormal: {
            if (config.arms < 1) throw std::domain_error("environment requires at least 1 arm");
            means.resize(static_cast<std::size_t>(config.arms));
            for (auto& m : means) m = stream.normal01();
            break;
        }
        case EnvFamily::LinearGaussian: {
            if (config.arms < 1) throw std::domain_error("environment requires at least 1 arm");
            const int dim = config.arms;  // d = K
            std::vector<std::vector<double>> rows;
            rows.reserve(static_cast<std::size_t>(config.arms));
            for (int i = 0; i < config.arms; ++i) rows.push_back(unit_sphere_row(dim, stream));
            std::vector<double> theta(static_cast<std::size_t>(dim));
            for (auto& v : theta) v = stream.normal01();
            means.resize(static_cast<std::size_t>(config.arms));
            for (int i = 0; i < config.arms; ++i) {
                double dot = 0.0;
                for (int j = 0; j < dim; ++j) {
                    dot += rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                           theta[static_cast<std::size_t>(j)];
                }
                means[static_cast<std::size_t>(i)] = dot;
            }
            break;
        }
        case EnvFamily::Fixed:
        case EnvFamily::Tabular: {
            if (config.fixed_means.empty()) {
                throw std::domain_error("fixed/tabular environment requires an explicit mean vector");
            }
            means = config.fixed_means;
            break;
        }
    }
    if (config.noise == RewardNoise::Bernoulli) {
        for (const double m : means) {
            if (!(m >= 0.0 && m <= 1.0)) {
                throw std::domain_error("bernoulli rewards require all means in [0, 1]");
            }
        }
    }
    BanditInstance instance;
    instance.noise = config.noise;
    instance.optimal_mean = *std::max_element(means.begin(), means.end());
    instance.means = std::move(means);
    return instance;
}

inline double pull(const BanditInstance& instance, int arm, rng::Stream& stream) {
    if (arm < 0 || arm >= instance.arms()) throw std::domain_error("invalid arm index");
    const double mean = instance.means[static_cast<std::size_t>(arm)];
    switch (instance.noise) {
        case RewardNoise::None:
            return mean;
        case RewardNoise::GaussianUnit:
            return mean + stream.normal01();
        case RewardNoise::GaussianVar2:
            return mean + stream.normal01() * std::numbers::sqrt2;
        case RewardNoise::Bernoulli:
            return stream.uniform01() < mean ? 1.0 : 0.0;
    }
    throw std::domain_error("unknown reward noise");
}

}  // namespace tsvha
