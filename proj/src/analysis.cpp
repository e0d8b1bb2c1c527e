#include "pss/analysis.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "pss/optimize.hpp"
#include "pss/rng.hpp"

namespace pss {

namespace {

void parallel_trials(std::size_t trials, int threads, const std::function<void(std::size_t)>& body) {
    const int workers = std::max(1, threads);
    if (workers == 1) {
        for (std::size_t i = 0; i < trials; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < trials; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace

Histogram make_histogram(const std::vector<double>& values, int bins) {
    if (bins < 1) throw std::invalid_argument("make_histogram: need at least one bin");
    Histogram h;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    if (values.empty()) return h;
    double lo = values[0];
    double hi = values[0];
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi <= lo) {
        const double pad = std::max(1e-12, 0.5 * std::abs(lo) * 1e-9 + 1e-12);
        lo -= pad;
        hi += pad;
    }
    h.lower = lo;
    h.upper = hi;
    const double width = (hi - lo) / static_cast<double>(bins);
    for (double v : values) {
        auto bin = static_cast<long>((v - lo) / width);
        bin = std::clamp(bin, 0L, static_cast<long>(bins) - 1);
        ++h.counts[static_cast<std::size_t>(bin)];
    }
    return h;
}

StudySummary summarize(const std::vector<double>& values, int bins) {
    if (values.empty()) throw std::invalid_argument("summarize: no values");
    StudySummary s;
    s.trials = values.size();
    s.min = values[0];
    s.max = values[0];
    double sum = 0;
    for (double v : values) {
        sum += v;
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    s.mean = sum / static_cast<double>(values.size());
    double sq = 0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = values.size() > 1 ? std::sqrt(sq / static_cast<double>(values.size() - 1)) : 0.0;
    s.histogram = make_histogram(values, bins);
    return s;
}

StudySummary noise_study(const NoiseStudyConfig& config, std::vector<double>* scores) {
    if (config.trials < 1) throw std::invalid_argument("noise_study: need at least one trial");
    if (config.relative_sigma < 0) throw std::invalid_argument("noise_study: sigma must be >= 0");
    validate(config.design);

    if (config.design.photons() != config.true_state.n) {
        throw std::invalid_argument("noise_study: photon count of state and circuit differ");
    }
    const MeasurementMatrix t = measurement_for_circuit(config.design);
    if (!std::isfinite(condition_number(t))) {
        throw InfeasibleDesignError("noise_study: design has infinite condition number");
    }
    const Reconstructor reconstructor(t);
    const Eigen::VectorXd truth_v = to_free_vector(config.true_state);
    const Eigen::VectorXd gamma = predict_correlations(t, truth_v);

    std::vector<double> fidelities(config.trials, 0.0);
    parallel_trials(config.trials, config.threads, [&](std::size_t trial) {
        SplitMix64 rng(substream_seed(config.seed, trial));
        Eigen::VectorXd noisy = gamma;
        for (Eigen::Index k = 0; k < noisy.size(); ++k) {
            const double eps = config.relative_sigma * rng.gaussian();
            noisy(k) = config.additive ? gamma(k) + eps : gamma(k) * (1.0 + eps);
        }
        const Eigen::VectorXd recovered = reconstructor(noisy, false);
        const SplitStateDensity projected =
            project_physical(from_free_vector(recovered, config.true_state.n));
        const double f = fidelity(config.true_state, projected);
        fidelities[trial] = config.squared_fidelity ? f * f : f;
    });

    if (scores) *scores = fidelities;
    return summarize(fidelities);
}

std::vector<StudySummary> tolerance_study(const ToleranceStudyConfig& config,
                                          std::vector<std::vector<double>>* scores) {
    if (config.trials < 1) throw std::invalid_argument("tolerance_study: need at least one trial");
    for (double magnitude : config.magnitudes) {
        if (magnitude < 0) throw std::invalid_argument("tolerance_study: magnitudes must be >= 0");
    }
    validate(config.design);
    const int photons = config.design.photons();
    const ConditionObjective objective(config.design, photons);

    std::vector<StudySummary> summaries;
    summaries.reserve(config.magnitudes.size());
    if (scores) scores->clear();
    for (std::size_t mag_index = 0; mag_index < config.magnitudes.size(); ++mag_index) {
        const double delta = config.magnitudes[mag_index];
        std::vector<double> conds(config.trials, 0.0);
        parallel_trials(config.trials, config.threads, [&](std::size_t trial) {
            SplitMix64 rng(substream_seed(config.seed, mag_index * config.trials + trial));
            auto layers = config.design.phase_layers;
            for (auto& layer : layers) {
                for (std::size_t w = 1; w < layer.size(); ++w) {
                    const double draw =
                        config.gaussian ? delta * rng.gaussian() : rng.uniform(-delta, delta);
                    layer[w] += draw;
                }
            }
            conds[trial] = condition_number(objective.measurement_at_layers(layers));
        });
        if (scores) scores->push_back(conds);
        summaries.push_back(summarize(conds));
    }
    return summaries;
}

} // namespace pss
