#include "pss/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "pss/rng.hpp"

namespace pss {

namespace {

constexpr double kPenalty = 1e15;

double sanitized(double value) {
    return std::isfinite(value) ? value : kPenalty;
}

} // namespace

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& x0, const NelderMeadOptions& opt) {
    const int dim = static_cast<int>(x0.size());
    if (dim < 1) throw std::invalid_argument("nelder_mead: need at least one dimension");
    const std::size_t max_evals = opt.max_evaluations_per_dim * static_cast<std::size_t>(dim);

    std::vector<Eigen::VectorXd> vertex(static_cast<std::size_t>(dim) + 1, x0);
    std::vector<double> value(static_cast<std::size_t>(dim) + 1);
    std::size_t evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        return sanitized(objective(x));
    };
    for (int i = 0; i < dim; ++i) vertex[static_cast<std::size_t>(i) + 1](i) += opt.initial_step;
    for (std::size_t v = 0; v < vertex.size(); ++v) value[v] = eval(vertex[v]);

    std::vector<std::size_t> order(vertex.size());
    bool converged = false;
    while (true) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[order.size() - 2];

        double diameter = 0;
        for (std::size_t v = 0; v < vertex.size(); ++v) {
            diameter = std::max(diameter, (vertex[v] - vertex[best]).cwiseAbs().maxCoeff());
        }
        if (diameter < opt.simplex_tolerance && value[worst] - value[best] < opt.fvalue_tolerance) {
            converged = true;
            break;
        }
        if (evals >= max_evals) break;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
        for (std::size_t v = 0; v < vertex.size(); ++v) {
            if (v != worst) centroid += vertex[v];
        }
        centroid /= static_cast<double>(dim);

        const Eigen::VectorXd reflected = centroid + opt.reflection * (centroid - vertex[worst]);
        const double f_reflected = eval(reflected);
        if (f_reflected < value[best]) {
            const Eigen::VectorXd expanded = centroid + opt.expansion * (reflected - centroid);
            const double f_expanded = eval(expanded);
            if (f_expanded < f_reflected) {
                vertex[worst] = expanded;
                value[worst] = f_expanded;
            } else {
                vertex[worst] = reflected;
                value[worst] = f_reflected;
            }
        } else if (f_reflected < value[second_worst]) {
            vertex[worst] = reflected;
            value[worst] = f_reflected;
        } else {
            const bool outside = f_reflected < value[worst];
            const Eigen::VectorXd contracted =
                outside ? (centroid + opt.contraction * (reflected - centroid)).eval()
                        : (centroid + opt.contraction * (vertex[worst] - centroid)).eval();
            const double f_contracted = eval(contracted);
            if (f_contracted < (outside ? f_reflected : value[worst])) {
                vertex[worst] = contracted;
                value[worst] = f_contracted;
            } else {
                for (std::size_t v = 0; v < vertex.size(); ++v) {
                    if (v == best) continue;
                    vertex[v] = vertex[best] + opt.shrink * (vertex[v] - vertex[best]);
                    value[v] = eval(vertex[v]);
                }
            }
        }
    }

    const std::size_t best =
        static_cast<std::size_t>(std::min_element(value.begin(), value.end()) - value.begin());
    return NelderMeadResult{vertex[best], value[best], evals, converged};
}

ConditionObjective::ConditionObjective(const CircuitSpec& base, int photons)
    : base_(base), n_(photons) {
    validate(base_);
    if (static_cast<int>(base_.input_ports.size()) != photons) {
        throw std::invalid_argument("ConditionObjective: photon count must match input ports");
    }
    free_dim_ = (base_.sections() - 1) * (base_.m - 1);
    const Eigen::MatrixXd coupling = coupling_matrix(base_.m, base_.kappa);
    section_w_.reserve(base_.section_lengths.size());
    for (double length : base_.section_lengths) {
        section_w_.push_back(section_propagator(coupling, length));
    }
}

std::vector<std::vector<double>> ConditionObjective::layers_from_free(
    const Eigen::VectorXd& free_phases) const {
    if (free_phases.size() != free_dim_) {
        throw std::invalid_argument("layers_from_free: expected " + std::to_string(free_dim_) +
                                    " free phases");
    }
    std::vector<std::vector<double>> layers(static_cast<std::size_t>(base_.sections() - 1),
                                            std::vector<double>(static_cast<std::size_t>(base_.m), 0.0));
    Eigen::Index k = 0;
    for (auto& layer : layers) {
        for (int w = 1; w < base_.m; ++w) layer[static_cast<std::size_t>(w)] = free_phases(k++);
    }
    return layers;
}

Eigen::VectorXd ConditionObjective::free_from_layers(
    const std::vector<std::vector<double>>& phase_layers) const {
    if (static_cast<int>(phase_layers.size()) != base_.sections() - 1) {
        throw std::invalid_argument("free_from_layers: wrong layer count");
    }
    Eigen::VectorXd x(free_dim_);
    Eigen::Index k = 0;
    for (const auto& layer : phase_layers) {
        if (static_cast<int>(layer.size()) != base_.m) {
            throw std::invalid_argument("free_from_layers: wrong layer width");
        }
        for (int w = 1; w < base_.m; ++w) x(k++) = layer[static_cast<std::size_t>(w)];
    }
    return x;
}

Eigen::MatrixXcd ConditionObjective::unitary_at_layers(
    const std::vector<std::vector<double>>& phase_layers) const {
    Eigen::MatrixXcd u = section_w_[0];
    for (std::size_t j = 1; j < section_w_.size(); ++j) {
        const auto& layer = phase_layers[j - 1];
        for (int row = 0; row < base_.m; ++row) {
            u.row(row) *= std::polar(1.0, layer[static_cast<std::size_t>(row)]);
        }
        u = section_w_[j] * u;
    }
    return u;
}

MeasurementMatrix ConditionObjective::measurement_at_layers(
    const std::vector<std::vector<double>>& phase_layers) const {
    const Eigen::MatrixXcd u = unitary_at_layers(phase_layers);
    return build_measurement_matrix(input_submatrix(u, base_.input_ports), n_);
}

double ConditionObjective::at_layers(const std::vector<std::vector<double>>& phase_layers) const {
    const double cond = condition_number(measurement_at_layers(phase_layers));
    return std::isfinite(cond) ? cond : kSingularObjective;
}

double ConditionObjective::operator()(const Eigen::VectorXd& free_phases) const {
    return at_layers(layers_from_free(free_phases));
}

void validate(const DesignProblem& problem) {
    CircuitSpec spec = CircuitSpec::uniform(problem.m, problem.sections, problem.total_length,
                                            problem.input_ports, problem.kappa);
    validate(spec);
    if (problem.n != static_cast<int>(problem.input_ports.size())) {
        throw std::invalid_argument("design problem: photon count must match input ports");
    }
    if (problem.starts < 1) throw std::invalid_argument("design problem: need at least one start");
    if (problem.total_length <= 0) throw std::invalid_argument("design problem: length must be positive");
}

namespace {

std::vector<double> folded(const std::vector<double>& layer) {
    std::vector<double> out(layer.size());
    for (std::size_t i = 0; i < layer.size(); ++i) out[i] = fold_phase(layer[i]);
    return out;
}

// lexicographic comparison of folded phase vectors, for deterministic ties
bool phases_less(const std::vector<std::vector<double>>& a,
                 const std::vector<std::vector<double>>& b) {
    for (std::size_t j = 0; j < a.size(); ++j) {
        for (std::size_t w = 0; w < a[j].size(); ++w) {
            if (a[j][w] != b[j][w]) return a[j][w] < b[j][w];
        }
    }
    return false;
}

} // namespace

DesignResult optimize_phases(const DesignProblem& problem) {
    validate(problem);
    const CircuitSpec base = CircuitSpec::uniform(problem.m, problem.sections, problem.total_length,
                                                  problem.input_ports, problem.kappa);
    const ConditionObjective objective(base, problem.n);
    const int phase_dim = objective.free_dim();

    DesignResult result;
    if (phase_dim == 0 && !problem.optimize_length) {
        // no hidden layers: the design is fully determined
        const double cond = objective.at_layers({});
        if (cond >= kSingularObjective) {
            throw InfeasibleDesignError("design is singular and has no free phases");
        }
        result.phase_layers = {};
        result.total_length = problem.total_length;
        result.condition_number = cond;
        result.starts.push_back(StartRecord{cond, cond, 1, true});
        result.total_evaluations = 1;
        result.converged = true;
        return result;
    }

    const int dim = phase_dim + (problem.optimize_length ? 1 : 0);
    std::vector<NelderMeadResult> runs(static_cast<std::size_t>(problem.starts));
    std::vector<double> start_values(static_cast<std::size_t>(problem.starts));

    auto run_start = [&](int index) {
        SplitMix64 rng(substream_seed(problem.seed, static_cast<std::uint64_t>(index)));
        Eigen::VectorXd x0(dim);
        for (int k = 0; k < phase_dim; ++k) x0(k) = rng.uniform(0.0, 6.283185307179586);
        std::function<double(const Eigen::VectorXd&)> f;
        if (problem.optimize_length) {
            x0(dim - 1) = rng.uniform(0.25 * problem.total_length, 2.0 * problem.total_length);
            f = [&](const Eigen::VectorXd& x) {
                const double length = x(dim - 1);
                if (!(length > 0)) return kSingularObjective;
                CircuitSpec spec = CircuitSpec::uniform(problem.m, problem.sections, length,
                                                        problem.input_ports, problem.kappa);
                const ConditionObjective local(spec, problem.n);
                return local(x.head(phase_dim));
            };
        } else {
            f = [&](const Eigen::VectorXd& x) { return objective(x); };
        }
        start_values[static_cast<std::size_t>(index)] = f(x0);
        NelderMeadResult run = nelder_mead(f, x0, problem.nelder_mead);
        std::size_t spent = run.evaluations;
        for (int restart = 0; restart < problem.max_restarts; ++restart) {
            NelderMeadResult next = nelder_mead(f, run.x, problem.nelder_mead);
            spent += next.evaluations;
            const bool improved = next.f < run.f - 1e-9;
            if (next.f < run.f) run = next;
            if (!improved) break;
        }
        run.evaluations = spent;
        runs[static_cast<std::size_t>(index)] = std::move(run);
    };

    const int threads = std::max(1, problem.threads);
    if (threads == 1) {
        for (int s = 0; s < problem.starts; ++s) run_start(s);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&]() {
                for (int s = next.fetch_add(1); s < problem.starts; s = next.fetch_add(1)) {
                    run_start(s);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    int best = -1;
    std::vector<std::vector<double>> best_layers;
    for (int s = 0; s < problem.starts; ++s) {
        const auto& run = runs[static_cast<std::size_t>(s)];
        result.starts.push_back(
            StartRecord{start_values[static_cast<std::size_t>(s)], run.f, run.evaluations, run.converged});
        result.total_evaluations += run.evaluations;
        std::vector<std::vector<double>> layers;
        for (const auto& layer : objective.layers_from_free(run.x.head(phase_dim))) {
            layers.push_back(folded(layer));
        }
        const bool better =
            best < 0 || run.f < runs[static_cast<std::size_t>(best)].f ||
            (run.f == runs[static_cast<std::size_t>(best)].f && phases_less(layers, best_layers));
        if (better) {
            best = s;
            best_layers = layers;
        }
    }

    const auto& winner = runs[static_cast<std::size_t>(best)];
    if (winner.f >= kSingularObjective) {
        throw InfeasibleDesignError("all optimizer starts ended at singular designs");
    }
    result.phase_layers = best_layers;
    result.total_length =
        problem.optimize_length ? winner.x(dim - 1) : problem.total_length;
    result.condition_number = winner.f;
    result.converged = winner.converged;
    return result;
}

std::vector<SweepPoint> length_sweep(const DesignProblem& problem, const std::vector<double>& lengths) {
    if (lengths.empty()) throw std::invalid_argument("length_sweep: empty grid");
    std::vector<SweepPoint> points;
    points.reserve(lengths.size());
    for (double length : lengths) {
        SweepPoint point;
        point.length = length;
        DesignProblem local = problem;
        local.total_length = length;
        local.optimize_length = false;
        try {
            point.result = optimize_phases(local);
        } catch (const std::exception& e) {
            point.feasible = false;
            point.error = e.what();
        }
        points.push_back(std::move(point));
    }
    return points;
}

} // namespace pss
