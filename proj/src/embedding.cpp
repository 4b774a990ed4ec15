#include "pyke/embedding.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "pyke/parallel.hpp"
#include "pyke/rng.hpp"

namespace pyke {
namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double guarded(double diff, double guard) {
    if (diff >= guard || diff <= -guard) return diff;
    return diff >= 0.0 ? guard : -guard;  // sign(0) = +1
}

void add_attraction(TermId x, const EmbeddingState& state, const SimilarityGraph& graph,
                    double* force) {
    const std::uint32_t n = state.dimension();
    const double* xrow = state.previous_row(x).data();
    auto pos = graph.positives(x);
    auto weights = graph.positive_weights(x);
    for (std::size_t i = 0; i < pos.size(); ++i) {
        const double* yrow = state.previous_row(pos[i]).data();
        const double w = weights[i];
        for (std::uint32_t c = 0; c < n; ++c) force[c] += w * (yrow[c] - xrow[c]);
    }
}

void add_repulsion(TermId x, const EmbeddingState& state, const SimilarityGraph& graph,
                   const PykeConfig& config, double* force) {
    const std::uint32_t n = state.dimension();
    const double* xrow = state.previous_row(x).data();
    const double omega = graph.omega();
    const double guard = config.division_guard;

    if (config.repulsion == RepulsionMode::CoordinateWise) {
        auto negatives = graph.negatives(x);
        // Negative rows are uniform-random ids: prefetch the next row while
        // the current one is processed, this path is memory-bound at scale.
        for (std::size_t i = 0; i < negatives.size(); ++i) {
            if (i + 1 < negatives.size())
                __builtin_prefetch(state.previous_row(negatives[i + 1]).data());
            const double* yrow = state.previous_row(negatives[i]).data();
            for (std::uint32_t c = 0; c < n; ++c)
                force[c] -= omega / guarded(yrow[c] - xrow[c], guard);
        }
        return;
    }

    // Norm-scaled variant: magnitude omega / d along the unit direction,
    // with d clamped to the guard; coincident points push along all-ones.
    for (TermId y : graph.negatives(x)) {
        const double* yrow = state.previous_row(y).data();
        double dist_sq = 0.0;
        for (std::uint32_t c = 0; c < n; ++c) {
            const double d = yrow[c] - xrow[c];
            dist_sq += d * d;
        }
        const double dist = std::sqrt(dist_sq);
        if (dist >= guard) {
            const double scale = omega / dist_sq;
            for (std::uint32_t c = 0; c < n; ++c) force[c] -= scale * (yrow[c] - xrow[c]);
        } else if (dist > 0.0) {
            const double scale = omega / (guard * dist);
            for (std::uint32_t c = 0; c < n; ++c) force[c] -= scale * (yrow[c] - xrow[c]);
        } else {
            const double v = omega / (guard * std::sqrt(static_cast<double>(n)));
            for (std::uint32_t c = 0; c < n; ++c) force[c] -= v;
        }
    }
}

unsigned effective_threads(const PykeConfig& config) {
    return config.threads == 0 ? default_thread_count() : config.threads;
}

}  // namespace

void PykeConfig::validate() const {
    if (dimension < 1) throw std::invalid_argument("config: dimension must be >= 1");
    if (top_k < 1) throw std::invalid_argument("config: K must be >= 1");
    if (max_iterations < 1) throw std::invalid_argument("config: max iterations must be >= 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("config: epsilon must be > 0");
    if (delta_e < 0.0) throw std::invalid_argument("config: energy decay must be >= 0");
    if (!(omega > 0.0)) throw std::invalid_argument("config: omega must be > 0");
    if (init_scale < 0.0) throw std::invalid_argument("config: init scale must be >= 0");
    if (!(division_guard > 0.0)) throw std::invalid_argument("config: division guard must be > 0");
}

EmbeddingState init_embeddings(std::size_t terms, const PykeConfig& config) {
    EmbeddingState state(terms, config.dimension);
    std::mt19937_64 gen(rng::stage_seed(config.seed, rng::Stage::Init));
    for (TermId x = 0; x < terms; ++x) {
        auto row = state.current_row(x);
        for (auto& v : row) v = rng::uniform_symmetric(gen, config.init_scale);
        auto prev = state.previous_row_mutable(x);
        std::copy(row.begin(), row.end(), prev.begin());
    }
    state.energy = 1.0;
    state.iteration = 0;
    return state;
}

std::vector<double> attractive_force(TermId x, const EmbeddingState& state,
                                     const SimilarityGraph& graph) {
    std::vector<double> force(state.dimension(), 0.0);
    add_attraction(x, state, graph, force.data());
    return force;
}

std::vector<double> repulsive_force(TermId x, const EmbeddingState& state,
                                    const SimilarityGraph& graph, const PykeConfig& config) {
    std::vector<double> force(state.dimension(), 0.0);
    add_repulsion(x, state, graph, config, force.data());
    return force;
}

double step(EmbeddingState& state, const SimilarityGraph& graph, const PykeConfig& config) {
    const std::size_t m = state.term_count();
    const std::uint32_t n = state.dimension();
    const double energy = state.energy;

    state.swap_matrices();

    mem::vector<double> displacement(m, 0.0);
    std::atomic<std::uint64_t> first_bad{std::numeric_limits<std::uint64_t>::max()};

    parallel_for(m, effective_threads(config), [&](std::size_t begin, std::size_t end) {
        std::vector<double> force(n);
        for (std::size_t xi = begin; xi < end; ++xi) {
            const auto x = static_cast<TermId>(xi);
            std::fill(force.begin(), force.end(), 0.0);
            add_attraction(x, state, graph, force.data());
            add_repulsion(x, state, graph, config, force.data());

            const double* prev = state.previous_row(x).data();
            double* out = state.current_row(x).data();
            double norm_sq = 0.0;
            bool finite = true;
            for (std::uint32_t c = 0; c < n; ++c) {
                out[c] = prev[c] + energy * force[c];
                const double moved = out[c] - prev[c];
                norm_sq += moved * moved;
                finite = finite && std::isfinite(out[c]);
            }
            displacement[xi] = std::sqrt(norm_sq);
            if (!finite) {
                auto bad = static_cast<std::uint64_t>(xi);
                auto seen = first_bad.load(std::memory_order_relaxed);
                while (bad < seen &&
                       !first_bad.compare_exchange_weak(seen, bad, std::memory_order_relaxed)) {
                }
            }
        }
    });

    if (auto bad = first_bad.load(); bad != std::numeric_limits<std::uint64_t>::max()) {
        throw DivergenceError(
            "non-finite coordinate for term id " + std::to_string(bad) + " at iteration " +
                std::to_string(state.iteration + 1),
            static_cast<TermId>(bad), state.iteration + 1);
    }

    double total = 0.0;
    for (double d : displacement) total += d;  // fixed order: thread-count independent

    state.energy = config.clamp_energy ? std::max(0.0, energy - config.delta_e)
                                       : energy - config.delta_e;
    ++state.iteration;
    return total;
}

double objective(const EmbeddingState& state, const SimilarityGraph& graph) {
    const std::size_t m = state.term_count();
    const std::uint32_t n = state.dimension();
    mem::vector<double> per_term(m, 0.0);

    parallel_for(m, default_thread_count(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t xi = begin; xi < end; ++xi) {
            const auto x = static_cast<TermId>(xi);
            const double* xrow = state.current_row(x).data();
            auto dist_to = [&](TermId y) {
                const double* yrow = state.current_row(y).data();
                double s = 0.0;
                for (std::uint32_t c = 0; c < n; ++c) {
                    const double d = yrow[c] - xrow[c];
                    s += d * d;
                }
                return std::sqrt(s);
            };
            double v = 0.0;
            for (TermId y : graph.positives(x)) v += dist_to(y);
            for (TermId y : graph.negatives(x)) v -= dist_to(y);
            per_term[xi] = v;
        }
    });

    double total = 0.0;
    for (double v : per_term) total += v;
    return total;
}

RunResult run(const Vocabulary& vocab, const SimilarityGraph& graph, const PykeConfig& config) {
    config.validate();
    if (graph.term_count() != vocab.size())
        throw std::invalid_argument("run: similarity graph does not match vocabulary size");

    const auto run_start = Clock::now();
    RunResult result{init_embeddings(vocab.size(), config), {}};
    auto& state = result.state;
    auto& report = result.report;

    if (config.track_objective) report.initial_objective = objective(state, graph);

    for (std::uint32_t t = 1; t <= config.max_iterations; ++t) {
        const auto sweep_start = Clock::now();
        double displacement;
        try {
            displacement = step(state, graph, config);
        } catch (const DivergenceError& e) {
            throw DivergenceError("embedding diverged: term '" +
                                      std::string(vocab.term(e.term())) + "' " + e.what(),
                                  e.term(), e.iteration());
        }
        const double sweep_millis = millis_since(sweep_start);
        report.iteration_millis += sweep_millis;

        IterationRecord rec;
        rec.t = t;
        rec.displacement = displacement;
        rec.energy = state.energy;
        rec.millis = sweep_millis;
        if (config.track_objective) rec.objective = objective(state, graph);
        report.iterations.push_back(rec);

        if (displacement < config.epsilon) {
            report.stop_reason = StopReason::DisplacementBelowEpsilon;
            report.total_millis = millis_since(run_start);
            return result;
        }
    }
    report.stop_reason = StopReason::IterationCap;
    report.total_millis = millis_since(run_start);
    return result;
}

std::uint64_t estimated_bytes(std::size_t terms, const PykeConfig& config) {
    const std::uint64_t matrix = 2ull * terms * config.dimension * sizeof(double);
    const std::uint64_t samples =
        static_cast<std::uint64_t>(terms) * config.top_k * (2 * sizeof(TermId) + sizeof(double));
    return matrix + samples;
}

}  // namespace pyke
