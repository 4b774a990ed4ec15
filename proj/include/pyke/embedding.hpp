#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "pyke/memtrack.hpp"
#include "pyke/similarity.hpp"
#include "pyke/types.hpp"
#include "pyke/vocabulary.hpp"

namespace pyke {

// The published coordinate-wise reciprocal is the default reading of the
// repulsive term; the norm-scaled variant (unit direction, magnitude
// omega / distance) is available for comparison.
enum class RepulsionMode { CoordinateWise, NormScaled };

struct PykeConfig {
    std::uint32_t dimension = 50;       // n
    std::uint32_t top_k = 45;           // K, positive/negative sample bound
    std::uint32_t max_iterations = 100; // T
    double epsilon = 1e-3;              // stop when total displacement falls below
    double delta_e = 0.0414;            // energy released per iteration
    double omega = 1.45557;             // repulsive constant
    std::uint64_t seed = 0;
    double init_scale = 1.0;            // uniform init half-width

    // Engine behavior. clamp_energy=false reproduces the literal published
    // update where the energy keeps falling past zero and reverses the
    // forces; it exists for comparison only.
    bool clamp_energy = true;
    RepulsionMode repulsion = RepulsionMode::CoordinateWise;
    double division_guard = 1e-6;
    bool track_objective = true;
    unsigned threads = 0;  // 0 = all hardware threads

    void validate() const;  // throws std::invalid_argument
};

// Exactly two m x n matrices are retained: the positions being written and
// the previous iteration's snapshot that all force reads go through.
class EmbeddingState {
public:
    EmbeddingState(std::size_t terms, std::uint32_t dimension)
        : terms_(terms),
          dimension_(dimension),
          current_(terms * dimension, 0.0),
          previous_(terms * dimension, 0.0) {}

    std::size_t term_count() const noexcept { return terms_; }
    std::uint32_t dimension() const noexcept { return dimension_; }

    std::span<double> current_row(TermId x) {
        return {current_.data() + std::size_t{x} * dimension_, dimension_};
    }
    std::span<const double> current_row(TermId x) const {
        return {current_.data() + std::size_t{x} * dimension_, dimension_};
    }
    std::span<const double> previous_row(TermId x) const {
        return {previous_.data() + std::size_t{x} * dimension_, dimension_};
    }
    std::span<double> previous_row_mutable(TermId x) {
        return {previous_.data() + std::size_t{x} * dimension_, dimension_};
    }

    const mem::vector<double>& current_matrix() const noexcept { return current_; }
    const mem::vector<double>& previous_matrix() const noexcept { return previous_; }

    void swap_matrices() { current_.swap(previous_); }

    double energy = 1.0;
    std::uint64_t iteration = 0;

private:
    std::size_t terms_;
    std::uint32_t dimension_;
    mem::vector<double> current_;
    mem::vector<double> previous_;
};

struct IterationRecord {
    std::uint64_t t = 0;
    double objective = std::numeric_limits<double>::quiet_NaN();
    double displacement = 0.0;
    double energy = 0.0;
    double millis = 0.0;
};

enum class StopReason { DisplacementBelowEpsilon, IterationCap };

struct RunReport {
    double initial_objective = std::numeric_limits<double>::quiet_NaN();
    std::vector<IterationRecord> iterations;
    double iteration_millis = 0.0;  // force sweeps only, objective tracking excluded
    double total_millis = 0.0;
    StopReason stop_reason = StopReason::IterationCap;
};

struct RunResult {
    EmbeddingState state;
    RunReport report;
};

// Seeded i.i.d. uniform coordinates in [-init_scale, +init_scale); both
// matrices start equal, energy 1, iteration 0.
EmbeddingState init_embeddings(std::size_t terms, const PykeConfig& config);

// Force on x from its positive neighbors: sum of weight * (y - x), read from
// the previous-iteration snapshot. Empty P(x) gives the zero vector.
std::vector<double> attractive_force(TermId x, const EmbeddingState& state,
                                     const SimilarityGraph& graph);

// Force on x from its negative neighbors: -omega times the coordinate-wise
// reciprocal of (y - x), summed, read from the snapshot. Coordinates of the
// difference are clamped to magnitude >= division_guard, keeping their sign
// (sign(0) = +1), so coincident points stay finite.
std::vector<double> repulsive_force(TermId x, const EmbeddingState& state,
                                    const SimilarityGraph& graph, const PykeConfig& config);

// One synchronous sweep: every row of `current` is recomputed from
// `previous` as x + energy * (Fa + Fr), matrices swapped beforehand. Returns
// the total Euclidean displacement; decays the energy afterwards. Throws
// DivergenceError if any coordinate turns non-finite.
double step(EmbeddingState& state, const SimilarityGraph& graph, const PykeConfig& config);

// J = sum of positive-pair distances minus sum of negative-pair distances,
// evaluated on `current`.
double objective(const EmbeddingState& state, const SimilarityGraph& graph);

// Full annealing loop: steps until the displacement drops below epsilon or
// the iteration cap is hit. The energy clamp guarantees termination.
RunResult run(const Vocabulary& vocab, const SimilarityGraph& graph, const PykeConfig& config);

// 2 m n position cells plus the K-bounded sample arenas, in bytes; the basis
// of the linear-space contract.
std::uint64_t estimated_bytes(std::size_t terms, const PykeConfig& config);

}  // namespace pyke
