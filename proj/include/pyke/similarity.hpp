#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "pyke/cooccurrence.hpp"
#include "pyke/memtrack.hpp"
#include "pyke/types.hpp"

namespace pyke {

// Per-term top-K positive neighbors by PPMI, built with bounded priority
// queues over the co-occurring pairs; the dense similarity matrix is never
// materialized. Each term's K-slot region lives in one flat arena.
struct PositiveSets {
    std::size_t terms = 0;
    std::uint32_t k = 0;
    mem::vector<TermId> ids;           // arena, stride k
    mem::vector<double> weights;       // arena, stride k
    mem::vector<std::uint32_t> sizes;  // per term, <= k
    mem::vector<std::uint32_t> nonzero_degree;  // per term: # neighbors with PPMI > 0

    std::span<const TermId> neighbors(TermId x) const {
        return {ids.data() + std::size_t{x} * k, sizes[x]};
    }
    std::span<const double> neighbor_weights(TermId x) const {
        return {weights.data() + std::size_t{x} * k, sizes[x]};
    }
};

struct NegativeSets {
    std::size_t terms = 0;
    std::uint32_t k = 0;
    mem::vector<TermId> ids;           // arena, stride k
    mem::vector<std::uint32_t> sizes;  // per term, <= k

    std::span<const TermId> neighbors(TermId x) const {
        return {ids.data() + std::size_t{x} * k, sizes[x]};
    }
};

// For each term, the K neighbors with the largest positive PPMI (all of them
// when fewer than K exist). Ties broken by ascending term id. K = 0 is a
// configuration error.
PositiveSets build_positive_sets(const CooccurrenceStats& stats, std::uint32_t k);

// For each term x, K ids drawn uniformly without replacement from
// {y : PPMI(x, y) = 0, y != x}; all of them when fewer than K exist.
// Deterministic for a fixed seed, independent of evaluation order.
NegativeSets sample_negatives(const CooccurrenceStats& stats, const PositiveSets& positives,
                              std::uint32_t k, std::uint64_t seed);

// Immutable positive/negative sample sets plus the repulsive constant.
// Negative entries carry the implicit weight -omega.
class SimilarityGraph {
public:
    SimilarityGraph(PositiveSets positives, NegativeSets negatives, double omega);

    // Assembles a graph from explicit adjacency lists; used by tests and by
    // micro-instances that bypass the PPMI pipeline.
    static SimilarityGraph from_lists(
        std::size_t terms, std::uint32_t k, double omega,
        const std::vector<std::vector<std::pair<TermId, double>>>& positives,
        const std::vector<std::vector<TermId>>& negatives);

    std::size_t term_count() const noexcept { return positives_.terms; }
    std::uint32_t k() const noexcept { return positives_.k; }
    double omega() const noexcept { return omega_; }

    std::span<const TermId> positives(TermId x) const { return positives_.neighbors(x); }
    std::span<const double> positive_weights(TermId x) const { return positives_.neighbor_weights(x); }
    std::span<const TermId> negatives(TermId x) const { return negatives_.neighbors(x); }

    const PositiveSets& positive_sets() const noexcept { return positives_; }
    const NegativeSets& negative_sets() const noexcept { return negatives_; }

private:
    PositiveSets positives_;
    NegativeSets negatives_;
    double omega_;
};

// One-call pipeline: top-K positives, sampled negatives, assembled graph.
SimilarityGraph build_similarity_graph(const CooccurrenceStats& stats, std::uint32_t k,
                                       double omega, std::uint64_t seed);

// term \t neighbor \t weight, positives first (PPMI weight), then negatives
// (weight -omega). Terms are written as vocabulary strings.
void dump_similarity_tsv(const SimilarityGraph& graph, const Vocabulary& vocab, std::ostream& out);

}  // namespace pyke
