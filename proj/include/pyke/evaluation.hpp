#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pyke/type_index.hpp"
#include "pyke/types.hpp"

namespace pyke {

// Non-owning view over an m x n row-major embedding matrix; works for both
// live engine state and matrices loaded from disk.
struct EmbeddingView {
    const double* data = nullptr;
    std::size_t terms = 0;
    std::uint32_t dimension = 0;

    std::span<const double> row(TermId x) const {
        return {data + std::size_t{x} * dimension, dimension};
    }
};

struct NeighborList {
    TermId query = 0;
    std::vector<TermId> neighbors;  // ascending distance, ties by ascending id
};

// Cluster labels over an evaluated term set; -1 marks noise points that
// belong to no cluster. Labels are dense in [0, cluster_count) and every
// label has at least one member.
struct Clustering {
    std::vector<TermId> terms;
    std::vector<std::int32_t> labels;
    std::uint32_t cluster_count = 0;
};

struct TypePredictionResult {
    double score = 0.0;
    std::size_t evaluated = 0;
    std::size_t zero_sum_terms = 0;  // terms whose neighbor type sum was all-zero
};

// Exact brute-force nearest neighbors of `query` within `pool` by Euclidean
// distance; the query itself is excluded. mu = 0 is rejected.
NeighborList knn(const EmbeddingView& embeddings, std::span<const TermId> pool, TermId query,
                 std::uint32_t mu);

// Mean per-cluster purity: for each cluster, the average pairwise cosine of
// member type vectors (the x = y diagonal included, matching the metric's
// definition; exclusion available behind the flag), averaged over clusters.
// Noise points belong to no cluster; no clusters yields 0. A clustered term
// without a (nonzero) type vector is an error.
double cluster_purity(const Clustering& clustering, const TypeIndex& types,
                      bool include_diagonal = true);

// Mean over the sample of cos(type(x), sum of the type vectors of x's mu
// nearest neighbors), neighbors drawn from the sample itself. A term whose
// neighbor type sum is all-zero contributes 0 and is counted in the result.
TypePredictionResult type_prediction_score(const EmbeddingView& embeddings,
                                           const TypeIndex& types,
                                           std::span<const TermId> sample, std::uint32_t mu,
                                           unsigned threads = 0);

// Seeded Lloyd iteration with random distinct initial centers. Labels are
// compacted so every returned cluster is nonempty (empty clusters can arise
// when requested_clusters exceeds the number of distinct point positions).
Clustering kmeans(const EmbeddingView& embeddings, std::span<const TermId> pool,
                  std::uint32_t requested_clusters, std::uint64_t seed,
                  std::uint32_t max_iterations = 100);

// The full pool when sample_size is 0 or covers it, else a seeded uniform
// sample without replacement. Result is sorted by term id.
std::vector<TermId> choose_sample(std::span<const TermId> pool, std::size_t sample_size,
                                  std::uint64_t seed);

}  // namespace pyke
