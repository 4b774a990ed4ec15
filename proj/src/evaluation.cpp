#include "pyke/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "pyke/parallel.hpp"
#include "pyke/rng.hpp"

namespace pyke {
namespace {

double squared_distance(const EmbeddingView& e, TermId a, TermId b) {
    auto ra = e.row(a);
    auto rb = e.row(b);
    double s = 0.0;
    for (std::size_t c = 0; c < ra.size(); ++c) {
        const double d = ra[c] - rb[c];
        s += d * d;
    }
    return s;
}

struct Near {
    double dist_sq;
    TermId id;
};

bool closer(const Near& a, const Near& b) {
    if (a.dist_sq != b.dist_sq) return a.dist_sq < b.dist_sq;
    return a.id < b.id;
}

}  // namespace

NeighborList knn(const EmbeddingView& embeddings, std::span<const TermId> pool, TermId query,
                 std::uint32_t mu) {
    if (mu == 0) throw std::invalid_argument("knn: mu must be >= 1");

    // Bounded worst-at-top heap of the mu closest pool members.
    std::vector<Near> heap;
    heap.reserve(mu);
    auto worse = [](const Near& a, const Near& b) { return closer(a, b); };  // max-heap on (dist, id)

    bool query_seen = false;
    for (TermId y : pool) {
        if (y == query) {
            query_seen = true;
            continue;
        }
        Near cand{squared_distance(embeddings, query, y), y};
        if (heap.size() < mu) {
            heap.push_back(cand);
            std::push_heap(heap.begin(), heap.end(), worse);
        } else if (closer(cand, heap.front())) {
            std::pop_heap(heap.begin(), heap.end(), worse);
            heap.back() = cand;
            std::push_heap(heap.begin(), heap.end(), worse);
        }
    }
    if (!query_seen) throw std::invalid_argument("knn: query not in candidate pool");

    std::sort(heap.begin(), heap.end(), closer);
    NeighborList out;
    out.query = query;
    out.neighbors.reserve(heap.size());
    for (const Near& nb : heap) out.neighbors.push_back(nb.id);
    return out;
}

double cluster_purity(const Clustering& clustering, const TypeIndex& types,
                      bool include_diagonal) {
    if (clustering.cluster_count == 0) return 0.0;

    const std::size_t num_classes = types.class_count();
    std::vector<std::vector<double>> sums(clustering.cluster_count,
                                          std::vector<double>(num_classes, 0.0));
    std::vector<std::size_t> sizes(clustering.cluster_count, 0);

    for (std::size_t i = 0; i < clustering.terms.size(); ++i) {
        const std::int32_t label = clustering.labels[i];
        if (label < 0) continue;  // noise
        const TermId term = clustering.terms[i];
        auto slot = types.subject_slot(term);
        if (!slot)
            throw std::invalid_argument("cluster_purity: term id " + std::to_string(term) +
                                        " has no type vector");
        auto classes = types.type_classes(*slot);
        // Normalized binary vector: each set class contributes 1/sqrt(#set).
        const double inv_norm = 1.0 / std::sqrt(static_cast<double>(classes.size()));
        for (auto c : classes) sums[label][c] += inv_norm;
        ++sizes[label];
    }

    // sum_{x,y in cluster} cos(type(x), type(y)) == || sum_x type(x)/|type(x)| ||^2,
    // diagonal included.
    double total = 0.0;
    std::size_t counted = 0;
    for (std::uint32_t l = 0; l < clustering.cluster_count; ++l) {
        if (sizes[l] == 0) continue;
        ++counted;
        double norm_sq = 0.0;
        for (double v : sums[l]) norm_sq += v * v;
        const auto size = static_cast<double>(sizes[l]);
        if (include_diagonal) {
            total += norm_sq / (size * size);
        } else if (sizes[l] > 1) {
            total += (norm_sq - size) / (size * (size - 1.0));
        } else {
            total += 1.0;  // singleton: no off-diagonal pairs
        }
    }
    return counted == 0 ? 0.0 : total / static_cast<double>(counted);
}

TypePredictionResult type_prediction_score(const EmbeddingView& embeddings,
                                           const TypeIndex& types,
                                           std::span<const TermId> sample, std::uint32_t mu,
                                           unsigned threads) {
    if (mu == 0) throw std::invalid_argument("type_prediction_score: mu must be >= 1");
    if (sample.size() < 2)
        throw std::invalid_argument("type_prediction_score: sample must hold >= 2 terms");
    for (TermId x : sample)
        if (!types.is_typed_subject(x))
            throw std::invalid_argument("type_prediction_score: term id " + std::to_string(x) +
                                        " is not a typed subject");

    const std::size_t num_classes = types.class_count();
    std::vector<double> contributions(sample.size(), 0.0);
    std::vector<std::uint8_t> zero_sum(sample.size(), 0);

    parallel_for(sample.size(), threads == 0 ? default_thread_count() : threads,
                 [&](std::size_t begin, std::size_t end) {
                     std::vector<double> neighbor_sum(num_classes);
                     for (std::size_t i = begin; i < end; ++i) {
                         const TermId x = sample[i];
                         auto nn = knn(embeddings, sample, x, mu);
                         std::fill(neighbor_sum.begin(), neighbor_sum.end(), 0.0);
                         for (TermId y : nn.neighbors) {
                             auto slot = types.subject_slot(y);
                             for (auto c : types.type_classes(*slot)) neighbor_sum[c] += 1.0;
                         }
                         double dot = 0.0;
                         double sum_norm_sq = 0.0;
                         for (double v : neighbor_sum) sum_norm_sq += v * v;
                         auto x_classes = types.type_classes(*types.subject_slot(x));
                         for (auto c : x_classes) dot += neighbor_sum[c];
                         if (sum_norm_sq == 0.0) {
                             zero_sum[i] = 1;  // cosine with the zero vector: contributes 0
                         } else {
                             contributions[i] =
                                 dot / (std::sqrt(static_cast<double>(x_classes.size())) *
                                        std::sqrt(sum_norm_sq));
                         }
                     }
                 });

    TypePredictionResult result;
    result.evaluated = sample.size();
    double total = 0.0;
    for (double v : contributions) total += v;
    for (auto z : zero_sum) result.zero_sum_terms += z;
    result.score = total / static_cast<double>(sample.size());
    return result;
}

Clustering kmeans(const EmbeddingView& embeddings, std::span<const TermId> pool,
                  std::uint32_t requested_clusters, std::uint64_t seed,
                  std::uint32_t max_iterations) {
    if (requested_clusters == 0) throw std::invalid_argument("kmeans: need at least one cluster");
    if (pool.empty()) throw std::invalid_argument("kmeans: empty pool");
    if (requested_clusters > pool.size())
        throw std::invalid_argument("kmeans: more clusters than points");

    const std::uint32_t n = embeddings.dimension;
    const std::uint32_t L = requested_clusters;

    // Seeded choice of distinct initial centers.
    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 gen(rng::stage_seed(seed, rng::Stage::Kmeans));
    for (std::uint32_t i = 0; i < L; ++i) {
        auto j = i + rng::bounded(gen, order.size() - i);
        std::swap(order[i], order[j]);
    }
    std::vector<double> centers(std::size_t{L} * n);
    for (std::uint32_t l = 0; l < L; ++l) {
        auto row = embeddings.row(pool[order[l]]);
        std::copy(row.begin(), row.end(), centers.begin() + std::size_t{l} * n);
    }

    std::vector<std::int32_t> labels(pool.size(), 0);
    std::vector<std::int32_t> prev_labels(pool.size(), -1);

    for (std::uint32_t iter = 0; iter < max_iterations; ++iter) {
        parallel_for(pool.size(), default_thread_count(), [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                auto row = embeddings.row(pool[i]);
                std::int32_t best = 0;
                double best_dist = std::numeric_limits<double>::infinity();
                for (std::uint32_t l = 0; l < L; ++l) {
                    const double* center = centers.data() + std::size_t{l} * n;
                    double d = 0.0;
                    for (std::uint32_t c = 0; c < n; ++c) {
                        const double diff = row[c] - center[c];
                        d += diff * diff;
                    }
                    if (d < best_dist) {  // ties keep the lowest center index
                        best_dist = d;
                        best = static_cast<std::int32_t>(l);
                    }
                }
                labels[i] = best;
            }
        });

        if (labels == prev_labels) break;
        prev_labels = labels;

        std::vector<double> new_centers(std::size_t{L} * n, 0.0);
        std::vector<std::size_t> counts(L, 0);
        for (std::size_t i = 0; i < pool.size(); ++i) {
            auto row = embeddings.row(pool[i]);
            double* center = new_centers.data() + static_cast<std::size_t>(labels[i]) * n;
            for (std::uint32_t c = 0; c < n; ++c) center[c] += row[c];
            ++counts[labels[i]];
        }
        for (std::uint32_t l = 0; l < L; ++l) {
            if (counts[l] == 0) continue;  // keep the old center
            double* center = centers.data() + std::size_t{l} * n;
            const double* sum = new_centers.data() + std::size_t{l} * n;
            for (std::uint32_t c = 0; c < n; ++c)
                center[c] = sum[c] / static_cast<double>(counts[l]);
        }
    }

    // Compact labels so every reported cluster is nonempty.
    std::vector<std::size_t> members(L, 0);
    for (auto l : labels) ++members[l];
    std::vector<std::int32_t> remap(L, -1);
    std::int32_t next = 0;
    for (std::uint32_t l = 0; l < L; ++l)
        if (members[l] > 0) remap[l] = next++;

    Clustering out;
    out.terms.assign(pool.begin(), pool.end());
    out.labels.resize(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) out.labels[i] = remap[labels[i]];
    out.cluster_count = static_cast<std::uint32_t>(next);
    return out;
}

std::vector<TermId> choose_sample(std::span<const TermId> pool, std::size_t sample_size,
                                  std::uint64_t seed) {
    std::vector<TermId> out(pool.begin(), pool.end());
    if (sample_size != 0 && sample_size < out.size()) {
        std::mt19937_64 gen(rng::stage_seed(seed, rng::Stage::Sample));
        for (std::size_t i = 0; i < sample_size; ++i) {
            auto j = i + rng::bounded(gen, out.size() - i);
            std::swap(out[i], out[j]);
        }
        out.resize(sample_size);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace pyke
