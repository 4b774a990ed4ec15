#include "pyke/similarity.hpp"

#include <algorithm>
#include <ostream>
#include <random>
#include <stdexcept>

#include "pyke/rng.hpp"
#include "pyke/vocabulary.hpp"

namespace pyke {
namespace {

struct Candidate {
    double weight;
    TermId id;
};

// Ranking used everywhere: larger weight wins, equal weights go to the
// smaller term id.
bool preferred(const Candidate& a, const Candidate& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return a.id < b.id;
}

// Bounded priority queue over one arena region. The least preferred kept
// entry sits at slot 0, so a new candidate only has to beat the root. The
// size counter lives in the arena's per-term size array.
class BoundedTopK {
public:
    BoundedTopK(TermId* ids, double* weights, std::uint32_t capacity, std::uint32_t& size)
        : ids_(ids), weights_(weights), capacity_(capacity), size_(size) {}

    void push(TermId id, double weight) {
        Candidate c{weight, id};
        if (size_ < capacity_) {
            ids_[size_] = id;
            weights_[size_] = weight;
            ++size_;
            sift_up(size_ - 1);
        } else if (preferred(c, at(0))) {
            ids_[0] = id;
            weights_[0] = weight;
            sift_down();
        }
    }

    // Sorts the region best-first: descending weight, ascending id.
    void finish() {
        std::vector<Candidate> tmp(size_);
        for (std::uint32_t i = 0; i < size_; ++i) tmp[i] = {weights_[i], ids_[i]};
        std::sort(tmp.begin(), tmp.end(), preferred);
        for (std::uint32_t i = 0; i < size_; ++i) {
            ids_[i] = tmp[i].id;
            weights_[i] = tmp[i].weight;
        }
    }

private:
    Candidate at(std::uint32_t i) const { return {weights_[i], ids_[i]}; }

    void swap_slots(std::uint32_t a, std::uint32_t b) {
        std::swap(ids_[a], ids_[b]);
        std::swap(weights_[a], weights_[b]);
    }

    // Heap order: parent is no more preferred than either child.
    void sift_up(std::uint32_t i) {
        while (i > 0) {
            std::uint32_t parent = (i - 1) / 2;
            if (preferred(at(i), at(parent))) break;
            swap_slots(i, parent);
            i = parent;
        }
    }

    void sift_down() {
        std::uint32_t i = 0;
        while (true) {
            std::uint32_t worst = i;
            std::uint32_t l = 2 * i + 1, r = 2 * i + 2;
            if (l < size_ && !preferred(at(l), at(worst))) worst = l;
            if (r < size_ && !preferred(at(r), at(worst))) worst = r;
            if (worst == i) break;
            swap_slots(i, worst);
            i = worst;
        }
    }

    TermId* ids_;
    double* weights_;
    std::uint32_t capacity_;
    std::uint32_t& size_;
};

}  // namespace

PositiveSets build_positive_sets(const CooccurrenceStats& stats, std::uint32_t k) {
    if (k == 0) throw std::invalid_argument("build_positive_sets: K must be >= 1");

    PositiveSets out;
    out.terms = stats.term_freq.size();
    out.k = k;
    out.ids.assign(out.terms * k, 0);
    out.weights.assign(out.terms * k, 0.0);
    out.sizes.assign(out.terms, 0);
    out.nonzero_degree.assign(out.terms, 0);

    auto queue_for = [&](TermId x) {
        return BoundedTopK(out.ids.data() + std::size_t{x} * k,
                           out.weights.data() + std::size_t{x} * k, k, out.sizes[x]);
    };

    for (std::size_t i = 0; i < stats.pair_keys.size(); ++i) {
        const std::uint64_t key = stats.pair_keys[i];
        const auto x = static_cast<TermId>(key >> 32);
        const auto y = static_cast<TermId>(key & 0xffffffffu);
        const double w = CooccurrenceStats::ppmi_from_counts(
            stats.pair_counts[i], stats.term_freq[x], stats.term_freq[y], stats.total);
        if (w <= 0.0) continue;
        ++out.nonzero_degree[x];
        ++out.nonzero_degree[y];
        queue_for(x).push(y, w);
        queue_for(y).push(x, w);
    }
    for (TermId x = 0; x < out.terms; ++x) queue_for(x).finish();
    return out;
}

NegativeSets sample_negatives(const CooccurrenceStats& stats, const PositiveSets& positives,
                              std::uint32_t k, std::uint64_t seed) {
    const std::size_t m = positives.terms;
    NegativeSets out;
    out.terms = m;
    out.k = k;
    out.ids.assign(m * k, 0);
    out.sizes.assign(m, 0);

    const std::uint64_t stage = rng::stage_seed(seed, rng::Stage::Negatives);

    auto has_positive_ppmi = [&](TermId x, TermId y) {
        const std::uint64_t key = CooccurrenceStats::pair_key(x, y);
        auto it = std::lower_bound(stats.pair_keys.begin(), stats.pair_keys.end(), key);
        if (it == stats.pair_keys.end() || *it != key) return false;
        return CooccurrenceStats::ppmi_from_counts(stats.pair_counts[it - stats.pair_keys.begin()],
                                                   stats.term_freq[x], stats.term_freq[y],
                                                   stats.total) > 0.0;
    };

    for (TermId x = 0; x < m; ++x) {
        TermId* slot = out.ids.data() + std::size_t{x} * k;
        const std::uint64_t candidates = m - 1 - positives.nonzero_degree[x];

        if (candidates < 2ull * k) {
            // Small candidate pool: enumerate it and take a seeded partial
            // shuffle (or everything, when at most K exist).
            std::vector<TermId> pool;
            pool.reserve(candidates);
            for (TermId y = 0; y < m; ++y) {
                if (y == x || has_positive_ppmi(x, y)) continue;
                pool.push_back(y);
            }
            std::mt19937_64 gen(rng::per_term_seed(stage, x));
            const std::uint32_t take = static_cast<std::uint32_t>(
                std::min<std::uint64_t>(k, pool.size()));
            for (std::uint32_t i = 0; i < take; ++i) {
                auto j = i + rng::bounded(gen, pool.size() - i);
                std::swap(pool[i], pool[j]);
                slot[i] = pool[i];
            }
            out.sizes[x] = take;
        } else {
            // Rejection sampling: the zero-similarity set is nearly all of V.
            std::mt19937_64 gen(rng::per_term_seed(stage, x));
            std::uint32_t taken = 0;
            while (taken < k) {
                auto y = static_cast<TermId>(rng::bounded(gen, m));
                if (y == x) continue;
                bool dup = false;
                for (std::uint32_t i = 0; i < taken; ++i)
                    if (slot[i] == y) { dup = true; break; }
                if (dup || has_positive_ppmi(x, y)) continue;
                slot[taken++] = y;
            }
            out.sizes[x] = taken;
        }
        // Canonical ascending order; also keeps the sweep's scattered reads
        // as local as they can be.
        std::sort(slot, slot + out.sizes[x]);
    }
    return out;
}

SimilarityGraph::SimilarityGraph(PositiveSets positives, NegativeSets negatives, double omega)
    : positives_(std::move(positives)), negatives_(std::move(negatives)), omega_(omega) {
    if (positives_.terms != negatives_.terms)
        throw std::invalid_argument("SimilarityGraph: mismatched positive/negative set sizes");
}

SimilarityGraph SimilarityGraph::from_lists(
    std::size_t terms, std::uint32_t k, double omega,
    const std::vector<std::vector<std::pair<TermId, double>>>& positives,
    const std::vector<std::vector<TermId>>& negatives) {
    PositiveSets pos;
    pos.terms = terms;
    pos.k = k;
    pos.ids.assign(terms * k, 0);
    pos.weights.assign(terms * k, 0.0);
    pos.sizes.assign(terms, 0);
    pos.nonzero_degree.assign(terms, 0);
    for (TermId x = 0; x < positives.size(); ++x) {
        for (const auto& [id, w] : positives[x]) {
            auto s = pos.sizes[x]++;
            pos.ids[std::size_t{x} * k + s] = id;
            pos.weights[std::size_t{x} * k + s] = w;
        }
        pos.nonzero_degree[x] = pos.sizes[x];
    }
    NegativeSets neg;
    neg.terms = terms;
    neg.k = k;
    neg.ids.assign(terms * k, 0);
    neg.sizes.assign(terms, 0);
    for (TermId x = 0; x < negatives.size(); ++x) {
        for (TermId id : negatives[x]) {
            auto s = neg.sizes[x]++;
            neg.ids[std::size_t{x} * k + s] = id;
        }
    }
    return SimilarityGraph(std::move(pos), std::move(neg), omega);
}

SimilarityGraph build_similarity_graph(const CooccurrenceStats& stats, std::uint32_t k,
                                       double omega, std::uint64_t seed) {
    auto positives = build_positive_sets(stats, k);
    auto negatives = sample_negatives(stats, positives, k, seed);
    return SimilarityGraph(std::move(positives), std::move(negatives), omega);
}

void dump_similarity_tsv(const SimilarityGraph& graph, const Vocabulary& vocab,
                         std::ostream& out) {
    for (TermId x = 0; x < graph.term_count(); ++x) {
        auto ids = graph.positives(x);
        auto weights = graph.positive_weights(x);
        for (std::size_t i = 0; i < ids.size(); ++i)
            out << vocab.term(x) << '\t' << vocab.term(ids[i]) << '\t' << weights[i] << '\n';
    }
    for (TermId x = 0; x < graph.term_count(); ++x) {
        for (TermId y : graph.negatives(x))
            out << vocab.term(x) << '\t' << vocab.term(y) << '\t' << -graph.omega() << '\n';
    }
}

}  // namespace pyke
