// Acceptance suite: end-to-end checks with hard thresholds, one line per
// criterion. Returns nonzero if any criterion fails. Criterion numbers can be
// passed as arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pyke/cooccurrence.hpp"
#include "pyke/embedding.hpp"
#include "pyke/evaluation.hpp"
#include "pyke/memtrack.hpp"
#include "pyke/ntriples.hpp"
#include "pyke/ols.hpp"
#include "pyke/rng.hpp"
#include "pyke/similarity.hpp"
#include "pyke/synthgen.hpp"
#include "pyke/type_index.hpp"

#ifndef PYKE_DATA_DIR
#define PYKE_DATA_DIR "data"
#endif

using namespace pyke;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool condition, const std::string& message) {
        if (!condition && ok) {
            ok = false;
            detail = message;
        }
    }
};

ParseResult planted_graph(std::uint32_t scale, std::uint64_t seed) {
    synth::SynthSpec spec;
    spec.universities = scale;
    spec.seed = seed;
    std::ostringstream text;
    synth::generate(spec, text);
    return parse_ntriples(text.str());
}

// Random small graph for oracle and termination checks.
ParseResult random_graph(std::mt19937_64& gen, std::size_t max_terms) {
    const std::size_t entities = 2 + gen() % (max_terms - 2);
    const std::size_t predicates = 1 + gen() % 4;
    const std::size_t triples = entities + gen() % (3 * entities);
    std::string text;
    for (std::size_t i = 0; i < triples; ++i) {
        text += "<e" + std::to_string(gen() % entities) + "> ";
        text += "<p" + std::to_string(gen() % predicates) + "> ";
        text += "<e" + std::to_string(gen() % entities) + "> .\n";
    }
    return parse_ntriples(text);
}

// Independent dense PPMI: pair counts recomputed by scanning every triple.
double dense_ppmi(const TripleStore& store, TermId x, TermId y) {
    auto contains = [&](const Triple& t, TermId v) {
        return t.subject == v || t.predicate == v ||
               (!is_literal_id(t.object) && t.object == v);
    };
    std::uint64_t fx = 0, fy = 0, fxy = 0, total = 0;
    for (const auto& t : store.triples()) {
        ++total;
        const bool hx = contains(t, x), hy = contains(t, y);
        fx += hx;
        fy += hy;
        fxy += hx && hy;
    }
    return CooccurrenceStats::ppmi_from_counts(fxy, fx, fy, total);
}

// ---------------------------------------------------------------------------

// Criterion 1: iteration-phase runtime is linear in triple count.
Check criterion_linearity() {
    Check check;
    const std::vector<std::uint32_t> scales{5, 10, 20, 40};
    for (std::uint32_t k : {5u, 10u, 20u}) {
        ScalingConfig config;
        config.top_k = k;
        config.dimension = 25;
        config.iterations = 25;
        config.repetitions = 4;
        config.seed = 7;
        auto report = scaling_run(scales, config);
        const double span = static_cast<double>(report.points.back().triples) /
                            static_cast<double>(report.points.front().triples);
        std::printf("    K=%-2u R^2=%.4f (triples %llu..%llu, span %.1fx)\n", k,
                    report.fit.r_squared,
                    static_cast<unsigned long long>(report.points.front().triples),
                    static_cast<unsigned long long>(report.points.back().triples), span);
        check.require(span >= 8.0, "triple-count span below 8x at K=" + std::to_string(k));
        check.require(report.fit.r_squared >= 0.99,
                      "R^2 " + std::to_string(report.fit.r_squared) + " below 0.99 at K=" +
                          std::to_string(k));
    }
    return check;
}

// Criterion 2: embeddings beat same-shape random embeddings on type
// prediction by at least 0.15 absolute at mu in {1,3,5}, on every seed.
Check criterion_planted_margin() {
    Check check;
    auto parsed = planted_graph(10, 7);
    auto types = build_type_index(parsed.store, parsed.vocab);
    auto stats = count_cooccurrences(parsed.store, parsed.vocab);
    check.require(types.class_count() == 14, "planted graph must carry 14 classes");

    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        PykeConfig config;  // default hyperparameters
        config.seed = seed;
        config.track_objective = false;
        auto graph = build_similarity_graph(stats, config.top_k, config.omega, config.seed);
        auto trained = run(parsed.vocab, graph, config);
        auto random_state = init_embeddings(parsed.vocab.size(), config);

        EmbeddingView trained_view{trained.state.current_matrix().data(), parsed.vocab.size(),
                                   config.dimension};
        EmbeddingView random_view{random_state.current_matrix().data(), parsed.vocab.size(),
                                  config.dimension};
        auto sample = choose_sample(types.typed_subjects(), 3000, seed);

        for (std::uint32_t mu : {1u, 3u, 5u}) {
            const double trained_score =
                type_prediction_score(trained_view, types, sample, mu).score;
            const double random_score =
                type_prediction_score(random_view, types, sample, mu).score;
            const double margin = trained_score - random_score;
            std::printf("    seed=%llu mu=%u trained=%.4f random=%.4f margin=%.4f\n",
                        static_cast<unsigned long long>(seed), mu, trained_score, random_score,
                        margin);
            check.require(margin >= 0.15,
                          "margin below 0.15 at seed " + std::to_string(seed) + ", mu " +
                              std::to_string(mu));
        }
    }
    return check;
}

// Criterion 3: the objective decreases over the run and the energy never
// increases, for 10 seeds with default hyperparameters.
Check criterion_objective_descent() {
    Check check;
    auto parsed = planted_graph(10, 7);
    auto stats = count_cooccurrences(parsed.store, parsed.vocab);

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        PykeConfig config;  // defaults, objective tracking on
        config.seed = seed;
        auto graph = build_similarity_graph(stats, config.top_k, config.omega, config.seed);
        auto result = run(parsed.vocab, graph, config);

        const double initial = result.report.initial_objective;
        const double final_j = result.report.iterations.back().objective;
        check.require(final_j < initial, "objective did not decrease at seed " +
                                             std::to_string(seed));
        double previous_energy = 1.0;
        for (const auto& rec : result.report.iterations) {
            check.require(rec.energy <= previous_energy,
                          "energy increased at seed " + std::to_string(seed));
            previous_energy = rec.energy;
        }
        if (seed < 3)
            std::printf("    seed=%llu J0=%.4g Jfinal=%.4g iterations=%zu\n",
                        static_cast<unsigned long long>(seed), initial, final_j,
                        result.report.iterations.size());
    }
    return check;
}

// Criterion 4: bounded-priority-queue positives equal a dense brute-force
// top-K on 50 random graphs, ties included, bit-exact weights.
Check criterion_ppmi_oracle() {
    Check check;
    std::mt19937_64 gen(2718);
    for (int round = 0; round < 50; ++round) {
        auto parsed = random_graph(gen, 50);
        auto stats = count_cooccurrences(parsed.store, parsed.vocab);
        if (stats.total == 0) continue;
        const std::uint32_t k = 1 + gen() % 10;
        auto positives = build_positive_sets(stats, k);

        for (TermId x = 0; x < parsed.vocab.size(); ++x) {
            std::vector<std::pair<TermId, double>> expected;
            for (TermId y = 0; y < parsed.vocab.size(); ++y) {
                if (y == x) continue;
                const double w = dense_ppmi(parsed.store, x, y);
                if (w > 0.0) expected.emplace_back(y, w);
            }
            std::sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                return a.first < b.first;
            });
            if (expected.size() > k) expected.resize(k);

            check.require(positives.sizes[x] == expected.size(),
                          "positive set size mismatch (graph " + std::to_string(round) + ")");
            if (positives.sizes[x] != expected.size()) return check;
            auto ids = positives.neighbors(x);
            auto weights = positives.neighbor_weights(x);
            for (std::size_t i = 0; i < expected.size(); ++i) {
                check.require(ids[i] == expected[i].first && weights[i] == expected[i].second,
                              "positive entry mismatch (graph " + std::to_string(round) + ")");
            }
        }
    }
    std::printf("    50 graphs, exact match including ties\n");
    return check;
}

// Criterion 5: one-step distance strictly shrinks for isolated positive
// pairs (E*sigma < 1) and strictly grows for isolated negative pairs.
Check criterion_one_step_forces() {
    Check check;
    std::mt19937_64 gen(1618);

    auto make_pair_state = [&](std::uint32_t n) {
        EmbeddingState state(2, n);
        for (TermId x = 0; x < 2; ++x) {
            auto cur = state.current_row(x);
            auto prev = state.previous_row_mutable(x);
            for (std::uint32_t c = 0; c < n; ++c) cur[c] = prev[c] = rng::uniform_symmetric(gen, 5.0);
        }
        // Keep coordinates separated so the movement dominates the slack.
        for (std::uint32_t c = 0; c < n; ++c) {
            if (std::abs(state.current_row(0)[c] - state.current_row(1)[c]) < 1e-2) {
                state.current_row(1)[c] += 0.5;
                state.previous_row_mutable(1)[c] += 0.5;
            }
        }
        return state;
    };
    auto distance = [](const EmbeddingState& state) {
        double s = 0.0;
        for (std::size_t c = 0; c < state.dimension(); ++c) {
            const double d = state.current_row(0)[c] - state.current_row(1)[c];
            s += d * d;
        }
        return std::sqrt(s);
    };

    PykeConfig config;
    for (int round = 0; round < 1000; ++round) {
        const std::uint32_t n = 1 + gen() % 2;
        auto state = make_pair_state(n);
        const double sigma = 0.05 + rng::uniform01(gen) * 1.5;
        double energy = 0.05 + rng::uniform01(gen) * 0.9;
        if (energy * sigma >= 0.99) energy = 0.9 / sigma;
        state.energy = energy;
        auto graph = SimilarityGraph::from_lists(2, 1, 1.0, {{{1, sigma}}, {{0, sigma}}},
                                                 {{}, {}});
        const double before = distance(state);
        step(state, graph, config);
        check.require(distance(state) < before - 1e-12,
                      "C1 violated at round " + std::to_string(round));
    }
    for (int round = 0; round < 1000; ++round) {
        const std::uint32_t n = 1 + gen() % 2;
        auto state = make_pair_state(n);
        state.energy = 0.05 + rng::uniform01(gen) * 0.95;
        const double omega = 0.1 + rng::uniform01(gen) * 2.0;
        auto graph = SimilarityGraph::from_lists(2, 1, omega, {{}, {}}, {{1}, {0}});
        const double before = distance(state);
        step(state, graph, config);
        check.require(distance(state) > before + 1e-12,
                      "C2 violated at round " + std::to_string(round));
    }
    std::printf("    1000 positive-pair and 1000 negative-pair micro-instances\n");
    return check;
}

// Criterion 6: every run halts within min(T, ceil(1/delta_e) + 1) iterations
// and never exceeds T.
Check criterion_termination() {
    Check check;
    std::mt19937_64 gen(4242);
    for (int round = 0; round < 100; ++round) {
        auto parsed = random_graph(gen, 30);
        auto stats = count_cooccurrences(parsed.store, parsed.vocab);
        if (stats.total == 0) continue;

        PykeConfig config;
        config.dimension = 4;
        config.top_k = 2;
        config.max_iterations = 1 + static_cast<std::uint32_t>(gen() % 80);
        config.delta_e = 0.01 + rng::uniform01(gen) * 1.19;  // > 0
        config.epsilon = 1e-3;
        config.omega = 0.5 + rng::uniform01(gen);
        config.seed = gen();
        config.track_objective = false;

        auto graph = build_similarity_graph(stats, config.top_k, config.omega, config.seed);
        auto result = run(parsed.vocab, graph, config);

        const auto bound = std::min<std::uint64_t>(
            config.max_iterations,
            static_cast<std::uint64_t>(std::ceil(1.0 / config.delta_e)) + 1);
        check.require(result.report.iterations.size() <= bound,
                      "exceeded the energy-exhaustion bound at round " + std::to_string(round));
        check.require(result.report.iterations.size() <= config.max_iterations,
                      "exceeded T at round " + std::to_string(round));
    }
    std::printf("    100 random configurations\n");
    return check;
}

// Criterion 7: peak numeric allocation doubles when the graph doubles.
Check criterion_space_contract() {
    Check check;
    auto measure = [](std::uint32_t scale, std::size_t& vocab_out) {
        auto parsed = planted_graph(scale, 17);
        vocab_out = parsed.vocab.size();
        mem::reset_peak();
        const auto baseline = mem::current_bytes();
        auto stats = count_cooccurrences(parsed.store, parsed.vocab);
        auto graph = build_similarity_graph(stats, 10, 1.45557, 3);
        PykeConfig config;
        config.dimension = 20;
        config.top_k = 10;
        config.max_iterations = 3;
        config.epsilon = 1e-12;
        config.track_objective = false;
        run(parsed.vocab, graph, config);
        return mem::peak_bytes() - baseline;
    };

    std::size_t m_small = 0, m_large = 0;
    const auto small = measure(6, m_small);
    const auto large = measure(12, m_large);
    const double ratio = static_cast<double>(large) / static_cast<double>(small);
    std::printf("    m=%zu peak=%.1f MiB; 2m=%zu peak=%.1f MiB; ratio=%.3f\n", m_small,
                small / 1048576.0, m_large, large / 1048576.0, ratio);
    check.require(ratio >= 1.8 && ratio <= 2.2,
                  "allocation ratio " + std::to_string(ratio) + " outside [1.8, 2.2]");
    return check;
}

// Criterion 8: purity and type prediction match hand-expanded values.
Check criterion_metric_correctness() {
    Check check;
    const std::string type = std::string(kRdfTypeIri);

    auto typed_graph = [&](const std::vector<std::vector<std::string>>& classes) {
        std::string text;
        for (std::size_t i = 0; i < classes.size(); ++i)
            for (const auto& cls : classes[i])
                text += "<x" + std::to_string(i) + "> <" + type + "> <" + cls + "> .\n";
        return parse_ntriples(text);
    };

    {
        // One cluster, identical single types: purity exactly 1.
        auto parsed = typed_graph({{"A"}, {"A"}, {"A"}});
        auto types = build_type_index(parsed.store, parsed.vocab);
        Clustering clustering{{types.typed_subjects().begin(), types.typed_subjects().end()},
                              {0, 0, 0},
                              1};
        check.require(std::abs(cluster_purity(clustering, types) - 1.0) < 1e-9,
                      "homogeneous purity != 1");
    }
    {
        // One cluster {x, y}, orthogonal types: (1/4)(1+0+0+1) = 0.5.
        auto parsed = typed_graph({{"A"}, {"B"}});
        auto types = build_type_index(parsed.store, parsed.vocab);
        Clustering clustering{{types.typed_subjects().begin(), types.typed_subjects().end()},
                              {0, 0},
                              1};
        check.require(std::abs(cluster_purity(clustering, types) - 0.5) < 1e-9,
                      "orthogonal-pair purity != 0.5");
    }
    {
        // mu=1, identical type vectors: every contribution is 1.
        auto parsed = typed_graph({{"A"}, {"A"}});
        auto types = build_type_index(parsed.store, parsed.vocab);
        std::vector<double> coords{0.0, 1.0};
        EmbeddingView view{coords.data(), 2, 1};
        std::vector<TermId> sample(types.typed_subjects().begin(),
                                   types.typed_subjects().end());
        const double score = type_prediction_score(view, types, sample, 1).score;
        check.require(std::abs(score - 1.0) < 1e-9, "identical-type prediction != 1");
    }
    {
        // type(x) = (1,0) against a neighbor sum of (1,1): cos = 1/sqrt(2).
        // x1 carries both classes, so each term's single neighbor sum is the
        // other's type vector and both contribute 1/sqrt(2).
        auto parsed = typed_graph({{"A"}, {"A", "B"}});
        auto types = build_type_index(parsed.store, parsed.vocab);
        std::vector<double> coords{0.0, 1.0};
        EmbeddingView view{coords.data(), 2, 1};
        std::vector<TermId> sample(types.typed_subjects().begin(),
                                   types.typed_subjects().end());
        const double score = type_prediction_score(view, types, sample, 1).score;
        check.require(std::abs(score - 1.0 / std::sqrt(2.0)) < 1e-9,
                      "mixed-type prediction != 1/sqrt(2)");
    }
    std::printf("    worked purity and prediction values to 1e-9\n");
    return check;
}

// Criterion 9: the bundled example graph converges and nearest typed
// neighbors share a class, for 5 seeds.
Check criterion_running_example() {
    Check check;
    auto parsed = parse_ntriples_file(std::string(PYKE_DATA_DIR) + "/family.nt");
    auto types = build_type_index(parsed.store, parsed.vocab);
    check.require(types.subject_count() > 0, "bundled example graph has no typed subjects");
    auto stats = count_cooccurrences(parsed.store, parsed.vocab);

    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        PykeConfig config;
        config.top_k = 3;
        config.delta_e = 0.06;
        config.epsilon = 1e-3;
        config.dimension = 50;
        config.omega = 0.3;
        config.seed = seed;
        auto graph = build_similarity_graph(stats, config.top_k, config.omega, config.seed);
        auto result = run(parsed.vocab, graph, config);
        check.require(result.report.iterations.size() <= config.max_iterations,
                      "run did not terminate");

        EmbeddingView view{result.state.current_matrix().data(), parsed.vocab.size(),
                           config.dimension};
        std::vector<TermId> pool(types.typed_subjects().begin(), types.typed_subjects().end());
        for (TermId x : pool) {
            auto nn = knn(view, pool, x, 1);
            const auto sx = *types.subject_slot(x);
            const auto sy = *types.subject_slot(nn.neighbors[0]);
            check.require(types.type_cosine(sx, sy) > 0.0,
                          "nearest typed neighbor shares no class (seed " +
                              std::to_string(seed) + ", term '" +
                              std::string(parsed.vocab.term(x)) + "')");
        }
    }
    std::printf("    5 seeds, nearest-neighbor class coherence on %zu subjects\n",
                types.subject_count());
    return check;
}

struct Criterion {
    int number;
    const char* title;
    std::function<Check()> fn;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "runtime linearity: OLS R^2 >= 0.99 at K in {5, 10, 20}", criterion_linearity},
        {2, "planted-community margin >= 0.15 over random at mu in {1, 3, 5}",
         criterion_planted_margin},
        {3, "objective descent and non-increasing energy across 10 seeds",
         criterion_objective_descent},
        {4, "priority-queue positives equal dense brute force on 50 graphs",
         criterion_ppmi_oracle},
        {5, "one-step contraction/expansion on 1000 + 1000 micro-instances",
         criterion_one_step_forces},
        {6, "termination within min(T, ceil(1/delta_e) + 1) on 100 configs",
         criterion_termination},
        {7, "peak numeric allocation ratio in [1.8, 2.2] when m doubles",
         criterion_space_contract},
        {8, "metric values match hand-expanded worked examples to 1e-9",
         criterion_metric_correctness},
        {9, "bundled example: convergence and typed-neighbor class coherence",
         criterion_running_example},
    };

    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& criterion : criteria) {
        if (!selected.empty() && !selected.count(criterion.number)) continue;
        std::printf("criterion %d: %s\n", criterion.number, criterion.title);
        std::fflush(stdout);
        const auto start = std::chrono::steady_clock::now();
        Check check;
        try {
            check = criterion.fn();
        } catch (const std::exception& e) {
            check.ok = false;
            check.detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s - criterion %d (%.1fs)%s\n\n", check.ok ? "PASS" : "FAIL",
                    criterion.number, seconds,
                    check.ok ? "" : (": " + check.detail).c_str());
        std::fflush(stdout);
        failures += check.ok ? 0 : 1;
    }

    if (failures == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criterion(s) failed\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
