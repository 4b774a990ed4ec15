#include "pyke/ols.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <stdexcept>

#include "pyke/cooccurrence.hpp"
#include "pyke/ntriples.hpp"
#include "pyke/similarity.hpp"
#include "pyke/synthgen.hpp"

namespace pyke {

OlsFit fit_ols(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) throw std::invalid_argument("fit_ols: need at least 3 points");

    const auto n = static_cast<double>(points.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& [x, y] : points) {
        mean_x += x;
        mean_y += y;
    }
    mean_x /= n;
    mean_y /= n;

    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_ols: all x values identical");

    OlsFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;

    double ss_res = 0.0, ss_tot = 0.0;
    for (const auto& [x, y] : points) {
        const double predicted = fit.intercept + fit.slope * x;
        ss_res += (y - predicted) * (y - predicted);
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
    return fit;
}

ScalingReport scaling_run(std::span<const std::uint32_t> scales, const ScalingConfig& config) {
    if (scales.size() < 3) throw std::invalid_argument("scaling_run: need at least 3 scales");

    using Clock = std::chrono::steady_clock;
    auto minutes_since = [](Clock::time_point start) {
        return std::chrono::duration<double>(Clock::now() - start).count() / 60.0;
    };

    ScalingReport report;
    report.config = config;

    PykeConfig run_config;
    run_config.dimension = config.dimension;
    run_config.top_k = config.top_k;
    run_config.max_iterations = config.iterations;
    run_config.epsilon = 1e-12;  // never triggers: every scale runs the full sweep count
    run_config.delta_e = config.delta_e;
    run_config.omega = config.omega;
    run_config.seed = config.seed;
    run_config.track_objective = false;
    run_config.threads = config.threads;

    struct Prepared {
        ParseResult parsed;
        SimilarityGraph graph;
    };
    std::vector<Prepared> prepared;

    for (std::uint32_t scale : scales) {
        const auto setup_start = Clock::now();

        synth::SynthSpec spec;
        spec.universities = scale;
        spec.seed = config.seed;
        std::ostringstream text;
        synth::generate(spec, text);
        auto parsed = parse_ntriples(text.str());

        auto stats = count_cooccurrences(parsed.store, parsed.vocab);
        auto graph = build_similarity_graph(stats, config.top_k, config.omega, config.seed);

        ScalingPoint point;
        point.scale = scale;
        point.triples = parsed.store.size();
        point.vocab = parsed.vocab.size();
        point.setup_minutes = minutes_since(setup_start);
        report.points.push_back(point);
        prepared.push_back(Prepared{std::move(parsed), std::move(graph)});

        // Warm pages, the allocator, and the cores before any timing.
        run(prepared.back().parsed.vocab, prepared.back().graph, run_config);
    }

    // Repetitions are interleaved across scales so slow drift in background
    // load hits every scale alike; the minimum per scale is kept.
    for (auto& point : report.points)
        point.iteration_minutes = std::numeric_limits<double>::infinity();
    for (std::uint32_t rep = 0; rep < std::max(1u, config.repetitions); ++rep) {
        for (std::size_t i = 0; i < prepared.size(); ++i) {
            auto result = run(prepared[i].parsed.vocab, prepared[i].graph, run_config);
            report.points[i].iteration_minutes = std::min(
                report.points[i].iteration_minutes, result.report.iteration_millis / 60000.0);
        }
    }

    std::vector<std::pair<double, double>> xy;
    xy.reserve(report.points.size());
    for (const auto& p : report.points)
        xy.emplace_back(static_cast<double>(p.triples), p.iteration_minutes);
    report.fit = fit_ols(xy);
    return report;
}

}  // namespace pyke
