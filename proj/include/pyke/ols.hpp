#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pyke/embedding.hpp"

namespace pyke {

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Ordinary least squares y = slope * x + intercept; needs >= 3 points and at
// least two distinct x values.
OlsFit fit_ols(std::span<const std::pair<double, double>> points);

struct ScalingPoint {
    std::uint32_t scale = 0;         // generator scale parameter
    std::uint64_t triples = 0;       // |G| after dedup
    std::uint64_t vocab = 0;         // |V|
    double iteration_minutes = 0.0;  // timed embedding loop
    double setup_minutes = 0.0;      // parse + counting + sample construction
};

struct ScalingConfig {
    std::uint32_t top_k = 5;
    std::uint32_t dimension = 25;
    std::uint32_t iterations = 20;  // fixed sweep count across scales
    double delta_e = 0.0414;
    double omega = 1.45557;
    std::uint64_t seed = 7;
    unsigned threads = 0;
    std::uint32_t repetitions = 2;  // timing reps per scale; minimum is kept
};

struct ScalingReport {
    ScalingConfig config;
    std::vector<ScalingPoint> points;
    OlsFit fit;  // iteration minutes vs triple count
};

// Generates a synthetic graph per scale, builds the sampling structures, and
// times the embedding loop alone: the iteration phase carries the linearity
// claim, while sample construction is measured separately. The sweep count is
// pinned so every scale performs identical per-term work.
ScalingReport scaling_run(std::span<const std::uint32_t> scales, const ScalingConfig& config);

}  // namespace pyke
