// Command-line front end: generate / ingest / embed / eval / scaling.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical divergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pyke/cooccurrence.hpp"
#include "pyke/embedding.hpp"
#include "pyke/evaluation.hpp"
#include "pyke/ntriples.hpp"
#include "pyke/ols.hpp"
#include "pyke/persistence.hpp"
#include "pyke/similarity.hpp"
#include "pyke/synthgen.hpp"
#include "pyke/type_index.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitDivergence = 3;

struct GenerateArgs {
    std::uint32_t scale = 1;
    std::uint32_t classes = 14;
    std::uint64_t seed = 0;
    double cross_links = 0.0;
    std::string out;
};

struct IngestArgs {
    std::string input;
    std::string cache;
    std::string type_predicate = std::string(pyke::kRdfTypeIri);
};

struct EmbedArgs {
    std::string input;
    std::string out;
    std::string report;
    std::string dump_similarity;
    pyke::PykeConfig config;
    bool exclude_type_triples = false;
    bool strict_paper_energy = false;
    bool norm_repulsion = false;
    std::string type_predicate = std::string(pyke::kRdfTypeIri);
    std::uint64_t memory_budget_mb = 8192;
};

struct EvalArgs {
    std::string embeddings;
    std::string graph;
    std::vector<std::uint32_t> mu_list{1, 3, 5, 10};
    std::size_t sample_size = 10000;
    std::uint32_t clusters = 0;
    std::string cluster_file;
    std::uint64_t seed = 0;
    std::string out;
    std::string type_predicate = std::string(pyke::kRdfTypeIri);
    unsigned threads = 0;
};

struct ScalingArgs {
    std::vector<std::uint32_t> scales{5, 10, 20, 40};
    pyke::ScalingConfig config;
    std::string out;
};

void emit(const json& j, const std::string& out_path) {
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << j.dump(2) << '\n';
    }
    std::cout << j.dump(2) << std::endl;
}

int run_generate(const GenerateArgs& args) {
    pyke::synth::SynthSpec spec;
    spec.universities = args.scale;
    spec.classes = args.classes;
    spec.seed = args.seed;
    spec.cross_link_fraction = args.cross_links;
    pyke::synth::generate_file(spec, args.out);
    emit(json{{"out", args.out},
              {"scale", args.scale},
              {"approx_triples", spec.approx_triples()},
              {"seed", args.seed}},
         "");
    return kExitOk;
}

int run_ingest(const IngestArgs& args) {
    auto parsed = pyke::load_graph(args.input);
    auto types = pyke::build_type_index(parsed.store, parsed.vocab, args.type_predicate);
    if (!args.cache.empty()) pyke::write_store_cache(args.cache, parsed.store, parsed.vocab);
    emit(json{{"input", args.input},
              {"triples", parsed.store.size()},
              {"vocab", parsed.vocab.size()},
              {"typed_subjects", types.subject_count()},
              {"classes", types.class_count()},
              {"cache", args.cache}},
         "");
    return kExitOk;
}

int run_embed(EmbedArgs& args) {
    auto parsed = pyke::load_graph(args.input);
    auto& config = args.config;
    config.clamp_energy = !args.strict_paper_energy;
    config.repulsion = args.norm_repulsion ? pyke::RepulsionMode::NormScaled
                                           : pyke::RepulsionMode::CoordinateWise;
    config.validate();

    const auto estimate = pyke::estimated_bytes(parsed.vocab.size(), config);
    if (estimate > args.memory_budget_mb * (1ull << 20)) {
        std::cerr << "embed: estimated working set " << estimate / (1 << 20) << " MiB ("
                  << "2*m*n*8 plus sample arenas with m=" << parsed.vocab.size() << ", n="
                  << config.dimension << ") exceeds budget " << args.memory_budget_mb
                  << " MiB\n";
        return kExitData;
    }

    pyke::CooccurrenceOptions count_options;
    if (args.exclude_type_triples)
        count_options.exclude_predicate = parsed.vocab.id(args.type_predicate);
    auto stats = pyke::count_cooccurrences(parsed.store, parsed.vocab, count_options);
    auto graph = pyke::build_similarity_graph(stats, config.top_k, config.omega, config.seed);

    if (!args.dump_similarity.empty()) {
        std::ofstream dump(args.dump_similarity);
        if (!dump) throw std::runtime_error("cannot write " + args.dump_similarity);
        pyke::dump_similarity_tsv(graph, parsed.vocab, dump);
    }

    auto result = pyke::run(parsed.vocab, graph, config);

    pyke::EmbeddingView view{result.state.current_matrix().data(), parsed.vocab.size(),
                             config.dimension};
    pyke::write_embeddings(args.out, parsed.vocab, view);
    if (!args.report.empty()) pyke::write_run_report_jsonl(args.report, result.report);

    json summary{
        {"input", args.input},
        {"out", args.out},
        {"triples", parsed.store.size()},
        {"vocab", parsed.vocab.size()},
        {"iterations", result.report.iterations.size()},
        {"stopped_by",
         result.report.stop_reason == pyke::StopReason::DisplacementBelowEpsilon
             ? "displacement"
             : "iteration_cap"},
        {"total_millis", result.report.total_millis},
        {"iteration_millis", result.report.iteration_millis},
    };
    if (config.track_objective) {
        summary["initial_objective"] = result.report.initial_objective;
        summary["final_objective"] = result.report.iterations.back().objective;
    }
    emit(summary, "");
    return kExitOk;
}

int run_eval(const EvalArgs& args) {
    auto parsed = pyke::load_graph(args.graph);
    auto types = pyke::build_type_index(parsed.store, parsed.vocab, args.type_predicate);
    if (types.empty()) throw pyke::ParseError("graph has no typed subjects to evaluate", 0);

    auto file = pyke::read_embeddings(args.embeddings);

    // Align embedding rows to graph vocabulary ids.
    std::unordered_map<std::string_view, std::size_t> row_of;
    row_of.reserve(file.terms.size());
    for (std::size_t i = 0; i < file.terms.size(); ++i) row_of.emplace(file.terms[i], i);
    const std::uint32_t n = file.header.dimension;
    std::vector<double> aligned(parsed.vocab.size() * std::size_t{n}, 0.0);
    for (pyke::TermId x : types.typed_subjects()) {
        auto it = row_of.find(parsed.vocab.term(x));
        if (it == row_of.end())
            throw pyke::ParseError(
                "embeddings are missing typed subject '" + std::string(parsed.vocab.term(x)) + "'",
                0);
        const double* src = file.matrix.data() + it->second * n;
        std::copy(src, src + n, aligned.begin() + std::size_t{x} * n);
    }
    pyke::EmbeddingView view{aligned.data(), parsed.vocab.size(), n};

    auto sample = pyke::choose_sample(types.typed_subjects(), args.sample_size, args.seed);
    if (sample.size() < 2) throw pyke::ParseError("fewer than 2 typed subjects to evaluate", 0);

    json report{
        {"graph", args.graph},
        {"embeddings", args.embeddings},
        {"sample_size", sample.size()},
        {"typed_subjects", types.subject_count()},
        {"classes", types.class_count()},
        {"seed", args.seed},
    };

    json scores = json::object();
    std::size_t zero_flags = 0;
    for (auto mu : args.mu_list) {
        auto r = pyke::type_prediction_score(view, types, sample, mu, args.threads);
        scores[std::to_string(mu)] = r.score;
        zero_flags += r.zero_sum_terms;
    }
    report["prediction_scores"] = scores;
    report["zero_type_sum_terms"] = zero_flags;

    if (!args.cluster_file.empty()) {
        auto clustering = pyke::read_cluster_tsv(args.cluster_file, parsed.vocab);
        report["purity"] = pyke::cluster_purity(clustering, types);
        report["clusters"] = clustering.cluster_count;
    } else if (args.clusters > 0) {
        auto clustering = pyke::kmeans(view, sample, args.clusters, args.seed);
        report["purity"] = pyke::cluster_purity(clustering, types);
        report["clusters"] = clustering.cluster_count;
    }

    emit(report, args.out);
    return kExitOk;
}

int run_scaling(const ScalingArgs& args) {
    auto report = pyke::scaling_run(args.scales, args.config);
    json points = json::array();
    for (const auto& p : report.points) {
        points.push_back(json{{"scale", p.scale},
                              {"triples", p.triples},
                              {"vocab", p.vocab},
                              {"iteration_minutes", p.iteration_minutes},
                              {"setup_minutes", p.setup_minutes}});
    }
    emit(json{{"k", report.config.top_k},
              {"dim", report.config.dimension},
              {"iterations", report.config.iterations},
              {"points", points},
              {"slope", report.fit.slope},
              {"intercept", report.fit.intercept},
              {"r_squared", report.fit.r_squared}},
         args.out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Physical-model knowledge graph embeddings"};
    app.require_subcommand(1);

    GenerateArgs gen_args;
    auto* gen = app.add_subcommand("generate", "Generate a synthetic university-style KG");
    gen->add_option("--scale", gen_args.scale, "Universities to generate")->required();
    gen->add_option("--seed", gen_args.seed, "Generator seed");
    gen->add_option("--out", gen_args.out, "Output path (.nt or .nt.gz)")->required();
    gen->add_option("--classes", gen_args.classes, "Distinct classes, 1..14");
    gen->add_option("--cross-links", gen_args.cross_links,
                    "Fraction of degree links leaving the university");

    IngestArgs ingest_args;
    auto* ingest = app.add_subcommand("ingest", "Parse a graph and report statistics");
    ingest->add_option("--input", ingest_args.input, "N-Triples (.nt/.nt.gz) or cache file")
        ->required();
    ingest->add_option("--cache", ingest_args.cache, "Write a binary store cache here");
    ingest->add_option("--type-predicate", ingest_args.type_predicate, "Type predicate IRI");

    EmbedArgs embed_args;
    auto* embed = app.add_subcommand("embed", "Compute embeddings for a graph");
    embed->add_option("--input", embed_args.input, "N-Triples (.nt/.nt.gz) or cache file")
        ->required();
    embed->add_option("--out", embed_args.out, "Embedding TSV output")->required();
    embed->add_option("--report", embed_args.report, "Per-iteration JSONL report");
    embed->add_option("--dim", embed_args.config.dimension, "Embedding dimension n");
    embed->add_option("--k", embed_args.config.top_k, "Positive/negative sample bound K");
    embed->add_option("--delta-e", embed_args.config.delta_e, "Energy released per iteration");
    embed->add_option("--omega", embed_args.config.omega, "Repulsive constant");
    embed->add_option("--epsilon", embed_args.config.epsilon, "Total displacement stop bound");
    embed->add_option("--max-iters", embed_args.config.max_iterations, "Iteration cap T");
    embed->add_option("--seed", embed_args.config.seed, "Root seed");
    embed->add_option("--init-scale", embed_args.config.init_scale,
                      "Uniform init half-width");
    embed->add_option("--threads", embed_args.config.threads, "Worker threads (0 = all)")
        ->envname("PYKE_THREADS");
    embed->add_option("--memory-budget-mb", embed_args.memory_budget_mb,
                      "Refuse runs whose working set exceeds this budget")
        ->envname("PYKE_MEMORY_BUDGET_MB");
    embed->add_flag("--exclude-type-triples", embed_args.exclude_type_triples,
                    "Drop type triples from co-occurrence counting");
    embed->add_flag("--strict-paper-energy", embed_args.strict_paper_energy,
                    "Let the energy go negative instead of clamping at 0");
    embed->add_flag("--norm-repulsion", embed_args.norm_repulsion,
                    "Norm-scaled repulsion instead of coordinate-wise");
    embed->add_option("--type-predicate", embed_args.type_predicate, "Type predicate IRI");
    embed->add_option("--dump-similarity", embed_args.dump_similarity,
                      "Write positive/negative samples as TSV");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Cluster purity and type prediction metrics");
    eval->add_option("--embeddings", eval_args.embeddings, "Embedding TSV")->required();
    eval->add_option("--graph", eval_args.graph, "Graph the embeddings were computed from")
        ->required();
    eval->add_option("--mu-list", eval_args.mu_list, "Neighborhood sizes")->delimiter(',');
    eval->add_option("--sample-size", eval_args.sample_size,
                     "Evaluated subject sample (0 = all)");
    eval->add_option("--clusters", eval_args.clusters, "k-means cluster count for purity");
    eval->add_option("--cluster-file", eval_args.cluster_file,
                     "External cluster assignment TSV (term<TAB>label)");
    eval->add_option("--seed", eval_args.seed, "Sampling seed");
    eval->add_option("--out", eval_args.out, "Write the JSON report here too");
    eval->add_option("--type-predicate", eval_args.type_predicate, "Type predicate IRI");
    eval->add_option("--threads", eval_args.threads, "Worker threads (0 = all)")
        ->envname("PYKE_THREADS");

    ScalingArgs scaling_args;
    auto* scaling = app.add_subcommand("scaling", "Runtime-vs-size OLS experiment");
    scaling->add_option("--scales", scaling_args.scales, "Generator scales")->delimiter(',');
    scaling->add_option("--k", scaling_args.config.top_k, "Sample bound K");
    scaling->add_option("--dim", scaling_args.config.dimension, "Embedding dimension");
    scaling->add_option("--iters", scaling_args.config.iterations, "Sweeps per run");
    scaling->add_option("--seed", scaling_args.config.seed, "Root seed");
    scaling->add_option("--reps", scaling_args.config.repetitions, "Timing repetitions");
    scaling->add_option("--threads", scaling_args.config.threads, "Worker threads (0 = all)")
        ->envname("PYKE_THREADS");
    scaling->add_option("--out", scaling_args.out, "Write the JSON report here too");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) return run_generate(gen_args);
        if (ingest->parsed()) return run_ingest(ingest_args);
        if (embed->parsed()) return run_embed(embed_args);
        if (eval->parsed()) return run_eval(eval_args);
        if (scaling->parsed()) return run_scaling(scaling_args);
    } catch (const pyke::DivergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const pyke::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
