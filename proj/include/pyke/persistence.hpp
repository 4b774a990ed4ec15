#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pyke/embedding.hpp"
#include "pyke/evaluation.hpp"
#include "pyke/ntriples.hpp"
#include "pyke/triple_store.hpp"
#include "pyke/types.hpp"
#include "pyke/vocabulary.hpp"

namespace pyke {

struct EmbeddingFileHeader {
    std::uint32_t format_version = 1;
    std::uint32_t dimension = 0;
    std::uint64_t vocab_size = 0;
};

struct EmbeddingFile {
    EmbeddingFileHeader header;
    std::vector<std::string> terms;
    std::vector<double> matrix;  // row-major, terms x dimension

    EmbeddingView view() const {
        return {matrix.data(), terms.size(), header.dimension};
    }
};

// TSV rows `term \t v1 ... \t vn` with round-trip double formatting, plus a
// sidecar JSON header at <path>.meta.json. write then read is the identity.
void write_embeddings(const std::filesystem::path& path, const Vocabulary& vocab,
                      const EmbeddingView& embeddings);
EmbeddingFile read_embeddings(const std::filesystem::path& path);

// Compact binary snapshot of a parsed graph (magic bytes, version, vocabulary
// strings, predicate flags, literal table, id triples). Saves re-parsing the
// N-Triples source.
void write_store_cache(const std::filesystem::path& path, const TripleStore& store,
                       const Vocabulary& vocab);
ParseResult read_store_cache(const std::filesystem::path& path);
bool is_store_cache(const std::filesystem::path& path);

// Loads either format by sniffing the cache magic.
ParseResult load_graph(const std::filesystem::path& path);

// `term \t label` lines; negative labels mark noise. Labels are compacted to
// dense cluster indexes in ascending original-label order.
Clustering read_cluster_tsv(const std::filesystem::path& path, const Vocabulary& vocab);

// One JSON object per iteration: t, objective (when tracked), displacement,
// energy, millis. A t=0 record carries the initial objective.
void write_run_report_jsonl(const std::filesystem::path& path, const RunReport& report);

}  // namespace pyke
