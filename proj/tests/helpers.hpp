#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "pyke/cooccurrence.hpp"
#include "pyke/ntriples.hpp"
#include "pyke/types.hpp"

namespace testutil {

// Builds a graph through the parser from (s, p, o) tokens written as plain
// names; each token becomes an IRI unless it already looks like a literal.
inline pyke::ParseResult graph_from(
    const std::vector<std::array<std::string, 3>>& triples) {
    std::string text;
    for (const auto& [s, p, o] : triples) {
        text += "<" + s + "> <" + p + "> ";
        if (!o.empty() && o.front() == '"') {
            text += o;
        } else {
            text += "<" + o + ">";
        }
        text += " .\n";
    }
    return pyke::parse_ntriples(text);
}

inline pyke::TermId id_of(const pyke::Vocabulary& vocab, const std::string& term) {
    auto id = vocab.id(term);
    REQUIRE(id.has_value());
    return *id;
}

// Random small graph over vocabulary tokens e0..e{V-1} with p0..p{P-1} as
// predicates; duplicates are likely and exercise set semantics.
inline pyke::ParseResult random_graph(std::mt19937_64& gen, std::size_t max_terms = 50) {
    const std::size_t entities = 2 + gen() % (max_terms - 2);
    const std::size_t predicates = 1 + gen() % 4;
    const std::size_t triples = entities + gen() % (3 * entities);
    std::string text;
    for (std::size_t i = 0; i < triples; ++i) {
        text += "<e" + std::to_string(gen() % entities) + "> ";
        text += "<p" + std::to_string(gen() % predicates) + "> ";
        text += "<e" + std::to_string(gen() % entities) + "> .\n";
    }
    return pyke::parse_ntriples(text);
}

// Independent PPMI oracle: pair counts recomputed per query by scanning every
// triple. Only the final formula is shared (so tie-breaking is bit-exact).
inline double dense_ppmi(const pyke::TripleStore& store, const pyke::Vocabulary& vocab,
                         pyke::TermId x, pyke::TermId y) {
    auto contains = [&](const pyke::Triple& t, pyke::TermId v) {
        return t.subject == v || t.predicate == v ||
               (!pyke::is_literal_id(t.object) && t.object == v);
    };
    std::uint64_t fx = 0, fy = 0, fxy = 0, total = 0;
    for (const auto& t : store.triples()) {
        ++total;
        const bool has_x = contains(t, x);
        const bool has_y = contains(t, y);
        fx += has_x;
        fy += has_y;
        fxy += has_x && has_y;
    }
    (void)vocab;
    return pyke::CooccurrenceStats::ppmi_from_counts(fxy, fx, fy, total);
}

// Brute-force top-K positives from the dense oracle, ranked by descending
// PPMI then ascending id.
inline std::vector<std::pair<pyke::TermId, double>> dense_top_k(
    const pyke::TripleStore& store, const pyke::Vocabulary& vocab, pyke::TermId x,
    std::uint32_t k) {
    std::vector<std::pair<pyke::TermId, double>> candidates;
    for (pyke::TermId y = 0; y < vocab.size(); ++y) {
        if (y == x) continue;
        double w = dense_ppmi(store, vocab, x, y);
        if (w > 0.0) candidates.emplace_back(y, w);
    }
    std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (candidates.size() > k) candidates.resize(k);
    return candidates;
}

}  // namespace testutil
