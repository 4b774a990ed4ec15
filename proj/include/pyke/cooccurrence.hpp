#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "pyke/memtrack.hpp"
#include "pyke/triple_store.hpp"
#include "pyke/types.hpp"
#include "pyke/vocabulary.hpp"

namespace pyke {

// Triple-granular occurrence counts over the vocabulary. A term appearing in
// several positions of one triple counts once for that triple, and the pair
// {x, x} is never formed. Pairs are kept as a sorted run-length table rather
// than a hash map: allocation is exact and lookup is a binary search.
struct CooccurrenceStats {
    mem::vector<std::uint32_t> term_freq;   // per term: # of triples containing it
    mem::vector<std::uint64_t> pair_keys;   // sorted; key = (min << 32) | max
    mem::vector<std::uint32_t> pair_counts; // parallel to pair_keys
    std::uint64_t total = 0;                // |G| (triples counted)

    static std::uint64_t pair_key(TermId x, TermId y) noexcept {
        TermId lo = x < y ? x : y;
        TermId hi = x < y ? y : x;
        return (static_cast<std::uint64_t>(lo) << 32) | hi;
    }

    std::uint32_t pair_count(TermId x, TermId y) const;

    // max(0, ln(P(x,y) / (P(x) P(y)))). Zero when the pair never co-occurs.
    // The diagonal is undefined.
    double ppmi(TermId x, TermId y) const {
        if (x == y) throw std::invalid_argument("ppmi: undefined for x == y");
        if (total == 0) throw std::invalid_argument("ppmi: empty co-occurrence statistics");
        return ppmi_from_counts(pair_count(x, y), term_freq[x], term_freq[y], total);
    }

    // Shared formula so that every code path (including test oracles working
    // from independently derived counts) produces bit-identical values.
    static double ppmi_from_counts(std::uint64_t pair, std::uint64_t fx, std::uint64_t fy,
                                   std::uint64_t total) {
        if (pair == 0) return 0.0;
        double ratio = (static_cast<double>(pair) * static_cast<double>(total)) /
                       (static_cast<double>(fx) * static_cast<double>(fy));
        double v = std::log(ratio);
        return v > 0.0 ? v : 0.0;
    }
};

struct CooccurrenceOptions {
    // When set, triples with this predicate are skipped entirely (they do not
    // contribute to counts or to the total). Used to ablate type triples.
    std::optional<TermId> exclude_predicate;
};

CooccurrenceStats count_cooccurrences(const TripleStore& store, const Vocabulary& vocab,
                                      const CooccurrenceOptions& options = {});

}  // namespace pyke
