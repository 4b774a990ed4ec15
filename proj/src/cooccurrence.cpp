#include "pyke/cooccurrence.hpp"

#include <algorithm>
#include <array>

namespace pyke {

std::uint32_t CooccurrenceStats::pair_count(TermId x, TermId y) const {
    const std::uint64_t key = pair_key(x, y);
    auto it = std::lower_bound(pair_keys.begin(), pair_keys.end(), key);
    if (it == pair_keys.end() || *it != key) return 0;
    return pair_counts[it - pair_keys.begin()];
}

CooccurrenceStats count_cooccurrences(const TripleStore& store, const Vocabulary& vocab,
                                      const CooccurrenceOptions& options) {
    CooccurrenceStats stats;
    stats.term_freq.assign(vocab.size(), 0);

    mem::vector<std::uint64_t> keys;
    keys.reserve(store.size() * 3);

    for (const Triple& t : store.triples()) {
        if (options.exclude_predicate && t.predicate == *options.exclude_predicate) continue;
        ++stats.total;

        std::array<TermId, 3> terms{};
        std::size_t k = 0;
        terms[k++] = t.subject;
        if (t.predicate != t.subject) terms[k++] = t.predicate;
        if (!is_literal_id(t.object) && t.object != t.subject && t.object != t.predicate)
            terms[k++] = t.object;

        for (std::size_t i = 0; i < k; ++i) ++stats.term_freq[terms[i]];
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                keys.push_back(CooccurrenceStats::pair_key(terms[i], terms[j]));
    }

    std::sort(keys.begin(), keys.end());

    std::size_t distinct = 0;
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i;
        while (j < keys.size() && keys[j] == keys[i]) ++j;
        ++distinct;
        i = j;
    }
    stats.pair_keys.reserve(distinct);
    stats.pair_counts.reserve(distinct);
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i;
        while (j < keys.size() && keys[j] == keys[i]) ++j;
        stats.pair_keys.push_back(keys[i]);
        stats.pair_counts.push_back(static_cast<std::uint32_t>(j - i));
        i = j;
    }
    return stats;
}

}  // namespace pyke
