#include "pyke/type_index.hpp"

#include <algorithm>
#include <cmath>

#include "pyke/ntriples.hpp"

namespace pyke {

std::vector<double> TypeIndex::dense_type_vector(std::uint32_t slot) const {
    std::vector<double> v(classes_.size(), 0.0);
    for (auto c : type_classes(slot)) v[c] = 1.0;
    return v;
}

double TypeIndex::type_cosine(std::uint32_t slot_a, std::uint32_t slot_b) const {
    auto a = type_classes(slot_a);
    auto b = type_classes(slot_b);
    std::size_t shared = 0, i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++shared; ++i; ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return static_cast<double>(shared) /
           std::sqrt(static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

TypeIndex build_type_index(const TripleStore& store, const Vocabulary& vocab,
                           std::string_view type_predicate_iri) {
    TypeIndex idx;
    idx.subject_slot_.assign(vocab.size(), TypeIndex::kNoSlot);

    auto type_pred = vocab.id(type_predicate_iri);
    if (!type_pred) return idx;  // no type triples anywhere

    // First pass: class ids and subject ids, skipping literal-object type
    // triples and subjects used as predicates (S is disjoint from P).
    std::vector<TermId> class_ids;
    std::vector<TermId> subject_ids;
    for (const Triple& t : store.triples()) {
        if (t.predicate != *type_pred || is_literal_id(t.object)) continue;
        if (vocab.is_predicate(t.subject)) continue;
        class_ids.push_back(t.object);
        subject_ids.push_back(t.subject);
    }
    std::sort(class_ids.begin(), class_ids.end());
    class_ids.erase(std::unique(class_ids.begin(), class_ids.end()), class_ids.end());
    std::sort(subject_ids.begin(), subject_ids.end());
    subject_ids.erase(std::unique(subject_ids.begin(), subject_ids.end()), subject_ids.end());

    idx.classes_ = std::move(class_ids);
    idx.subjects_ = std::move(subject_ids);
    for (std::uint32_t slot = 0; slot < idx.subjects_.size(); ++slot)
        idx.subject_slot_[idx.subjects_[slot]] = slot;

    auto class_slot_of = [&](TermId cls) {
        auto it = std::lower_bound(idx.classes_.begin(), idx.classes_.end(), cls);
        return static_cast<std::uint32_t>(it - idx.classes_.begin());
    };

    // Second pass: per-subject class slots, CSR layout.
    std::vector<std::uint32_t> degree(idx.subjects_.size(), 0);
    for (const Triple& t : store.triples()) {
        if (t.predicate != *type_pred || is_literal_id(t.object)) continue;
        if (auto slot = idx.subject_slot(t.subject)) ++degree[*slot];
    }
    idx.offsets_.assign(idx.subjects_.size() + 1, 0);
    for (std::size_t i = 0; i < degree.size(); ++i) idx.offsets_[i + 1] = idx.offsets_[i] + degree[i];
    idx.class_slots_.resize(idx.offsets_.back());
    std::vector<std::uint32_t> cursor(idx.offsets_.begin(), idx.offsets_.end() - 1);
    for (const Triple& t : store.triples()) {
        if (t.predicate != *type_pred || is_literal_id(t.object)) continue;
        if (auto slot = idx.subject_slot(t.subject))
            idx.class_slots_[cursor[*slot]++] = class_slot_of(t.object);
    }
    for (std::uint32_t slot = 0; slot < idx.subjects_.size(); ++slot) {
        auto begin = idx.class_slots_.begin() + idx.offsets_[slot];
        auto end = idx.class_slots_.begin() + idx.offsets_[slot + 1];
        std::sort(begin, end);
    }
    return idx;
}

}  // namespace pyke
