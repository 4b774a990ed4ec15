#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pyke/triple_store.hpp"
#include "pyke/types.hpp"
#include "pyke/vocabulary.hpp"

namespace pyke {

// Classes, typed subjects, and their binary type vectors. Type vectors are
// stored sparse (sorted class slots per subject); |C| is usually tiny next to
// the vocabulary.
class TypeIndex {
public:
    std::span<const TermId> classes() const noexcept { return classes_; }
    std::span<const TermId> typed_subjects() const noexcept { return subjects_; }
    std::size_t class_count() const noexcept { return classes_.size(); }
    std::size_t subject_count() const noexcept { return subjects_.size(); }
    bool empty() const noexcept { return subjects_.empty(); }

    std::optional<std::uint32_t> subject_slot(TermId term) const {
        if (term >= subject_slot_.size()) return std::nullopt;
        auto slot = subject_slot_[term];
        if (slot == kNoSlot) return std::nullopt;
        return slot;
    }
    bool is_typed_subject(TermId term) const { return subject_slot(term).has_value(); }

    // Sorted class slots (indexes into classes()) of the given subject slot.
    std::span<const std::uint32_t> type_classes(std::uint32_t slot) const {
        return {class_slots_.data() + offsets_[slot], offsets_[slot + 1] - offsets_[slot]};
    }

    // Dense 0/1 vector of length |C| for a subject slot.
    std::vector<double> dense_type_vector(std::uint32_t slot) const;

    // Cosine between two subjects' binary type vectors. Both vectors are
    // nonempty by construction.
    double type_cosine(std::uint32_t slot_a, std::uint32_t slot_b) const;

private:
    friend TypeIndex build_type_index(const TripleStore&, const Vocabulary&, std::string_view);

    static constexpr std::uint32_t kNoSlot = 0xffffffffu;

    std::vector<TermId> classes_;               // ascending term id (interning order)
    std::vector<TermId> subjects_;              // ascending term id
    std::vector<std::uint32_t> subject_slot_;   // term id -> slot or kNoSlot
    std::vector<std::uint32_t> offsets_;        // CSR offsets into class_slots_
    std::vector<std::uint32_t> class_slots_;    // sorted per subject
};

// Collects every (x, type_predicate, o) triple with a non-literal object.
// Subjects that also occur in predicate position anywhere are excluded. A
// graph without type triples yields an empty index.
TypeIndex build_type_index(const TripleStore& store, const Vocabulary& vocab,
                           std::string_view type_predicate_iri = kRdfTypeIri);

}  // namespace pyke
