#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pyke/types.hpp"

namespace pyke {

// Deduplicated set of integer-encoded triples. Literal objects are kept (they
// count toward |G| and toward subject/predicate occurrence statistics) but
// reference a side table instead of the vocabulary.
class TripleStore {
public:
    void add(Triple t) { triples_.push_back(t); }

    // Identical lexical forms share one literal id so that duplicate triples
    // with literal objects collapse under set semantics.
    TermId intern_literal(std::string_view lexical);

    // Sorts and collapses duplicates; G is a set. Call once after loading.
    void finalize();

    std::span<const Triple> triples() const noexcept { return triples_; }
    std::size_t size() const noexcept { return triples_.size(); }
    bool empty() const noexcept { return triples_.empty(); }

    std::string_view literal(TermId literal_id) const {
        return *literals_[literal_index(literal_id)];
    }
    std::size_t literal_count() const noexcept { return literals_.size(); }

private:
    struct StringHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept {
            return std::hash<std::string_view>{}(s);
        }
    };

    std::vector<Triple> triples_;
    std::unordered_map<std::string, TermId, StringHash, std::equal_to<>> literal_index_;
    std::vector<const std::string*> literals_;
};

}  // namespace pyke
