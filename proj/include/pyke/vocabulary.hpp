#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pyke/types.hpp"

namespace pyke {

// Interned IRIs and blank-node labels, in first-appearance order. Literals
// are never interned. Immutable once a parse finishes; safe to share across
// threads.
class Vocabulary {
public:
    TermId intern(std::string_view term) {
        if (auto it = index_.find(term); it != index_.end()) return it->second;
        auto id = static_cast<TermId>(terms_.size());
        auto [it, inserted] = index_.emplace(std::string(term), id);
        terms_.push_back(&it->first);  // map nodes are stable
        is_predicate_.push_back(false);
        return id;
    }

    std::optional<TermId> id(std::string_view term) const {
        auto it = index_.find(term);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::string_view term(TermId id) const { return *terms_[id]; }
    std::size_t size() const noexcept { return terms_.size(); }

    bool is_predicate(TermId id) const { return is_predicate_[id]; }
    void mark_predicate(TermId id) { is_predicate_[id] = true; }

    std::uint64_t triple_count() const noexcept { return triple_count_; }
    void set_triple_count(std::uint64_t n) noexcept { triple_count_ = n; }

private:
    struct StringHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept {
            return std::hash<std::string_view>{}(s);
        }
    };

    std::unordered_map<std::string, TermId, StringHash, std::equal_to<>> index_;
    std::vector<const std::string*> terms_;
    std::vector<bool> is_predicate_;
    std::uint64_t triple_count_ = 0;
};

}  // namespace pyke
