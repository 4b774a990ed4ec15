#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pyke {

inline constexpr std::string_view kRdfTypeIri =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

// Dense term identifier assigned by the Vocabulary. Object slots of a triple
// may instead carry a literal id tagged with kLiteralBit; literals are never
// part of the vocabulary.
using TermId = std::uint32_t;

inline constexpr TermId kLiteralBit = 0x8000'0000u;

constexpr bool is_literal_id(TermId id) noexcept { return (id & kLiteralBit) != 0; }
constexpr TermId literal_index(TermId id) noexcept { return id & ~kLiteralBit; }
constexpr TermId make_literal_id(TermId index) noexcept { return index | kLiteralBit; }

struct Triple {
    TermId subject;
    TermId predicate;
    TermId object;  // term id, or literal id tagged with kLiteralBit

    friend bool operator==(const Triple&, const Triple&) = default;
    friend auto operator<=>(const Triple&, const Triple&) = default;
};

// Thrown on malformed input data (N-Triples syntax, embedding files, caches).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t line)
        : std::runtime_error(std::move(message)), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Thrown when an embedding sweep produces a non-finite coordinate.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::string message, TermId term, std::uint64_t iteration)
        : std::runtime_error(std::move(message)), term_(term), iteration_(iteration) {}

    TermId term() const noexcept { return term_; }
    std::uint64_t iteration() const noexcept { return iteration_; }

private:
    TermId term_;
    std::uint64_t iteration_;
};

}  // namespace pyke
