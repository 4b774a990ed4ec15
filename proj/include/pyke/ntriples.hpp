#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "pyke/triple_store.hpp"
#include "pyke/types.hpp"
#include "pyke/vocabulary.hpp"

namespace pyke {

struct ParseResult {
    TripleStore store;
    Vocabulary vocab;
    std::uint64_t lines = 0;           // non-blank, non-comment lines parsed
    std::uint64_t literal_objects = 0; // triples whose object was a literal, pre-dedup
};

// Parses N-Triples text. Accepts comments, blank lines, and gzip input (the
// path overload sniffs the gzip header). Throws ParseError with the line
// number and offending token on the first malformed line. Empty input is a
// valid empty graph. Duplicate triples are collapsed; vocabulary ids are
// dense and assigned in first-appearance order (subject, predicate, object).
ParseResult parse_ntriples(std::string_view text);
ParseResult parse_ntriples_file(const std::filesystem::path& path);

// Serializes the store back to N-Triples, one triple per line in store order.
void write_ntriples(const TripleStore& store, const Vocabulary& vocab, std::ostream& out);

}  // namespace pyke
