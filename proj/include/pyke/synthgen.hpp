#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>

namespace pyke::synth {

// University-style synthetic KG. Each university is one community: all
// object links stay inside it (unless cross_link_fraction sends a degree
// link to another university), so co-occurrence structure is planted along
// community lines while rdf:type hubs stay global.
struct SynthSpec {
    std::uint32_t universities = 1;    // scale parameter
    std::uint32_t classes = 14;        // distinct type classes emitted, 1..14
    std::uint64_t seed = 0;
    double cross_link_fraction = 0.0;  // share of degree links leaving the university

    // Calibrated estimate; actual output is within a few percent.
    std::uint64_t approx_triples() const;
};

// Streams the graph as N-Triples. Deterministic: a (spec, seed) pair always
// produces byte-identical output, and university u's content is independent
// of the total university count.
void generate(const SynthSpec& spec, std::ostream& out);

// Writes to a file; a ".gz" suffix selects gzip output. Throws
// std::runtime_error when the path cannot be written.
void generate_file(const SynthSpec& spec, const std::filesystem::path& path);

// The 14 role class IRIs, roster order.
std::span<const std::string_view> role_class_iris();

// Community id (university index) of a generated entity IRI; nullopt for
// classes, predicates, and foreign terms.
std::optional<std::uint32_t> university_of(std::string_view term);

}  // namespace pyke::synth
