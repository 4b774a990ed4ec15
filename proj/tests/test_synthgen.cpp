#include <doctest.h>

#include <set>
#include <sstream>

#include "helpers.hpp"
#include "pyke/cooccurrence.hpp"
#include "pyke/similarity.hpp"
#include "pyke/synthgen.hpp"
#include "pyke/type_index.hpp"

using namespace pyke;

namespace {

std::string generate_text(std::uint32_t universities, std::uint64_t seed = 1) {
    synth::SynthSpec spec;
    spec.universities = universities;
    spec.seed = seed;
    std::ostringstream out;
    synth::generate(spec, out);
    return out.str();
}

}  // namespace

TEST_CASE("generation is byte-deterministic per spec and seed") {
    CHECK(generate_text(2, 9) == generate_text(2, 9));
    CHECK(generate_text(2, 9) != generate_text(2, 10));
}

TEST_CASE("output parses cleanly and every entity is typed") {
    auto parsed = parse_ntriples(generate_text(1));
    CHECK(parsed.store.size() > 0);

    auto idx = build_type_index(parsed.store, parsed.vocab);
    // Typed subjects + classes + predicates must cover the vocabulary: every
    // generated entity carries at least one type triple.
    std::size_t classes = idx.class_count();
    std::size_t predicates = 0;
    for (TermId x = 0; x < parsed.vocab.size(); ++x)
        if (parsed.vocab.is_predicate(x)) ++predicates;
    CHECK(idx.subject_count() + classes + predicates == parsed.vocab.size());
}

TEST_CASE("default class roster has exactly 14 classes") {
    auto parsed = parse_ntriples(generate_text(1));
    auto idx = build_type_index(parsed.store, parsed.vocab);
    CHECK(idx.class_count() == 14);
}

TEST_CASE("reduced class count merges the roster") {
    synth::SynthSpec spec;
    spec.universities = 1;
    spec.classes = 5;
    std::ostringstream out;
    synth::generate(spec, out);
    auto parsed = parse_ntriples(out.str());
    auto idx = build_type_index(parsed.store, parsed.vocab);
    CHECK(idx.class_count() == 5);
}

TEST_CASE("triple counts grow linearly with the scale parameter") {
    auto one = parse_ntriples(generate_text(2, 4)).store.size();
    auto two = parse_ntriples(generate_text(4, 4)).store.size();
    const double ratio = static_cast<double>(two) / static_cast<double>(one);
    CHECK(ratio > 2.0 * 0.9);
    CHECK(ratio < 2.0 * 1.1);
}

TEST_CASE("approx_triples estimates within 10 percent") {
    synth::SynthSpec spec;
    spec.universities = 3;
    spec.seed = 5;
    auto actual = parse_ntriples(generate_text(3, 5)).store.size();
    const double estimate = static_cast<double>(spec.approx_triples());
    CHECK(std::abs(estimate - static_cast<double>(actual)) / estimate < 0.10);
}

TEST_CASE("university content is stable as the scale grows") {
    // Scale 2's first university must be byte-identical to scale 1's output.
    auto small = generate_text(1, 3);
    auto large = generate_text(2, 3);
    CHECK(large.substr(0, small.size()) == small);
}

TEST_CASE("invalid specs are rejected") {
    synth::SynthSpec spec;
    std::ostringstream out;
    spec.universities = 0;
    CHECK_THROWS_AS(synth::generate(spec, out), std::invalid_argument);
    spec.universities = 1;
    spec.classes = 15;
    CHECK_THROWS_AS(synth::generate(spec, out), std::invalid_argument);
    spec.classes = 14;
    spec.cross_link_fraction = 1.5;
    CHECK_THROWS_AS(synth::generate(spec, out), std::invalid_argument);
}

TEST_CASE("community structure dominates the positive sets at K = 5") {
    synth::SynthSpec spec;
    spec.universities = 3;
    spec.seed = 21;
    std::ostringstream out;
    synth::generate(spec, out);
    auto parsed = parse_ntriples(out.str());
    auto idx = build_type_index(parsed.store, parsed.vocab);
    auto stats = count_cooccurrences(parsed.store, parsed.vocab);
    auto positives = build_positive_sets(stats, 5);

    // For every typed entity, the community-bearing members of its positive
    // set must overwhelmingly share its university.
    std::size_t checked = 0;
    for (TermId x : idx.typed_subjects()) {
        auto community = synth::university_of(parsed.vocab.term(x));
        REQUIRE(community.has_value());
        std::size_t with_community = 0, same = 0;
        for (TermId y : positives.neighbors(x)) {
            auto other = synth::university_of(parsed.vocab.term(y));
            if (!other) continue;  // classes and predicates carry no community
            ++with_community;
            if (*other == *community) ++same;
        }
        if (with_community == 0) continue;
        ++checked;
        CHECK(static_cast<double>(same) / static_cast<double>(with_community) >= 0.8);
    }
    CHECK(checked > 1000);
}

TEST_CASE("university_of parses entity IRIs only") {
    CHECK(synth::university_of("http://synth.example.org/u3") == 3);
    CHECK(synth::university_of("http://synth.example.org/u12/d4/ug7") == 12);
    CHECK_FALSE(synth::university_of("http://synth.example.org/vocab#Course").has_value());
    CHECK_FALSE(synth::university_of("http://elsewhere.org/u3").has_value());
    CHECK_FALSE(synth::university_of(std::string(kRdfTypeIri)).has_value());
}
