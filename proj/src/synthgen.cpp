#include "pyke/synthgen.hpp"

#include <zlib.h>

#include <array>
#include <charconv>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pyke/ntriples.hpp"
#include "pyke/rng.hpp"

namespace pyke::synth {
namespace {

constexpr std::string_view kBase = "http://synth.example.org/";
constexpr std::string_view kVocab = "http://synth.example.org/vocab#";

enum Role : std::size_t {
    University,
    Department,
    ResearchGroup,
    FullProfessor,
    AssociateProfessor,
    AssistantProfessor,
    Lecturer,
    Course,
    GraduateCourse,
    UndergraduateStudent,
    GraduateStudent,
    TeachingAssistant,
    Chair,
    Publication,
    kRoleCount,
};

constexpr std::array<std::string_view, kRoleCount> kRoleNames = {
    "University",          "Department",         "ResearchGroup", "FullProfessor",
    "AssociateProfessor",  "AssistantProfessor", "Lecturer",      "Course",
    "GraduateCourse",      "UndergraduateStudent", "GraduateStudent", "TeachingAssistant",
    "Chair",               "Publication",
};

struct Emitter {
    std::ostream& out;
    const SynthSpec& spec;
    std::string buffer;
    std::vector<std::string> class_iris;  // role -> class IRI after merging

    explicit Emitter(std::ostream& o, const SynthSpec& s) : out(o), spec(s) {
        buffer.reserve(1 << 20);
        for (std::size_t role = 0; role < kRoleCount; ++role) {
            std::string iri(kVocab);
            iri += kRoleNames[role % spec.classes];
            class_iris.push_back(std::move(iri));
        }
    }

    ~Emitter() { flush(); }

    void flush() {
        out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
        buffer.clear();
    }

    void triple(std::string_view s, std::string_view p, std::string_view o) {
        buffer += '<';
        buffer += s;
        buffer += "> <";
        buffer += p;
        buffer += "> <";
        buffer += o;
        buffer += "> .\n";
        if (buffer.size() > (1 << 20) - 512) flush();
    }

    void typed(std::string_view entity, Role role) {
        triple(entity, kRdfTypeIri, class_iris[role]);
    }
};

std::string pred(std::string_view name) {
    std::string p(kVocab);
    p += name;
    return p;
}

const std::string kSubOrganizationOf = pred("subOrganizationOf");
const std::string kWorksFor = pred("worksFor");
const std::string kMemberOf = pred("memberOf");
const std::string kTeacherOf = pred("teacherOf");
const std::string kTakesCourse = pred("takesCourse");
const std::string kAdvisor = pred("advisor");
const std::string kPublicationAuthor = pred("publicationAuthor");
const std::string kHeadOf = pred("headOf");
const std::string kTeachingAssistantOf = pred("teachingAssistantOf");
const std::string kDegreeFrom = pred("undergraduateDegreeFrom");

std::string university_iri(std::uint32_t u) {
    return std::string(kBase) + "u" + std::to_string(u);
}

void generate_department(Emitter& em, std::mt19937_64& gen, const std::string& univ,
                         const std::string& dept, std::uint32_t univ_index) {
    using pyke::rng::bounded;

    em.typed(dept, Department);
    em.triple(dept, kSubOrganizationOf, univ);

    const auto research_groups = 1 + bounded(gen, 2);
    for (std::uint64_t i = 0; i < research_groups; ++i) {
        std::string rg = dept + "/rg" + std::to_string(i);
        em.typed(rg, ResearchGroup);
        em.triple(rg, kSubOrganizationOf, dept);
    }

    struct Faculty {
        std::string iri;
        Role role;
    };
    std::vector<Faculty> faculty;
    auto add_faculty = [&](Role role, std::string_view prefix, std::uint64_t count) {
        for (std::uint64_t i = 0; i < count; ++i) {
            Faculty f{dept + "/" + std::string(prefix) + std::to_string(i), role};
            em.typed(f.iri, f.role);
            em.triple(f.iri, kWorksFor, dept);
            faculty.push_back(std::move(f));
        }
    };
    add_faculty(FullProfessor, "fprof", 2 + bounded(gen, 2));
    add_faculty(AssociateProfessor, "aprof", 2 + bounded(gen, 2));
    add_faculty(AssistantProfessor, "asprof", 2 + bounded(gen, 2));
    add_faculty(Lecturer, "lect", 2 + bounded(gen, 2));

    // Degree links; a configurable fraction points at another university.
    // The roll is always drawn so the stream stays aligned across scales.
    for (const auto& f : faculty) {
        std::string target = univ;
        const double roll = pyke::rng::uniform01(gen);
        if (em.spec.universities > 1 && roll < em.spec.cross_link_fraction) {
            auto other = static_cast<std::uint32_t>(bounded(gen, em.spec.universities - 1));
            if (other >= univ_index) ++other;
            target = university_iri(other);
        }
        em.triple(f.iri, kDegreeFrom, target);
    }

    // The first full professor chairs the department.
    em.typed(faculty.front().iri, Chair);
    em.triple(faculty.front().iri, kHeadOf, dept);

    const auto ug_courses = 8 + bounded(gen, 5);
    const auto grad_courses = 5 + bounded(gen, 3);
    std::vector<std::string> ug_course_iris, grad_course_iris;
    for (std::uint64_t i = 0; i < ug_courses; ++i) {
        std::string c = dept + "/ugc" + std::to_string(i);
        em.typed(c, Course);
        ug_course_iris.push_back(std::move(c));
    }
    for (std::uint64_t i = 0; i < grad_courses; ++i) {
        std::string c = dept + "/gc" + std::to_string(i);
        em.typed(c, GraduateCourse);
        grad_course_iris.push_back(std::move(c));
    }
    // Every course gets exactly one teacher, round-robin over the faculty.
    std::size_t teacher = 0;
    for (const auto& c : ug_course_iris) {
        em.triple(faculty[teacher++ % faculty.size()].iri, kTeacherOf, c);
    }
    for (const auto& c : grad_course_iris) {
        em.triple(faculty[teacher++ % faculty.size()].iri, kTeacherOf, c);
    }

    for (const auto& f : faculty) {
        for (int i = 0; i < 2; ++i) {
            std::string p = f.iri + "/pub" + std::to_string(i);
            em.typed(p, Publication);
            em.triple(p, kPublicationAuthor, f.iri);
        }
    }

    // Picks `count` distinct courses, order-independent of previous draws.
    auto pick_courses = [&](const std::vector<std::string>& pool, std::uint64_t count,
                            std::vector<std::size_t>& scratch) {
        scratch.clear();
        for (std::size_t i = 0; i < pool.size(); ++i) scratch.push_back(i);
        for (std::uint64_t i = 0; i < count; ++i) {
            auto j = i + bounded(gen, scratch.size() - i);
            std::swap(scratch[i], scratch[j]);
        }
        scratch.resize(count);
    };

    std::vector<std::size_t> picked;
    const auto undergrads = 55 + bounded(gen, 21);
    for (std::uint64_t i = 0; i < undergrads; ++i) {
        std::string s = dept + "/ug" + std::to_string(i);
        em.typed(s, UndergraduateStudent);
        em.triple(s, kMemberOf, dept);
        pick_courses(ug_course_iris, std::min<std::uint64_t>(2 + bounded(gen, 2), ug_course_iris.size()), picked);
        for (auto idx : picked) em.triple(s, kTakesCourse, ug_course_iris[idx]);
        if (bounded(gen, 5) == 0)
            em.triple(s, kAdvisor, faculty[bounded(gen, faculty.size())].iri);
    }

    const auto grads = 15 + bounded(gen, 11);
    for (std::uint64_t i = 0; i < grads; ++i) {
        std::string s = dept + "/gs" + std::to_string(i);
        em.typed(s, GraduateStudent);
        em.triple(s, kMemberOf, dept);
        pick_courses(grad_course_iris, std::min<std::uint64_t>(2 + bounded(gen, 2), grad_course_iris.size()), picked);
        for (auto idx : picked) em.triple(s, kTakesCourse, grad_course_iris[idx]);
        em.triple(s, kAdvisor, faculty[bounded(gen, faculty.size())].iri);
        if (bounded(gen, 10) < 3) {
            em.typed(s, TeachingAssistant);
            em.triple(s, kTeachingAssistantOf, ug_course_iris[bounded(gen, ug_course_iris.size())]);
        }
    }
}

}  // namespace

std::uint64_t SynthSpec::approx_triples() const {
    return static_cast<std::uint64_t>(universities) * 10700;
}

void generate(const SynthSpec& spec, std::ostream& out) {
    if (spec.universities < 1)
        throw std::invalid_argument("synthgen: need at least one university");
    if (spec.classes < 1 || spec.classes > kRoleCount)
        throw std::invalid_argument("synthgen: classes must be in 1..14");
    if (spec.cross_link_fraction < 0.0 || spec.cross_link_fraction > 1.0)
        throw std::invalid_argument("synthgen: cross link fraction must be in [0, 1]");

    Emitter em(out, spec);
    for (std::uint32_t u = 0; u < spec.universities; ++u) {
        // Per-university stream: adding universities never changes the
        // content generated for earlier ones.
        std::mt19937_64 gen(rng::per_term_seed(rng::stage_seed(spec.seed, rng::Stage::Synth), u));
        std::string univ = university_iri(u);
        em.typed(univ, University);
        const auto depts = 16 + rng::bounded(gen, 9);
        for (std::uint64_t d = 0; d < depts; ++d) {
            std::string dept = univ + "/d" + std::to_string(d);
            generate_department(em, gen, univ, dept, u);
        }
    }
    em.flush();
    if (!out) throw std::runtime_error("synthgen: write failed");
}

void generate_file(const SynthSpec& spec, const std::filesystem::path& path) {
    const bool gz = path.extension() == ".gz";
    if (gz) {
        std::ostringstream text;
        generate(spec, text);
        gzFile f = gzopen(path.string().c_str(), "wb");
        if (f == nullptr) throw std::runtime_error("synthgen: cannot open " + path.string());
        const std::string& s = text.str();
        std::size_t written = 0;
        while (written < s.size()) {
            const auto chunk = static_cast<unsigned>(
                std::min<std::size_t>(s.size() - written, 1u << 20));
            if (gzwrite(f, s.data() + written, chunk) != static_cast<int>(chunk)) {
                gzclose(f);
                throw std::runtime_error("synthgen: write failed for " + path.string());
            }
            written += chunk;
        }
        gzclose(f);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("synthgen: cannot open " + path.string());
    generate(spec, out);
}

std::span<const std::string_view> role_class_iris() {
    static const auto iris = [] {
        auto* strings = new std::vector<std::string>();
        for (auto name : kRoleNames) strings->push_back(std::string(kVocab) + std::string(name));
        auto* views = new std::vector<std::string_view>(strings->begin(), strings->end());
        return views;
    }();
    return *iris;
}

std::optional<std::uint32_t> university_of(std::string_view term) {
    if (!term.starts_with(kBase)) return std::nullopt;
    auto rest = term.substr(kBase.size());
    if (rest.empty() || rest[0] != 'u') return std::nullopt;
    rest.remove_prefix(1);
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
    if (ec != std::errc{} || ptr == rest.data()) return std::nullopt;
    // Only entity IRIs (u<N> or u<N>/...) carry a community.
    if (ptr != rest.data() + rest.size() && *ptr != '/') return std::nullopt;
    return value;
}

}  // namespace pyke::synth
