#include "pyke/persistence.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace pyke {

static_assert(std::endian::native == std::endian::little,
              "binary cache layout assumes a little-endian host");

namespace {

constexpr char kCacheMagic[4] = {'P', 'Y', 'K', 'C'};
constexpr std::uint32_t kCacheVersion = 1;

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

template <typename T>
void write_raw(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw ParseError("cache: unexpected end of file", 0);
    return value;
}

void write_string(std::ostream& out, std::string_view s) {
    write_raw(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in) {
    auto len = read_raw<std::uint32_t>(in);
    std::string s(len, '\0');
    in.read(s.data(), len);
    if (!in) throw ParseError("cache: unexpected end of file", 0);
    return s;
}

}  // namespace

void write_embeddings(const std::filesystem::path& path, const Vocabulary& vocab,
                      const EmbeddingView& embeddings) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    std::string line;
    for (TermId x = 0; x < embeddings.terms; ++x) {
        line.assign(vocab.term(x));
        for (double v : embeddings.row(x)) {
            line += '\t';
            line += format_double(v);
        }
        line += '\n';
        out << line;
    }
    out.close();
    if (!out) throw std::runtime_error("write failed for " + path.string());

    nlohmann::json header = {
        {"format_version", 1},
        {"dimension", embeddings.dimension},
        {"vocab_size", embeddings.terms},
    };
    std::ofstream meta(path.string() + ".meta.json");
    if (!meta) throw std::runtime_error("cannot write " + path.string() + ".meta.json");
    meta << header.dump(2) << '\n';
}

EmbeddingFile read_embeddings(const std::filesystem::path& path) {
    const auto meta_path = path.string() + ".meta.json";
    std::ifstream meta(meta_path);
    if (!meta) throw ParseError("missing embedding header " + meta_path, 0);
    nlohmann::json header = nlohmann::json::parse(meta, nullptr, /*allow_exceptions=*/false);
    if (header.is_discarded()) throw ParseError("malformed embedding header " + meta_path, 0);

    EmbeddingFile file;
    file.header.format_version = header.value("format_version", 0u);
    file.header.dimension = header.value("dimension", 0u);
    file.header.vocab_size = header.value("vocab_size", std::uint64_t{0});
    if (file.header.format_version != 1)
        throw ParseError("unsupported embedding format version", 0);

    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string(), 0);

    const std::uint32_t n = file.header.dimension;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected term and " +
                                 std::to_string(n) + " values",
                             line_no);
        file.terms.push_back(line.substr(0, tab));
        std::size_t begin = tab + 1;
        std::uint32_t values = 0;
        while (begin <= line.size()) {
            std::size_t end = line.find('\t', begin);
            if (end == std::string::npos) end = line.size();
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(line.data() + begin, line.data() + end, v);
            if (ec != std::errc{} || ptr != line.data() + end)
                throw ParseError("line " + std::to_string(line_no) + ": bad value '" +
                                     line.substr(begin, end - begin) + "'",
                                 line_no);
            if (!std::isfinite(v))
                throw ParseError("line " + std::to_string(line_no) + ": non-finite value",
                                 line_no);
            file.matrix.push_back(v);
            ++values;
            begin = end + 1;
            if (end == line.size()) break;
        }
        if (values != n)
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(n) + " values, found " + std::to_string(values),
                             line_no);
    }
    if (file.terms.size() != file.header.vocab_size)
        throw ParseError("embedding file holds " + std::to_string(file.terms.size()) +
                             " rows, header says " + std::to_string(file.header.vocab_size),
                         0);
    return file;
}

void write_store_cache(const std::filesystem::path& path, const TripleStore& store,
                       const Vocabulary& vocab) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());

    out.write(kCacheMagic, sizeof(kCacheMagic));
    write_raw(out, kCacheVersion);

    write_raw(out, static_cast<std::uint64_t>(vocab.size()));
    for (TermId x = 0; x < vocab.size(); ++x) write_string(out, vocab.term(x));
    for (TermId x = 0; x < vocab.size(); ++x)
        write_raw(out, static_cast<std::uint8_t>(vocab.is_predicate(x) ? 1 : 0));

    write_raw(out, static_cast<std::uint64_t>(store.literal_count()));
    for (TermId i = 0; i < store.literal_count(); ++i)
        write_string(out, store.literal(make_literal_id(i)));

    write_raw(out, static_cast<std::uint64_t>(store.size()));
    for (const Triple& t : store.triples()) {
        write_raw(out, t.subject);
        write_raw(out, t.predicate);
        write_raw(out, t.object);
    }
    out.close();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

bool is_store_cache(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    char magic[4] = {};
    in.read(magic, sizeof(magic));
    return in && std::memcmp(magic, kCacheMagic, sizeof(magic)) == 0;
}

ParseResult read_store_cache(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string(), 0);

    char magic[4] = {};
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0)
        throw ParseError("not a store cache: " + path.string(), 0);
    if (read_raw<std::uint32_t>(in) != kCacheVersion)
        throw ParseError("unsupported cache version in " + path.string(), 0);

    ParseResult result;
    const auto vocab_size = read_raw<std::uint64_t>(in);
    for (std::uint64_t i = 0; i < vocab_size; ++i) result.vocab.intern(read_string(in));
    for (std::uint64_t i = 0; i < vocab_size; ++i)
        if (read_raw<std::uint8_t>(in) != 0) result.vocab.mark_predicate(static_cast<TermId>(i));

    const auto literal_count = read_raw<std::uint64_t>(in);
    for (std::uint64_t i = 0; i < literal_count; ++i)
        result.store.intern_literal(read_string(in));

    const auto triple_count = read_raw<std::uint64_t>(in);
    for (std::uint64_t i = 0; i < triple_count; ++i) {
        Triple t{};
        t.subject = read_raw<TermId>(in);
        t.predicate = read_raw<TermId>(in);
        t.object = read_raw<TermId>(in);
        result.store.add(t);
    }
    result.store.finalize();
    result.vocab.set_triple_count(result.store.size());
    return result;
}

ParseResult load_graph(const std::filesystem::path& path) {
    if (is_store_cache(path)) return read_store_cache(path);
    return parse_ntriples_file(path);
}

Clustering read_cluster_tsv(const std::filesystem::path& path, const Vocabulary& vocab) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string(), 0);

    Clustering out;
    std::vector<std::int64_t> raw_labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected 'term<TAB>label'",
                             line_no);
        std::string term = line.substr(0, tab);
        auto id = vocab.id(term);
        if (!id)
            throw ParseError("line " + std::to_string(line_no) + ": unknown term '" + term + "'",
                             line_no);
        std::int64_t label = 0;
        auto* begin = line.data() + tab + 1;
        auto* end = line.data() + line.size();
        auto [ptr, ec] = std::from_chars(begin, end, label);
        if (ec != std::errc{} || ptr != end)
            throw ParseError("line " + std::to_string(line_no) + ": bad label '" +
                                 line.substr(tab + 1) + "'",
                             line_no);
        out.terms.push_back(*id);
        raw_labels.push_back(label);
    }

    // Dense relabeling in ascending original-label order; negatives are noise.
    std::map<std::int64_t, std::int32_t> remap;
    for (auto l : raw_labels)
        if (l >= 0) remap.emplace(l, 0);
    std::int32_t next = 0;
    for (auto& [orig, dense] : remap) dense = next++;
    out.labels.reserve(raw_labels.size());
    for (auto l : raw_labels) out.labels.push_back(l < 0 ? -1 : remap[l]);
    out.cluster_count = static_cast<std::uint32_t>(next);
    return out;
}

void write_run_report_jsonl(const std::filesystem::path& path, const RunReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());

    nlohmann::json initial = {{"t", 0}, {"displacement", 0.0}, {"energy", 1.0}, {"millis", 0.0}};
    if (!std::isnan(report.initial_objective)) initial["objective"] = report.initial_objective;
    out << initial.dump() << '\n';

    for (const auto& rec : report.iterations) {
        nlohmann::json row = {
            {"t", rec.t},
            {"displacement", rec.displacement},
            {"energy", rec.energy},
            {"millis", rec.millis},
        };
        if (!std::isnan(rec.objective)) row["objective"] = rec.objective;
        out << row.dump() << '\n';
    }
}

}  // namespace pyke
