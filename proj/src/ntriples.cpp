#include "pyke/ntriples.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pyke {
namespace {

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\r'; }

struct LineCursor {
    std::string_view text;
    std::size_t pos = 0;
    std::size_t line_no;

    void skip_ws() {
        while (pos < text.size() && is_ws(text[pos])) ++pos;
    }

    bool at_end() const { return pos >= text.size(); }

    [[noreturn]] void fail(const std::string& what, std::string_view token) const {
        std::string msg = "line " + std::to_string(line_no) + ": " + what;
        if (!token.empty()) {
            msg += " near '";
            msg += token.substr(0, 64);
            msg += "'";
        }
        throw ParseError(msg, line_no);
    }

    std::string_view rest() const { return text.substr(pos); }
};

enum class TermKind { Iri, Blank, Literal };

struct Token {
    TermKind kind;
    std::string_view text;  // IRI body, blank label incl. "_:", or full literal lexical form
};

// <...> with the angle brackets stripped.
std::string_view read_iri(LineCursor& cur) {
    const auto start = cur.pos;
    ++cur.pos;  // '<'
    while (cur.pos < cur.text.size() && cur.text[cur.pos] != '>') {
        char c = cur.text[cur.pos];
        if (c == '<' || c == '"' || c == ' ') cur.fail("invalid character in IRI", cur.text.substr(start, cur.pos - start + 1));
        ++cur.pos;
    }
    if (cur.pos >= cur.text.size()) cur.fail("unterminated IRI", cur.text.substr(start));
    ++cur.pos;  // '>'
    return cur.text.substr(start + 1, cur.pos - start - 2);
}

std::string_view read_blank(LineCursor& cur) {
    const auto start = cur.pos;
    cur.pos += 2;  // "_:"
    if (cur.at_end() || is_ws(cur.text[cur.pos])) cur.fail("empty blank node label", cur.text.substr(start));
    while (cur.pos < cur.text.size() && !is_ws(cur.text[cur.pos]) && cur.text[cur.pos] != '.') ++cur.pos;
    return cur.text.substr(start, cur.pos - start);
}

// Full lexical form including quotes and any @lang / ^^<datatype> suffix.
// Escapes are validated but not decoded; the raw form is the identity used
// for deduplication.
std::string_view read_literal(LineCursor& cur) {
    const auto start = cur.pos;
    ++cur.pos;  // opening quote
    while (cur.pos < cur.text.size()) {
        char c = cur.text[cur.pos];
        if (c == '\\') {
            if (cur.pos + 1 >= cur.text.size()) cur.fail("dangling escape in literal", cur.text.substr(start));
            cur.pos += 2;
            continue;
        }
        if (c == '"') break;
        ++cur.pos;
    }
    if (cur.pos >= cur.text.size()) cur.fail("unterminated literal", cur.text.substr(start));
    ++cur.pos;  // closing quote
    if (cur.pos < cur.text.size() && cur.text[cur.pos] == '@') {
        ++cur.pos;
        const auto tag_start = cur.pos;
        while (cur.pos < cur.text.size() &&
               (std::isalnum(static_cast<unsigned char>(cur.text[cur.pos])) || cur.text[cur.pos] == '-'))
            ++cur.pos;
        if (cur.pos == tag_start) cur.fail("empty language tag", cur.text.substr(start, cur.pos - start));
    } else if (cur.pos + 1 < cur.text.size() && cur.text[cur.pos] == '^' && cur.text[cur.pos + 1] == '^') {
        cur.pos += 2;
        if (cur.at_end() || cur.text[cur.pos] != '<') cur.fail("datatype must be an IRI", cur.rest());
        read_iri(cur);
    }
    return cur.text.substr(start, cur.pos - start);
}

Token read_term(LineCursor& cur, bool allow_blank, bool allow_literal) {
    cur.skip_ws();
    if (cur.at_end()) cur.fail("unexpected end of line", {});
    char c = cur.text[cur.pos];
    if (c == '<') return {TermKind::Iri, read_iri(cur)};
    if (c == '_' && cur.pos + 1 < cur.text.size() && cur.text[cur.pos + 1] == ':') {
        if (!allow_blank) cur.fail("blank node not allowed here", cur.rest());
        return {TermKind::Blank, read_blank(cur)};
    }
    if (c == '"') {
        if (!allow_literal) cur.fail("literal not allowed here", cur.rest());
        return {TermKind::Literal, read_literal(cur)};
    }
    cur.fail("expected IRI, blank node, or literal", cur.rest());
}

void parse_line(std::string_view line, std::size_t line_no, ParseResult& out) {
    LineCursor cur{line, 0, line_no};
    cur.skip_ws();
    if (cur.at_end() || cur.text[cur.pos] == '#') return;  // blank or comment

    ++out.lines;
    Token s = read_term(cur, /*allow_blank=*/true, /*allow_literal=*/false);
    Token p = read_term(cur, /*allow_blank=*/false, /*allow_literal=*/false);
    Token o = read_term(cur, /*allow_blank=*/true, /*allow_literal=*/true);

    cur.skip_ws();
    if (cur.at_end() || cur.text[cur.pos] != '.') cur.fail("expected terminating '.'", cur.rest());
    ++cur.pos;
    cur.skip_ws();
    if (!cur.at_end() && cur.text[cur.pos] != '#') cur.fail("trailing content after '.'", cur.rest());

    TermId sid = out.vocab.intern(s.text);
    TermId pid = out.vocab.intern(p.text);
    out.vocab.mark_predicate(pid);
    TermId oid;
    if (o.kind == TermKind::Literal) {
        oid = out.store.intern_literal(o.text);
        ++out.literal_objects;
    } else {
        oid = out.vocab.intern(o.text);
    }
    out.store.add({sid, pid, oid});
}

}  // namespace

void TripleStore::finalize() {
    std::sort(triples_.begin(), triples_.end());
    triples_.erase(std::unique(triples_.begin(), triples_.end()), triples_.end());
    triples_.shrink_to_fit();
}

TermId TripleStore::intern_literal(std::string_view lexical) {
    if (auto it = literal_index_.find(lexical); it != literal_index_.end()) return it->second;
    auto id = make_literal_id(static_cast<TermId>(literals_.size()));
    auto [it, inserted] = literal_index_.emplace(std::string(lexical), id);
    literals_.push_back(&it->first);
    return id;
}

ParseResult parse_ntriples(std::string_view text) {
    ParseResult out;
    std::size_t line_no = 1;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        std::size_t nl = text.find('\n', begin);
        std::string_view line = (nl == std::string_view::npos)
                                    ? text.substr(begin)
                                    : text.substr(begin, nl - begin);
        parse_line(line, line_no, out);
        if (nl == std::string_view::npos) break;
        begin = nl + 1;
        ++line_no;
    }
    out.store.finalize();
    out.vocab.set_triple_count(out.store.size());
    return out;
}

ParseResult parse_ntriples_file(const std::filesystem::path& path) {
    // gzopen reads both gzip and plain files.
    gzFile f = gzopen(path.string().c_str(), "rb");
    if (f == nullptr) throw ParseError("cannot open " + path.string(), 0);
    std::string text;
    char buf[1 << 16];
    int n;
    while ((n = gzread(f, buf, sizeof(buf))) > 0) text.append(buf, static_cast<std::size_t>(n));
    bool read_error = n < 0;
    gzclose(f);
    if (read_error) throw ParseError("read error in " + path.string(), 0);
    return parse_ntriples(text);
}

void write_ntriples(const TripleStore& store, const Vocabulary& vocab, std::ostream& out) {
    for (const Triple& t : store.triples()) {
        std::string_view s = vocab.term(t.subject);
        std::string_view p = vocab.term(t.predicate);
        if (s.substr(0, 2) == "_:") {
            out << s;
        } else {
            out << '<' << s << '>';
        }
        out << " <" << p << "> ";
        if (is_literal_id(t.object)) {
            out << store.literal(t.object);  // stored with quotes and suffix
        } else {
            std::string_view o = vocab.term(t.object);
            if (o.substr(0, 2) == "_:") {
                out << o;
            } else {
                out << '<' << o << '>';
            }
        }
        out << " .\n";
    }
}

}  // namespace pyke
