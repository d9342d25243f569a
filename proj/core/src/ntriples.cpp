#include "vg/ntriples.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <tuple>

#include "vg/error.hpp"

namespace vg {
namespace {

bool is_ws(char c) { return c == ' ' || c == '\t'; }

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Parses a single N-Triples statement from one line.
class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_no) : s_(line), line_(line_no) {}

  std::array<Term, 3> statement() {
    skip_ws();
    Term subject = peek() == '<' ? iri() : blank();
    skip_ws();
    Term predicate = iri();
    skip_ws();
    Term object = peek() == '<' ? iri() : (peek() == '_' ? blank() : literal());
    skip_ws();
    if (peek() != '.') fail("expected '.' at end of statement");
    ++pos_;
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected text after '.'");
    return {std::move(subject), std::move(predicate), std::move(object)};
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, pos_ + 1); }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < s_.size() && is_ws(s_[pos_])) ++pos_;
  }

  std::uint32_t hex(std::size_t digits) {
    if (pos_ + digits > s_.size()) fail("truncated \\u escape");
    std::uint32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      char c = s_[pos_++];
      cp <<= 4;
      if (c >= '0' && c <= '9') {
        cp |= static_cast<std::uint32_t>(c - '0');
      } else if (c >= 'a' && c <= 'f') {
        cp |= static_cast<std::uint32_t>(c - 'a' + 10);
      } else if (c >= 'A' && c <= 'F') {
        cp |= static_cast<std::uint32_t>(c - 'A' + 10);
      } else {
        fail("invalid hex digit in escape");
      }
    }
    if ((cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) fail("escape is not a scalar value");
    return cp;
  }

  void uchar(std::string& out) {
    char kind = s_[pos_++];
    append_utf8(out, hex(kind == 'u' ? 4 : 8));
  }

  std::string iri_text() {
    if (peek() != '<') fail("expected '<'");
    ++pos_;
    std::string out;
    for (;;) {
      if (pos_ >= s_.size()) fail("unterminated IRI");
      char c = s_[pos_];
      if (c == '>') {
        ++pos_;
        break;
      }
      if (c == '\\') {
        ++pos_;
        if (peek() != 'u' && peek() != 'U') fail("only \\u and \\U escapes are allowed in IRIs");
        uchar(out);
        continue;
      }
      if (static_cast<unsigned char>(c) <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' ||
          c == '|' || c == '^' || c == '`') {
        fail("invalid character in IRI");
      }
      out += c;
      ++pos_;
    }
    return out;
  }

  Term checked(Term t) {
    try {
      validate(t);
    } catch (const ValidationError& e) {
      fail(e.what());
    }
    return t;
  }

  Term iri() { return checked(Term::iri(iri_text())); }

  Term blank() {
    if (s_.substr(pos_, 2) != "_:") fail("expected IRI, blank node or literal");
    pos_ += 2;
    std::size_t start = pos_;
    while (pos_ < s_.size()) {
      unsigned char c = static_cast<unsigned char>(s_[pos_]);
      if (std::isalnum(c) || c == '_' || c == '-' || c == '.' || c >= 0x80) {
        ++pos_;
      } else {
        break;
      }
    }
    // A label never ends with '.'; give it back to the statement terminator.
    while (pos_ > start && s_[pos_ - 1] == '.') --pos_;
    if (pos_ == start) fail("empty blank node label");
    return checked(Term::blank(std::string(s_.substr(start, pos_ - start))));
  }

  Term literal() {
    if (peek() != '"') fail("expected IRI, blank node or literal");
    ++pos_;
    std::string lex;
    for (;;) {
      if (pos_ >= s_.size()) fail("unterminated string literal");
      char c = s_[pos_++];
      if (c == '"') break;
      if (c == '\n' || c == '\r') fail("raw line break in literal");
      if (c != '\\') {
        lex += c;
        continue;
      }
      if (pos_ >= s_.size()) fail("dangling backslash");
      char e = s_[pos_];
      switch (e) {
        case 't': lex += '\t'; ++pos_; break;
        case 'b': lex += '\b'; ++pos_; break;
        case 'n': lex += '\n'; ++pos_; break;
        case 'r': lex += '\r'; ++pos_; break;
        case 'f': lex += '\f'; ++pos_; break;
        case '"': lex += '"'; ++pos_; break;
        case '\'': lex += '\''; ++pos_; break;
        case '\\': lex += '\\'; ++pos_; break;
        case 'u':
        case 'U': uchar(lex); break;
        default: fail(std::string("unknown escape \\") + e);
      }
    }
    if (peek() == '@') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-')) {
        ++pos_;
      }
      auto tag = s_.substr(start, pos_ - start);
      if (tag.empty() || !std::isalpha(static_cast<unsigned char>(tag[0])) || tag.back() == '-') {
        fail("invalid language tag");
      }
      return checked(Term::lang_literal(std::move(lex), std::string(tag)));
    }
    if (s_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      return checked(Term::literal(std::move(lex), iri_text()));
    }
    return checked(Term::literal(std::move(lex)));
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') continue;
    f(line, line_no);
  }
}

class Interner {
 public:
  Interner(Dictionary& dict, BlankNodes blanks) : dict_(dict), blanks_(blanks) {}

  Triple intern(std::array<Term, 3>& terms) {
    Triple t{one(terms[0]), one(terms[1]), one(terms[2])};
    return t;
  }

 private:
  TermId one(Term& term) {
    if (term.is_blank() && blanks_ == BlankNodes::Freshen) {
      auto [it, inserted] = renamed_.try_emplace(term.value);
      if (inserted) it->second = dict_.fresh_blank_label();
      term.value = it->second;
    }
    return dict_.intern(term);
  }

  Dictionary& dict_;
  BlankNodes blanks_;
  std::map<std::string, std::string> renamed_;
};

using SortKey = std::tuple<std::string, std::string, std::string>;

std::vector<std::pair<SortKey, const Triple*>> sorted_keys(std::span<const Triple> triples,
                                                           const Dictionary& dict) {
  std::vector<std::pair<SortKey, const Triple*>> keyed;
  keyed.reserve(triples.size());
  for (const Triple& t : triples) {
    keyed.emplace_back(SortKey{to_ntriples(dict.resolve(t.s)), to_ntriples(dict.resolve(t.p)),
                               to_ntriples(dict.resolve(t.o))},
                       &t);
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return keyed;
}

void append_sorted(std::string& out, std::span<const Triple> triples, const Dictionary& dict,
                   std::string_view prefix) {
  for (const auto& [k, t] : sorted_keys(triples, dict)) {
    out += prefix;
    out += std::get<0>(k);
    out += ' ';
    out += std::get<1>(k);
    out += ' ';
    out += std::get<2>(k);
    out += " .\n";
  }
}

}  // namespace

std::vector<Triple> parse_ntriples(std::string_view text, Dictionary& dict, BlankNodes blanks) {
  std::vector<std::array<Term, 3>> parsed;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    parsed.push_back(LineParser(line, line_no).statement());
  });
  Interner interner(dict, blanks);
  std::vector<Triple> out;
  out.reserve(parsed.size());
  for (auto& terms : parsed) out.push_back(interner.intern(terms));
  return out;
}

std::string format_statement(const Triple& t, const Dictionary& dict) {
  return to_ntriples(dict.resolve(t.s)) + " " + to_ntriples(dict.resolve(t.p)) + " " +
         to_ntriples(dict.resolve(t.o)) + " .";
}

std::string serialize_ntriples(std::span<const Triple> triples, const Dictionary& dict) {
  std::string out;
  append_sorted(out, triples, dict, "");
  return out;
}

Delta parse_patch(std::string_view text, Dictionary& dict) {
  std::vector<std::pair<bool, std::array<Term, 3>>> parsed;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    auto first = line.find_first_not_of(" \t");
    char op = line[first];
    if ((op != 'A' && op != 'D') || first + 1 >= line.size() || !is_ws(line[first + 1])) {
      throw ParseError("patch lines must start with 'A ' or 'D '", line_no, first + 1);
    }
    parsed.emplace_back(op == 'A', LineParser(line.substr(first + 2), line_no).statement());
  });
  Interner interner(dict, BlankNodes::Preserve);
  Delta delta;
  for (auto& [add, terms] : parsed) {
    Triple t = interner.intern(terms);
    (add ? delta.additions : delta.removals).insert(t);
  }
  delta.validate();
  return delta;
}

std::string serialize_patch(const Delta& delta, const Dictionary& dict) {
  std::string out;
  std::vector<Triple> removals(delta.removals.begin(), delta.removals.end());
  std::vector<Triple> additions(delta.additions.begin(), delta.additions.end());
  append_sorted(out, removals, dict, "D ");
  append_sorted(out, additions, dict, "A ");
  return out;
}

}  // namespace vg
