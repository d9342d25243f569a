#include "vg/term.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "vg/error.hpp"

namespace vg {

Term Term::iri(std::string text) { return Term{TermKind::Iri, std::move(text), {}, {}}; }

Term Term::blank(std::string label) { return Term{TermKind::Blank, std::move(label), {}, {}}; }

Term Term::literal(std::string lexical, std::string datatype) {
  return Term{TermKind::Literal, std::move(lexical), std::move(datatype), {}};
}

Term Term::lang_literal(std::string lexical, std::string language) {
  return Term{TermKind::Literal, std::move(lexical), std::string(rdf::kLangString),
              std::move(language)};
}

std::size_t TermHash::operator()(const Term& t) const noexcept {
  std::hash<std::string_view> h;
  std::size_t seed = static_cast<std::size_t>(t.kind);
  for (std::string_view part : {std::string_view(t.value), std::string_view(t.datatype),
                                std::string_view(t.language)}) {
    seed ^= h(part) + 0x9E3779B97F4A7C15ULL + (seed << 6) + (seed >> 2);
  }
  return seed;
}

namespace {

bool has_scheme(std::string_view iri) {
  if (iri.empty() || !std::isalpha(static_cast<unsigned char>(iri[0]))) return false;
  for (char c : iri.substr(1)) {
    if (c == ':') return true;
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') {
      return false;
    }
  }
  return false;
}

void validate_iri(std::string_view iri, std::string_view what) {
  if (iri.empty()) throw ValidationError(std::string(what) + " IRI is empty");
  for (unsigned char c : iri) {
    if (c <= 0x20 || c == '<' || c == '>') {
      throw ValidationError(std::string(what) + " IRI contains whitespace or angle brackets: " +
                            std::string(iri));
    }
  }
  if (!has_scheme(iri)) {
    throw ValidationError(std::string(what) + " IRI is not absolute: " + std::string(iri));
  }
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string_view strip_sign(std::string_view s) {
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) s.remove_prefix(1);
  return s;
}

bool valid_integer(std::string_view s) { return all_digits(strip_sign(s)); }

bool valid_decimal(std::string_view s) {
  s = strip_sign(s);
  auto dot = s.find('.');
  if (dot == std::string_view::npos) return all_digits(s);
  auto whole = s.substr(0, dot);
  auto frac = s.substr(dot + 1);
  if (whole.empty() && frac.empty()) return false;
  return (whole.empty() || all_digits(whole)) && (frac.empty() || all_digits(frac));
}

bool valid_double(std::string_view s) {
  if (s == "INF" || s == "-INF" || s == "+INF" || s == "NaN") return true;
  auto e = s.find_first_of("eE");
  if (e == std::string_view::npos) return valid_decimal(s);
  return valid_decimal(s.substr(0, e)) && valid_integer(s.substr(e + 1));
}

}  // namespace

bool is_numeric_datatype(std::string_view dt) {
  return dt == xsd::kInteger || dt == xsd::kDecimal || dt == xsd::kDouble || dt == xsd::kFloat;
}

std::optional<double> numeric_value(const Term& t) {
  if (!t.is_literal()) return std::nullopt;
  std::string_view dt = t.datatype;
  std::string_view lex = t.value;
  bool ok = false;
  if (dt == xsd::kInteger) {
    ok = valid_integer(lex);
  } else if (dt == xsd::kDecimal) {
    ok = valid_decimal(lex);
  } else if (dt == xsd::kDouble || dt == xsd::kFloat) {
    ok = valid_double(lex);
    if (ok && (lex == "INF" || lex == "+INF")) return HUGE_VAL;
    if (ok && lex == "-INF") return -HUGE_VAL;
    if (ok && lex == "NaN") return std::nullopt;
  }
  if (!ok) return std::nullopt;
  if (!lex.empty() && lex[0] == '+') lex.remove_prefix(1);
  double out = 0;
  auto [ptr, ec] = std::from_chars(lex.data(), lex.data() + lex.size(), out);
  if (ec != std::errc() || ptr != lex.data() + lex.size()) return std::nullopt;
  return out;
}

std::partial_ordering compare_values(const Term& a, const Term& b) {
  if (!a.is_literal() || !b.is_literal()) return std::partial_ordering::unordered;
  if (is_numeric_datatype(a.datatype) && is_numeric_datatype(b.datatype)) {
    auto x = numeric_value(a);
    auto y = numeric_value(b);
    if (!x || !y) return std::partial_ordering::unordered;
    return *x <=> *y;
  }
  bool same_string_type = a.datatype == b.datatype &&
                          (a.datatype == xsd::kString ||
                           (a.datatype == rdf::kLangString && a.language == b.language));
  if (!same_string_type) return std::partial_ordering::unordered;
  // UTF-8 byte order equals code point order.
  int c = a.value.compare(b.value);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

void validate(const Term& t) {
  switch (t.kind) {
    case TermKind::Iri:
      validate_iri(t.value, "term");
      if (!t.datatype.empty() || !t.language.empty()) {
        throw ValidationError("IRI term carries literal fields");
      }
      break;
    case TermKind::Blank:
      if (t.value.empty()) throw ValidationError("blank node label is empty");
      for (unsigned char c : t.value) {
        if (c <= 0x20) throw ValidationError("blank node label contains whitespace");
      }
      break;
    case TermKind::Literal:
      validate_iri(t.datatype, "datatype");
      if (!t.language.empty() && t.datatype != rdf::kLangString) {
        throw ValidationError("language-tagged literal must have datatype rdf:langString");
      }
      if (t.language.empty() && t.datatype == rdf::kLangString) {
        throw ValidationError("rdf:langString literal without language tag");
      }
      break;
  }
}

namespace {

void append_uchar(std::string& out, unsigned char c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "\\u%04X", c);
  out += buf;
}

void append_escaped_literal(std::string& out, std::string_view s) {
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20 || c == 0x7F) {
          append_uchar(out, c);
        } else {
          out += static_cast<char>(c);
        }
    }
  }
}

void append_escaped_iri(std::string& out, std::string_view s) {
  for (unsigned char c : s) {
    if (c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' ||
        c == '^' || c == '`' || c == '\\') {
      append_uchar(out, c);
    } else {
      out += static_cast<char>(c);
    }
  }
}

}  // namespace

std::string to_ntriples(const Term& t) {
  std::string out;
  switch (t.kind) {
    case TermKind::Iri:
      out += '<';
      append_escaped_iri(out, t.value);
      out += '>';
      break;
    case TermKind::Blank:
      out += "_:";
      out += t.value;
      break;
    case TermKind::Literal:
      out += '"';
      append_escaped_literal(out, t.value);
      out += '"';
      if (!t.language.empty()) {
        out += '@';
        out += t.language;
      } else if (t.datatype != xsd::kString) {
        out += "^^<";
        append_escaped_iri(out, t.datatype);
        out += '>';
      }
      break;
  }
  return out;
}

TermId Dictionary::intern(const Term& term) {
  if (auto it = ids_.find(term); it != ids_.end()) return it->second;
  validate(term);
  auto id = static_cast<TermId>(terms_.size());
  terms_.push_back(term);
  ids_.emplace(term, id);
  return id;
}

const Term& Dictionary::resolve(TermId id) const {
  if (id >= terms_.size()) throw LookupError("unknown term id " + std::to_string(id));
  return terms_[id];
}

std::optional<TermId> Dictionary::find(const Term& term) const {
  if (auto it = ids_.find(term); it != ids_.end()) return it->second;
  return std::nullopt;
}

std::string Dictionary::fresh_blank_label() {
  for (;;) {
    std::string label = "b" + std::to_string(next_blank_++);
    if (!ids_.contains(Term::blank(label))) return label;
  }
}

void validate(const Triple& t, const Dictionary& dict) {
  const Term& s = dict.resolve(t.s);
  const Term& p = dict.resolve(t.p);
  dict.resolve(t.o);
  if (s.is_literal()) throw ValidationError("literal in subject position");
  if (!p.is_iri()) throw ValidationError("predicate must be an IRI");
}

}  // namespace vg
