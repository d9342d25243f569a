#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vg {

namespace xsd {
inline constexpr std::string_view kString = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view kInteger = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view kDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr std::string_view kDouble = "http://www.w3.org/2001/XMLSchema#double";
inline constexpr std::string_view kFloat = "http://www.w3.org/2001/XMLSchema#float";
inline constexpr std::string_view kBoolean = "http://www.w3.org/2001/XMLSchema#boolean";
}  // namespace xsd

namespace rdf {
inline constexpr std::string_view kType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kLangString =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
}  // namespace rdf

enum class TermKind : std::uint8_t { Iri, Blank, Literal };

// An RDF term. `value` holds the IRI text, the blank label (without "_:") or
// the literal's lexical form. Equality is structural: no value-space
// normalization happens here.
struct Term {
  TermKind kind = TermKind::Iri;
  std::string value;
  std::string datatype;  // literals only
  std::string language;  // literals only, lower-cased is NOT enforced

  static Term iri(std::string text);
  static Term blank(std::string label);
  // Plain literals get xsd:string.
  static Term literal(std::string lexical, std::string datatype = std::string(xsd::kString));
  static Term lang_literal(std::string lexical, std::string language);

  bool is_iri() const { return kind == TermKind::Iri; }
  bool is_blank() const { return kind == TermKind::Blank; }
  bool is_literal() const { return kind == TermKind::Literal; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept;
};

// Throws ValidationError if the term breaks an invariant.
void validate(const Term& term);

// N-Triples rendering of a single term.
std::string to_ntriples(const Term& term);

// Numeric literals compare in double space; equal-datatype strings (and
// language strings with the same tag) compare by code point; everything else
// is unordered, which callers treat as an error.
std::partial_ordering compare_values(const Term& a, const Term& b);

// Numeric value of a literal with a numeric datatype, if it parses.
std::optional<double> numeric_value(const Term& literal);

bool is_numeric_datatype(std::string_view datatype);

using TermId = std::uint32_t;
inline constexpr TermId kNoTerm = static_cast<TermId>(-1);

struct Triple {
  TermId s = 0;
  TermId p = 0;
  TermId o = 0;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    std::uint64_t h = t.s;
    h = h * 0x9E3779B97F4A7C15ULL ^ t.p;
    h = h * 0x9E3779B97F4A7C15ULL ^ t.o;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

// Bijective Term <-> TermId table. Ids are dense from 0 in interning order.
// Not synchronized: callers must serialize intern().
class Dictionary {
 public:
  TermId intern(const Term& term);
  const Term& resolve(TermId id) const;
  std::optional<TermId> find(const Term& term) const;
  std::size_t size() const { return terms_.size(); }

  // Fresh blank label not yet present in the dictionary.
  std::string fresh_blank_label();

 private:
  std::vector<Term> terms_;
  std::unordered_map<Term, TermId, TermHash> ids_;
  std::uint64_t next_blank_ = 0;
};

// Checks the structural constraints on subject and predicate positions.
void validate(const Triple& triple, const Dictionary& dict);

}  // namespace vg
