#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vg/store.hpp"
#include "vg/term.hpp"

namespace vg {

enum class BlankNodes {
  // Labels are scoped to the document and renamed to fresh dictionary labels.
  Freshen,
  // Labels are taken verbatim (repository-scoped, used for patches).
  Preserve,
};

// One triple per statement line. Blank lines and lines starting with '#' are
// skipped. Nothing is interned unless the whole input parses; errors carry
// the 1-based line number.
std::vector<Triple> parse_ntriples(std::string_view text, Dictionary& dict,
                                   BlankNodes blanks = BlankNodes::Freshen);

// One statement per line, sorted by the (s, p, o) term serializations.
std::string serialize_ntriples(std::span<const Triple> triples, const Dictionary& dict);

std::string format_statement(const Triple& t, const Dictionary& dict);

// Lines are "A <statement>" or "D <statement>"; '#' lines are comments.
Delta parse_patch(std::string_view text, Dictionary& dict);

// Removals first, then additions; each block sorted like serialize_ntriples.
std::string serialize_patch(const Delta& delta, const Dictionary& dict);

}  // namespace vg
