#include "vg/error.hpp"
#include "vg/query.hpp"

namespace vg::query {

ResultFormat parse_format(std::string_view name) {
  if (name == "tsv") return ResultFormat::Tsv;
  if (name == "csv") return ResultFormat::Csv;
  throw ValidationError("unknown result format '" + std::string(name) + "' (expected tsv or csv)");
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_value(const Term& t) {
  switch (t.kind) {
    case TermKind::Iri: return t.value;
    case TermKind::Blank: return "_:" + t.value;
    case TermKind::Literal: return t.value;
  }
  return {};
}

}  // namespace

std::string format_results(const SolutionTable& table, ResultFormat format) {
  std::string out;
  const bool tsv = format == ResultFormat::Tsv;
  const char* sep = tsv ? "\t" : ",";
  const char* eol = tsv ? "\n" : "\r\n";
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += sep;
    out += tsv ? "?" + table.header[i] : csv_field(table.header[i]);
  }
  out += eol;
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += sep;
      if (!row[i]) continue;
      out += tsv ? to_ntriples(*row[i]) : csv_field(csv_value(*row[i]));
    }
    out += eol;
  }
  return out;
}

}  // namespace vg::query
