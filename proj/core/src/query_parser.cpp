#include <algorithm>
#include <cctype>
#include <set>

#include "vg/error.hpp"
#include "vg/query.hpp"

namespace vg::query {

bool Query::has_aggregates() const {
  return std::any_of(projections.begin(), projections.end(), [](const Projection& p) {
    return std::holds_alternative<Aggregate>(p.value);
  });
}

std::vector<VarId> Query::version_vars() const {
  std::vector<VarId> out;
  for (VarId i = 0; i < variables.size(); ++i) {
    if (variables[i].version) out.push_back(i);
  }
  return out;
}

std::string_view to_string(VersionDomain d) { return d == VersionDomain::All ? "all" : "heads"; }

VersionDomain parse_domain(std::string_view name) {
  if (name == "all") return VersionDomain::All;
  if (name == "heads") return VersionDomain::Heads;
  throw ValidationError("unknown version domain '" + std::string(name) +
                        "' (expected all or heads)");
}

namespace {

enum class Tok {
  End,
  Iri,       // text = IRI
  PName,     // text = "prefix:local"
  Var,       // text = name
  Blank,     // text = label
  String,    // text = unescaped value
  LangTag,   // text = tag
  Integer,
  Decimal,
  Double,
  Word,      // keyword or bare identifier
  Punct,     // text = one of { } ( ) . ; , * [ ] ^^ = != < <= > >= && || !
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         static_cast<unsigned char>(c) >= 0x80;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : s_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= s_.size()) {
        out.push_back(t);
        return out;
      }
      lex_one(t);
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw QueryError(what, line_, col_); }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0';
  }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < s_.size(); ++i) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_space() {
    for (;;) {
      while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
      if (peek() != '#') return;
      while (pos_ < s_.size() && s_[pos_] != '\n') advance();
    }
  }

  // '<' starts an IRI only if a valid IRIREF follows; otherwise it is the
  // less-than operator.
  bool try_iri(Token& t) {
    std::size_t end = pos_ + 1;
    while (end < s_.size()) {
      unsigned char c = static_cast<unsigned char>(s_[end]);
      if (c == '>') break;
      if (c <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
          c == '`' || c == '\\') {
        return false;
      }
      ++end;
    }
    if (end >= s_.size()) return false;
    t.kind = Tok::Iri;
    t.text = std::string(s_.substr(pos_ + 1, end - pos_ - 1));
    advance(end - pos_ + 1);
    return true;
  }

  void lex_string(Token& t) {
    char quote = peek();
    advance();
    std::string out;
    for (;;) {
      if (pos_ >= s_.size()) fail("unterminated string");
      char c = peek();
      if (c == quote) {
        advance();
        break;
      }
      if (c == '\n') fail("line break in string");
      if (c != '\\') {
        out += c;
        advance();
        continue;
      }
      advance();
      char e = peek();
      advance();
      switch (e) {
        case 't': out += '\t'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 'b': out += '\b'; break;
        case 'f': out += '\f'; break;
        case '"': out += '"'; break;
        case '\'': out += '\''; break;
        case '\\': out += '\\'; break;
        default: fail(std::string("unknown escape \\") + e);
      }
    }
    t.kind = Tok::String;
    t.text = std::move(out);
  }

  void lex_number(Token& t) {
    std::size_t start = pos_;
    if (peek() == '+' || peek() == '-') advance();
    bool digits = false;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      advance();
      digits = true;
    }
    t.kind = Tok::Integer;
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      t.kind = Tok::Decimal;
      digits = true;
    }
    if (digits && (peek() == 'e' || peek() == 'E')) {
      advance();
      if (peek() == '+' || peek() == '-') advance();
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("malformed exponent");
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      t.kind = Tok::Double;
    }
    if (!digits) fail("malformed number");
    t.text = std::string(s_.substr(start, pos_ - start));
  }

  void lex_one(Token& t) {
    char c = peek();
    if (c == '<' && try_iri(t)) return;
    if (c == '?' || c == '$') {
      advance();
      std::size_t start = pos_;
      while (name_char(peek())) advance();
      if (pos_ == start) fail("empty variable name");
      t.kind = Tok::Var;
      t.text = std::string(s_.substr(start, pos_ - start));
      return;
    }
    if (c == '"' || c == '\'') return lex_string(t);
    if (c == '@') {
      advance();
      std::size_t start = pos_;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-') advance();
      if (pos_ == start) fail("empty language tag");
      t.kind = Tok::LangTag;
      t.text = std::string(s_.substr(start, pos_ - start));
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        ((c == '+' || c == '-') && std::isdigit(static_cast<unsigned char>(peek(1)))) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      return lex_number(t);
    }
    if (c == '_' && peek(1) == ':') {
      advance(2);
      std::size_t start = pos_;
      while (name_char(peek()) || (peek() == '.' && name_char(peek(1)))) advance();
      if (pos_ == start) fail("empty blank node label");
      t.kind = Tok::Blank;
      t.text = std::string(s_.substr(start, pos_ - start));
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == ':') {
      std::size_t start = pos_;
      while (name_char(peek()) || (peek() == '.' && name_char(peek(1)))) advance();
      if (peek() == ':') {
        advance();
        while (name_char(peek()) || peek() == ':' || peek() == '%' ||
               (peek() == '.' && name_char(peek(1)))) {
          advance();
        }
        t.kind = Tok::PName;
      } else {
        t.kind = Tok::Word;
      }
      t.text = std::string(s_.substr(start, pos_ - start));
      return;
    }
    static constexpr std::string_view two[] = {"^^", "!=", "<=", ">=", "&&", "||"};
    for (std::string_view op : two) {
      if (s_.substr(pos_, 2) == op) {
        t.kind = Tok::Punct;
        t.text = std::string(op);
        advance(2);
        return;
      }
    }
    if (std::string_view("{}().;,*[]=<>!").find(c) != std::string_view::npos) {
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      advance();
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Query run() {
    prologue();
    select_clause();
    if (is_word("WHERE")) next();
    group_graph_pattern();
    if (is_word("GROUP")) {
      next();
      expect_word("BY");
      if (cur().kind != Tok::Var) fail("expected variable after GROUP BY");
      while (cur().kind == Tok::Var) q_.group_by.push_back(use_var(next().text));
    }
    if (cur().kind != Tok::End) fail("unexpected '" + cur().text + "' after query");
    check();
    return std::move(q_);
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  const Token& next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

  [[noreturn]] void fail(const std::string& what) const {
    throw QueryError(what, cur().line, cur().column);
  }

  bool is_word(std::string_view w) const { return cur().kind == Tok::Word && iequals(cur().text, w); }
  bool is_punct(std::string_view p) const { return cur().kind == Tok::Punct && cur().text == p; }

  void expect_word(std::string_view w) {
    if (!is_word(w)) fail("expected " + std::string(w));
    next();
  }
  void expect_punct(std::string_view p) {
    if (!is_punct(p)) {
      fail("expected '" + std::string(p) + "'" +
           (cur().kind == Tok::End ? " before end of query" : ", found '" + cur().text + "'"));
    }
    next();
  }

  VarId var_id(const std::string& name, bool hidden = false) {
    for (VarId i = 0; i < q_.variables.size(); ++i) {
      if (q_.variables[i].name == name) return i;
    }
    q_.variables.push_back(Variable{name, false, hidden});
    return static_cast<VarId>(q_.variables.size() - 1);
  }

  // Variables mentioned outside patterns must be declared by a pattern;
  // they are collected here and checked at the end.
  VarId use_var(const std::string& name) {
    VarId id = var_id(name);
    referenced_.emplace_back(id, cur_pos());
    return id;
  }

  std::pair<std::size_t, std::size_t> cur_pos() const {
    const Token& t = toks_[i_ == 0 ? 0 : i_ - 1];
    return {t.line, t.column};
  }

  void prologue() {
    for (;;) {
      if (is_word("PREFIX")) {
        next();
        if (cur().kind != Tok::PName || cur().text.back() != ':' ||
            cur().text.find(':') != cur().text.size() - 1) {
          fail("expected prefix name ending in ':'");
        }
        std::string prefix = next().text;
        prefix.pop_back();
        if (cur().kind != Tok::Iri) fail("expected IRI for prefix '" + prefix + "'");
        q_.prefixes[prefix] = next().text;
      } else if (is_word("BASE")) {
        fail("BASE is not supported");
      } else {
        return;
      }
    }
  }

  void select_clause() {
    expect_word("SELECT");
    if (is_word("DISTINCT")) {
      next();
      q_.distinct = true;
    }
    if (is_punct("*")) {
      next();
      select_all_ = true;
      return;
    }
    for (;;) {
      if (cur().kind == Tok::Var) {
        std::string name = cur().text;
        VarId id = use_var(next().text);
        q_.projections.push_back(Projection{name, id});
      } else if (is_punct("(")) {
        next();
        Aggregate agg = aggregate();
        expect_word("AS");
        if (cur().kind != Tok::Var) fail("expected variable after AS");
        aliases_.emplace_back(cur().text, std::make_pair(cur().line, cur().column));
        q_.projections.push_back(Projection{next().text, agg});
        expect_punct(")");
      } else {
        break;
      }
    }
    if (q_.projections.empty()) fail("SELECT needs '*', a variable or an aggregate");
  }

  Aggregate aggregate() {
    Aggregate agg;
    if (is_word("COUNT")) {
      agg.fn = Aggregate::Fn::Count;
    } else if (is_word("MIN")) {
      agg.fn = Aggregate::Fn::Min;
    } else if (is_word("MAX")) {
      agg.fn = Aggregate::Fn::Max;
    } else {
      fail("expected COUNT, MIN or MAX");
    }
    next();
    expect_punct("(");
    if (is_word("DISTINCT")) {
      next();
      agg.distinct = true;
    }
    if (is_punct("*")) {
      if (agg.fn != Aggregate::Fn::Count) fail("only COUNT accepts '*'");
      if (agg.distinct) fail("COUNT(DISTINCT *) is not supported");
      next();
    } else if (cur().kind == Tok::Var) {
      agg.arg = use_var(next().text);
    } else {
      fail("expected variable or '*' in aggregate");
    }
    expect_punct(")");
    return agg;
  }

  void group_graph_pattern() {
    expect_punct("{");
    for (;;) {
      if (is_punct("}")) {
        next();
        return;
      }
      if (is_punct(".")) {
        next();
        continue;
      }
      if (is_word("GRAPH")) {
        graph_block();
      } else if (is_word("FILTER")) {
        filter();
      } else if (is_word("OPTIONAL") || is_word("UNION") || is_word("MINUS") ||
                 is_word("BIND") || is_word("VALUES") || is_word("SERVICE")) {
        fail(cur().text + " is not supported");
      } else if (cur().kind == Tok::End) {
        fail("expected '}' before end of query");
      } else {
        triples_same_subject(DefaultGraph{});
      }
    }
  }

  void graph_block() {
    next();
    GraphName name;
    if (cur().kind == Tok::Var) {
      VarId id = var_id(next().text);
      q_.variables[id].version = true;
      name = id;
    } else if (cur().kind == Tok::Iri || cur().kind == Tok::PName) {
      Term iri = iri_term();
      name = VersionIri{iri, parse_version_iri(iri.value)};
    } else {
      fail("expected variable or IRI after GRAPH");
    }
    expect_punct("{");
    std::size_t before = q_.patterns.size();
    for (;;) {
      if (is_punct("}")) {
        next();
        break;
      }
      if (is_punct(".")) {
        next();
        continue;
      }
      if (is_word("FILTER")) {
        filter();
      } else if (is_word("GRAPH")) {
        fail("nested GRAPH blocks are not supported");
      } else if (cur().kind == Tok::End) {
        fail("expected '}' before end of query");
      } else {
        triples_same_subject(name);
      }
    }
    if (q_.patterns.size() == before) fail("GRAPH block has no triple patterns");
  }

  void triples_same_subject(const GraphName& graph) {
    Slot subject = slot();
    for (;;) {
      Slot verb = predicate();
      for (;;) {
        Slot object = slot();
        q_.patterns.push_back(TriplePattern{subject, verb, object, graph});
        if (!is_punct(",")) break;
        next();
      }
      if (!is_punct(";")) break;
      while (is_punct(";")) next();
      if (is_punct(".") || is_punct("}")) break;
    }
    if (is_punct(".")) {
      next();
    } else if (!is_punct("}")) {
      fail("expected '.', ';' or '}' after triple pattern, found '" + cur().text + "'");
    }
  }

  Slot predicate() {
    if (cur().kind == Tok::Word && cur().text == "a") {
      next();
      return Slot{Term::iri(std::string(rdf::kType))};
    }
    if (cur().kind == Tok::Var) return Slot{var_id(next().text)};
    if (cur().kind == Tok::Iri || cur().kind == Tok::PName) return Slot{iri_term()};
    fail("expected predicate");
  }

  Term iri_term() {
    if (cur().kind == Tok::Iri) return checked(Term::iri(next().text));
    const std::string& text = cur().text;
    auto colon = text.find(':');
    auto prefix = text.substr(0, colon);
    auto it = q_.prefixes.find(prefix);
    if (it == q_.prefixes.end()) fail("unknown prefix '" + prefix + ":'");
    std::string iri = it->second + text.substr(colon + 1);
    next();
    return checked(Term::iri(std::move(iri)));
  }

  Term checked(Term t) {
    try {
      validate(t);
    } catch (const ValidationError& e) {
      throw QueryError(e.what(), cur_pos().first, cur_pos().second);
    }
    return t;
  }

  Term literal() {
    if (cur().kind == Tok::String) {
      std::string lex = next().text;
      if (cur().kind == Tok::LangTag) return checked(Term::lang_literal(lex, next().text));
      if (is_punct("^^")) {
        next();
        if (cur().kind != Tok::Iri && cur().kind != Tok::PName) fail("expected datatype IRI");
        return checked(Term::literal(lex, iri_term().value));
      }
      return Term::literal(lex);
    }
    if (cur().kind == Tok::Integer) return Term::literal(next().text, std::string(xsd::kInteger));
    if (cur().kind == Tok::Decimal) return Term::literal(next().text, std::string(xsd::kDecimal));
    if (cur().kind == Tok::Double) return Term::literal(next().text, std::string(xsd::kDouble));
    if (is_word("true") || is_word("false")) {
      std::string v = next().text;
      std::transform(v.begin(), v.end(), v.begin(), [](char c) { return std::tolower(c); });
      return Term::literal(v, std::string(xsd::kBoolean));
    }
    fail("expected term, found '" + cur().text + "'");
  }

  Slot slot() {
    if (cur().kind == Tok::Var) return Slot{var_id(next().text)};
    if (cur().kind == Tok::Iri || cur().kind == Tok::PName) return Slot{iri_term()};
    if (cur().kind == Tok::Blank) return Slot{var_id("_:" + next().text, true)};
    if (is_punct("[")) {
      next();
      expect_punct("]");
      return Slot{var_id("_:anon" + std::to_string(anon_++), true)};
    }
    return Slot{literal()};
  }

  // FILTER constraints apply to the whole group regardless of position.
  void filter() {
    next();
    expect_punct("(");
    Expr e = or_expr();
    expect_punct(")");
    q_.filters.push_back(std::move(e));
  }

  Expr or_expr() {
    Expr lhs = and_expr();
    while (is_punct("||")) {
      next();
      Expr e;
      e.kind = Expr::Kind::Or;
      e.args.push_back(std::move(lhs));
      e.args.push_back(and_expr());
      lhs = std::move(e);
    }
    return lhs;
  }

  Expr and_expr() {
    Expr lhs = unary_expr();
    while (is_punct("&&")) {
      next();
      Expr e;
      e.kind = Expr::Kind::And;
      e.args.push_back(std::move(lhs));
      e.args.push_back(unary_expr());
      lhs = std::move(e);
    }
    return lhs;
  }

  Expr unary_expr() {
    if (is_punct("!")) {
      next();
      Expr e;
      e.kind = Expr::Kind::Not;
      e.args.push_back(unary_expr());
      return e;
    }
    if (is_punct("(")) {
      next();
      Expr e = or_expr();
      expect_punct(")");
      return e;
    }
    if (is_word("isHead")) {
      next();
      expect_punct("(");
      if (cur().kind != Tok::Var) fail("isHead expects a version variable");
      Expr e;
      e.kind = Expr::Kind::IsHead;
      e.var = use_var(cur().text);
      is_head_args_.emplace_back(e.var, std::make_pair(cur().line, cur().column));
      next();
      expect_punct(")");
      return e;
    }
    Slot lhs = operand();
    static const std::pair<std::string_view, CompareOp> ops[] = {
        {"=", CompareOp::Eq}, {"!=", CompareOp::Ne}, {"<", CompareOp::Lt},
        {"<=", CompareOp::Le}, {">", CompareOp::Gt}, {">=", CompareOp::Ge}};
    for (const auto& [text, op] : ops) {
      if (is_punct(text)) {
        next();
        Expr e;
        e.kind = Expr::Kind::Compare;
        e.op = op;
        e.operands.push_back(std::move(lhs));
        e.operands.push_back(operand());
        return e;
      }
    }
    if (!lhs.is_var() && lhs.term().datatype == xsd::kBoolean &&
        (lhs.term().value == "true" || lhs.term().value == "false")) {
      Expr e;
      e.kind = Expr::Kind::Constant;
      e.constant = lhs.term().value == "true";
      return e;
    }
    fail("expected comparison operator");
  }

  Slot operand() {
    if (cur().kind == Tok::Var) {
      auto pos = std::make_pair(cur().line, cur().column);
      VarId id = use_var(next().text);
      data_operands_.emplace_back(id, pos);
      return Slot{id};
    }
    if (cur().kind == Tok::Iri || cur().kind == Tok::PName) return Slot{iri_term()};
    return Slot{literal()};
  }

  void check() {
    std::set<VarId> in_patterns;
    for (const TriplePattern& tp : q_.patterns) {
      for (const Slot* s : {&tp.s, &tp.p, &tp.o}) {
        if (!s->is_var()) continue;
        if (q_.variables[s->var()].version) {
          throw QueryError("version variable ?" + q_.variables[s->var()].name +
                           " is used as a data variable");
        }
        in_patterns.insert(s->var());
      }
      if (const VarId* g = std::get_if<VarId>(&tp.graph)) in_patterns.insert(*g);
    }
    for (const auto& [id, pos] : referenced_) {
      if (!in_patterns.contains(id)) {
        throw QueryError("variable ?" + q_.variables[id].name + " does not occur in any pattern",
                         pos.first, pos.second);
      }
    }
    for (const auto& [id, pos] : data_operands_) {
      if (q_.variables[id].version) {
        throw QueryError("version variable ?" + q_.variables[id].name +
                             " can only be tested with isHead()",
                         pos.first, pos.second);
      }
    }
    for (const auto& [id, pos] : is_head_args_) {
      if (!q_.variables[id].version) {
        throw QueryError("isHead() argument ?" + q_.variables[id].name +
                             " is not a version variable",
                         pos.first, pos.second);
      }
    }
    for (const Expr& f : q_.filters) {
      std::set<VarId> vv;
      collect_is_head(f, vv);
      if (vv.size() > 1) {
        throw QueryError("a FILTER may test at most one version variable");
      }
    }
    for (const auto& [name, pos] : aliases_) {
      for (const Variable& v : q_.variables) {
        if (v.name == name) {
          throw QueryError("alias ?" + name + " is already a variable", pos.first, pos.second);
        }
      }
    }
    if (select_all_) {
      if (!q_.group_by.empty()) throw QueryError("SELECT * cannot be combined with GROUP BY");
      for (VarId i = 0; i < q_.variables.size(); ++i) {
        if (!q_.variables[i].hidden) q_.projections.push_back(Projection{q_.variables[i].name, i});
      }
    }
    if (q_.has_aggregates() || !q_.group_by.empty()) {
      for (const Projection& p : q_.projections) {
        const VarId* id = std::get_if<VarId>(&p.value);
        if (id && std::find(q_.group_by.begin(), q_.group_by.end(), *id) == q_.group_by.end()) {
          throw QueryError("?" + p.name + " must appear in GROUP BY or inside an aggregate");
        }
      }
    }
    std::set<std::string> names;
    for (const Projection& p : q_.projections) {
      if (!names.insert(p.name).second) throw QueryError("?" + p.name + " is projected twice");
    }
  }

  static void collect_is_head(const Expr& e, std::set<VarId>& out) {
    if (e.kind == Expr::Kind::IsHead) out.insert(e.var);
    for (const Expr& a : e.args) collect_is_head(a, out);
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  Query q_;
  bool select_all_ = false;
  std::size_t anon_ = 0;
  std::vector<std::pair<VarId, std::pair<std::size_t, std::size_t>>> referenced_;
  std::vector<std::pair<VarId, std::pair<std::size_t, std::size_t>>> data_operands_;
  std::vector<std::pair<VarId, std::pair<std::size_t, std::size_t>>> is_head_args_;
  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> aliases_;
};

}  // namespace

Query parse_query(std::string_view text) { return Parser(Lexer(text).run()).run(); }

}  // namespace vg::query
