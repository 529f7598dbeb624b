#pragma once

#include <cctype>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "specmine/errors.hpp"

namespace specmine {

enum class Connective { Atom, Not, And, Or, Implies, Always, Eventually };

/// `G` and `F` are operators in the concrete syntax, never atoms.
inline bool is_reserved_word(std::string_view s) { return s == "G" || s == "F"; }

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = [](unsigned char c) { return std::isalpha(c) || c == '_'; };
  auto tail = [](unsigned char c) { return std::isalnum(c) || c == '_'; };
  if (!head(static_cast<unsigned char>(s[0]))) return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!tail(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

/// Immutable formula of the temporal fragment order: atoms, !, &, |, ->,
/// G (always) and F (eventually). Values are cheap to copy (shared nodes)
/// and safe to share across threads.
class Formula {
 public:
  Formula() = default;

  static Formula atom(std::string name) {
    if (!is_identifier(name))
      throw Error("invalid atom name: '" + name + "'");
    if (is_reserved_word(name))
      throw Error("'" + name + "' is a reserved word, not an atom");
    return Formula(Connective::Atom, std::move(name), {});
  }

  Connective kind() const { return node_->kind; }
  const std::string& atom_name() const { return node_->name; }
  const Formula& child(std::size_t i) const { return node_->kids[i]; }
  std::size_t arity() const { return node_->kids.size(); }
  const Formula& body() const { return node_->kids[0]; }
  const Formula& lhs() const { return node_->kids[0]; }
  const Formula& rhs() const { return node_->kids[1]; }

  bool valid() const { return node_ != nullptr; }
  bool is_atom() const { return node_->kind == Connective::Atom; }
  bool is_literal() const {
    return is_atom() || (node_->kind == Connective::Not && body().is_atom());
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (!a.node_ || !b.node_) return false;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Connective::Atom: return a.atom_name() == b.atom_name();
      case Connective::Not:
      case Connective::Always:
      case Connective::Eventually: return a.body() == b.body();
      default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
  }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

  friend Formula neg(Formula f);
  friend Formula conj(Formula a, Formula b);
  friend Formula disj(Formula a, Formula b);
  friend Formula implies(Formula a, Formula b);
  friend Formula always(Formula f);
  friend Formula eventually(Formula f);

 private:
  struct Node {
    Connective kind;
    std::string name;
    std::vector<Formula> kids;
  };

  Formula(Connective k, std::string name, std::vector<Formula> kids)
      : node_(std::make_shared<const Node>(
            Node{k, std::move(name), std::move(kids)})) {}

  std::shared_ptr<const Node> node_;
};

inline Formula neg(Formula f) {
  return Formula(Connective::Not, {}, {std::move(f)});
}
inline Formula conj(Formula a, Formula b) {
  return Formula(Connective::And, {}, {std::move(a), std::move(b)});
}
inline Formula disj(Formula a, Formula b) {
  return Formula(Connective::Or, {}, {std::move(a), std::move(b)});
}
inline Formula implies(Formula a, Formula b) {
  return Formula(Connective::Implies, {}, {std::move(a), std::move(b)});
}
inline Formula always(Formula f) {
  return Formula(Connective::Always, {}, {std::move(f)});
}
inline Formula eventually(Formula f) {
  return Formula(Connective::Eventually, {}, {std::move(f)});
}

// ---------------------------------------------------------------------------
// Rendering. Canonical text, parenthesized only where precedence requires.
// Precedence, tightest first: ! G F (prefix), &, |, -> (right-associative).
// ---------------------------------------------------------------------------

namespace detail {

inline int precedence(Connective k) {
  switch (k) {
    case Connective::Implies: return 1;
    case Connective::Or: return 2;
    case Connective::And: return 3;
    default: return 4;  // prefix operators and atoms
  }
}

inline void render_to(const Formula& f, std::string& out, int min_prec) {
  const int prec = precedence(f.kind());
  const bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (f.kind()) {
    case Connective::Atom:
      out += f.atom_name();
      break;
    case Connective::Not:
      out += '!';
      render_to(f.body(), out, 4);
      break;
    case Connective::Always:
      out += "G ";
      render_to(f.body(), out, 4);
      break;
    case Connective::Eventually:
      out += "F ";
      render_to(f.body(), out, 4);
      break;
    case Connective::And:
      render_to(f.lhs(), out, 3);
      out += " & ";
      render_to(f.rhs(), out, 4);  // right-nested & needs parens
      break;
    case Connective::Or:
      render_to(f.lhs(), out, 2);
      out += " | ";
      render_to(f.rhs(), out, 3);
      break;
    case Connective::Implies:
      render_to(f.lhs(), out, 2);  // -> is right-associative
      out += " -> ";
      render_to(f.rhs(), out, 1);
      break;
  }
  if (parens) out += ')';
}

}  // namespace detail

inline std::string render(const Formula& f) {
  std::string out;
  detail::render_to(f, out, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing. Grammar:
//   formula := imp
//   imp     := or ("->" imp)?
//   or      := and ("|" and)*
//   and     := unary ("&" unary)*
//   unary   := "!" unary | "G" unary | "F" unary | atom | "(" formula ")"
//   atom    := [A-Za-z_][A-Za-z0-9_]*         (G and F are reserved)
// ---------------------------------------------------------------------------

namespace detail {

struct Token {
  enum Kind { Ident, Bang, Amp, Pipe, Arrow, LParen, RParen, End } kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      consume();
    const int line = line_;
    const int col = col_;
    if (pos_ >= text_.size()) {
      current_ = {Token::End, "", line, col};
      return;
    }
    const char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string ident;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ident += text_[pos_];
        consume();
      }
      current_ = {Token::Ident, std::move(ident), line, col};
      return;
    }
    switch (c) {
      case '!': consume(); current_ = {Token::Bang, "!", line, col}; return;
      case '&': consume(); current_ = {Token::Amp, "&", line, col}; return;
      case '|': consume(); current_ = {Token::Pipe, "|", line, col}; return;
      case '(': consume(); current_ = {Token::LParen, "(", line, col}; return;
      case ')': consume(); current_ = {Token::RParen, ")", line, col}; return;
      case '-':
        consume();
        if (pos_ < text_.size() && text_[pos_] == '>') {
          consume();
          current_ = {Token::Arrow, "->", line, col};
          return;
        }
        throw ParseError("unknown token '-', expected '->'", line, col);
      default:
        throw ParseError(std::string("unknown token '") + c + "'", line, col);
    }
  }

  void consume() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token current_{Token::End, "", 1, 1};
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  Formula parse() {
    Formula f = parse_imp();
    const Token& t = lex_.peek();
    if (t.kind != Token::End)
      throw ParseError("unexpected token '" + t.text + "'", t.line, t.column);
    return f;
  }

 private:
  Formula parse_imp() {
    Formula lhs = parse_or();
    if (lex_.peek().kind == Token::Arrow) {
      lex_.take();
      return implies(std::move(lhs), parse_imp());
    }
    return lhs;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (lex_.peek().kind == Token::Pipe) {
      lex_.take();
      f = disj(std::move(f), parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (lex_.peek().kind == Token::Amp) {
      lex_.take();
      f = conj(std::move(f), parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    const Token t = lex_.take();
    switch (t.kind) {
      case Token::Bang: return neg(parse_unary());
      case Token::Ident:
        if (t.text == "G") return always(parse_unary());
        if (t.text == "F") return eventually(parse_unary());
        return Formula::atom(t.text);
      case Token::LParen: {
        Formula f = parse_imp();
        const Token r = lex_.take();
        if (r.kind != Token::RParen)
          throw ParseError("expected ')', got '" +
                               (r.kind == Token::End ? "end of input" : r.text) +
                               "'",
                           r.line, r.column);
        return f;
      }
      case Token::End:
        throw ParseError("unexpected end of input", t.line, t.column);
      default:
        throw ParseError("unexpected token '" + t.text + "'", t.line, t.column);
    }
  }

  Lexer lex_;
};

}  // namespace detail

inline Formula parse(std::string_view text) {
  return detail::Parser(text).parse();
}

// ---------------------------------------------------------------------------
// Structural queries.
// ---------------------------------------------------------------------------

inline bool contains_temporal(const Formula& f) {
  switch (f.kind()) {
    case Connective::Always:
    case Connective::Eventually: return true;
    case Connective::Atom: return false;
    case Connective::Not: return contains_temporal(f.body());
    default: return contains_temporal(f.lhs()) || contains_temporal(f.rhs());
  }
}

inline void collect_atoms(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Connective::Atom: out.insert(f.atom_name()); break;
    case Connective::Not:
    case Connective::Always:
    case Connective::Eventually: collect_atoms(f.body(), out); break;
    default:
      collect_atoms(f.lhs(), out);
      collect_atoms(f.rhs(), out);
  }
}

inline std::set<std::string> atoms(const Formula& f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return out;
}

/// Number of F-operator occurrences, at any depth.
inline int count_eventualities(const Formula& f) {
  switch (f.kind()) {
    case Connective::Atom: return 0;
    case Connective::Not: return count_eventualities(f.body());
    case Connective::Always: return count_eventualities(f.body());
    case Connective::Eventually: return 1 + count_eventualities(f.body());
    default:
      return count_eventualities(f.lhs()) + count_eventualities(f.rhs());
  }
}

/// Negation normal form: negations pushed down to atoms, G/F dualized.
/// Positive structure (including ->) is preserved.
inline Formula push_negation(const Formula& f) {
  switch (f.kind()) {
    case Connective::Atom: return f;
    case Connective::Not: {
      const Formula& x = f.body();
      switch (x.kind()) {
        case Connective::Atom: return f;
        case Connective::Not: return push_negation(x.body());
        case Connective::And:
          return disj(push_negation(neg(x.lhs())), push_negation(neg(x.rhs())));
        case Connective::Or:
          return conj(push_negation(neg(x.lhs())), push_negation(neg(x.rhs())));
        case Connective::Implies:
          return conj(push_negation(x.lhs()), push_negation(neg(x.rhs())));
        case Connective::Always:
          return eventually(push_negation(neg(x.body())));
        case Connective::Eventually:
          return always(push_negation(neg(x.body())));
      }
      return f;  // unreachable
    }
    case Connective::And:
      return conj(push_negation(f.lhs()), push_negation(f.rhs()));
    case Connective::Or:
      return disj(push_negation(f.lhs()), push_negation(f.rhs()));
    case Connective::Implies:
      return implies(push_negation(f.lhs()), push_negation(f.rhs()));
    case Connective::Always: return always(push_negation(f.body()));
    case Connective::Eventually: return eventually(push_negation(f.body()));
  }
  return f;  // unreachable
}

// ---------------------------------------------------------------------------
// Fragment membership. Accepted exactly: &, |, -> combinations of
// temporal-free formulas, G phi, F phi and G (phi -> F psi) with phi, psi
// temporal-free; negation only over temporal-free subformulas; antecedents
// of -> temporal-free (a temporal operator never occurs under an implicit
// or explicit negation).
// ---------------------------------------------------------------------------

struct FragmentResult {
  bool ok = true;
  std::optional<Formula> offender;
  std::string reason;
};

namespace detail {

inline std::optional<Formula> first_temporal(const Formula& f) {
  switch (f.kind()) {
    case Connective::Always:
    case Connective::Eventually: return f;
    case Connective::Atom: return std::nullopt;
    case Connective::Not: return first_temporal(f.body());
    default:
      if (auto t = first_temporal(f.lhs())) return t;
      return first_temporal(f.rhs());
  }
}

inline bool is_response_body(const Formula& b) {
  return b.kind() == Connective::Implies && !contains_temporal(b.lhs()) &&
         b.rhs().kind() == Connective::Eventually &&
         !contains_temporal(b.rhs().body());
}

}  // namespace detail

inline FragmentResult fragment_check(const Formula& f) {
  if (!contains_temporal(f)) return {};
  switch (f.kind()) {
    case Connective::Always: {
      const Formula& b = f.body();
      if (!contains_temporal(b) || detail::is_response_body(b)) return {};
      Formula offender = f;
      if (b.kind() == Connective::Always || b.kind() == Connective::Eventually) {
        if (auto t = detail::first_temporal(b.body()))
          offender = *t;
        else
          offender = b;
      } else if (auto t = detail::first_temporal(b)) {
        offender = *t;
      }
      return {false, offender,
              "temporal nesting under G beyond the response shape"};
    }
    case Connective::Eventually: {
      if (!contains_temporal(f.body())) return {};
      auto t = detail::first_temporal(f.body());
      return {false, t ? *t : f, "temporal operator nested under F"};
    }
    case Connective::Not: {
      auto t = detail::first_temporal(f.body());
      return {false, t ? *t : f, "negation over a temporal subformula"};
    }
    case Connective::Implies: {
      if (contains_temporal(f.lhs())) {
        auto t = detail::first_temporal(f.lhs());
        return {false, t ? *t : f.lhs(),
                "temporal operator on the left of ->"};
      }
      return fragment_check(f.rhs());
    }
    case Connective::And:
    case Connective::Or: {
      FragmentResult l = fragment_check(f.lhs());
      if (!l.ok) return l;
      return fragment_check(f.rhs());
    }
    case Connective::Atom: return {};
  }
  return {};  // unreachable
}

inline void require_fragment(const Formula& f) {
  FragmentResult r = fragment_check(f);
  if (!r.ok)
    throw FragmentError("formula outside the supported fragment: " + r.reason +
                        " at '" + render(*r.offender) + "'");
}

// ---------------------------------------------------------------------------
// Behavior patterns over events.
// ---------------------------------------------------------------------------

enum class PatternKind { Absence, Existence, Invariance, Response };

inline std::size_t pattern_arity(PatternKind k) {
  return k == PatternKind::Response ? 2 : 1;
}

struct Pattern {
  PatternKind kind;
  std::vector<Formula> args;

  static Pattern make(PatternKind kind, std::vector<Formula> args) {
    if (args.size() != pattern_arity(kind))
      throw Error("pattern arity mismatch: expected " +
                  std::to_string(pattern_arity(kind)) + " argument(s), got " +
                  std::to_string(args.size()));
    for (const Formula& a : args)
      if (contains_temporal(a))
        throw Error("pattern argument must be temporal-free: '" + render(a) +
                    "'");
    return Pattern{kind, std::move(args)};
  }

  Formula to_formula() const {
    switch (kind) {
      case PatternKind::Absence: return always(neg(args[0]));
      case PatternKind::Invariance: return always(args[0]);
      case PatternKind::Existence: return eventually(args[0]);
      case PatternKind::Response:
        return always(implies(args[0], eventually(args[1])));
    }
    return {};  // unreachable
  }
};

inline Formula make_pattern(PatternKind kind, std::vector<Formula> args) {
  return Pattern::make(kind, std::move(args)).to_formula();
}

}  // namespace specmine
