#ifndef SEPL_POLICY_HPP
#define SEPL_POLICY_HPP

// Policy abstract syntax, structural equality, printing with minimal
// parentheses, and a recursive-descent parser for the concrete syntax:
//
//   policy := sum
//   sum    := prio (('+' | '-' | '(-)') prio)*      left associative
//   prio   := par (('pov' | 'dov') par)*            left associative
//   par    := seq ('&&' seq)*                       left associative
//   seq    := unary ('.' unary)*                    left associative
//   unary  := '~' unary | 'det' unary | scoped
//   scoped := guard ':' unary | atom
//   atom   := 'eps' | '0' | '1' | '<' guard ',' guard '>' | '(' policy ')'
//   guard  := 'none' | box ('or' box)*
//   box    := '{' [constraint (',' constraint)*] '}'
//   constraint := key 'in' '{' value (',' value)* '}'
//               | key ('=' | '!=' | '<' | '<=' | '>' | '>=') value
//
// Inside braces, words may contain '.', '-', '/', '@' (attribute keys and
// values such as resource.resource-id or secret.txt); outside braces '.'
// sequences policies and '-' subtracts them. '#' starts a line comment.

#include <cctype>
#include <memory>
#include <string>
#include <vector>

#include "sepl/error.hpp"
#include "sepl/guard.hpp"
#include "sepl/schema.hpp"

namespace sepl {

enum class PolicyOp {
  Empty,  // eps: silent on everything
  Zero,   // 0: denies everything
  One,    // 1: permits everything
  Rule,   // <accept-guard, deny-guard>
  Neg,    // ~P: swap accept and deny
  Det,    // det P: collapse unknown to definite inapplicability
  Scope,  // g: P — restrict P to requests matching g
  Seq,    // P . Q — Q fills in where P is silent
  Pov,    // P pov Q — permit overrides deny
  Dov,    // P dov Q — deny overrides permit
  Par,    // P && Q — agreement of both
  Choice, // P + Q — union minus disagreement
  Minus,  // P - Q — P where Q is fully silent
  Ominus, // P (-) Q — as '-' but degrading to unknown where Q may speak
};

struct Policy;
using PolicyPtr = std::shared_ptr<const Policy>;

struct Policy {
  PolicyOp op;
  Guard g1, g2;    // Rule guards; Scope uses g1
  PolicyPtr a, b;  // children
};

inline PolicyPtr empty_policy() { return std::make_shared<Policy>(Policy{PolicyOp::Empty, {}, {}, nullptr, nullptr}); }
inline PolicyPtr zero_policy() { return std::make_shared<Policy>(Policy{PolicyOp::Zero, {}, {}, nullptr, nullptr}); }
inline PolicyPtr one_policy() { return std::make_shared<Policy>(Policy{PolicyOp::One, {}, {}, nullptr, nullptr}); }

inline PolicyPtr rule(Guard accept, Guard deny) {
  return std::make_shared<Policy>(
      Policy{PolicyOp::Rule, std::move(accept), std::move(deny), nullptr, nullptr});
}

inline PolicyPtr neg(PolicyPtr p) {
  return std::make_shared<Policy>(Policy{PolicyOp::Neg, {}, {}, std::move(p), nullptr});
}

inline PolicyPtr det(PolicyPtr p) {
  return std::make_shared<Policy>(Policy{PolicyOp::Det, {}, {}, std::move(p), nullptr});
}

inline PolicyPtr scope(Guard g, PolicyPtr p) {
  return std::make_shared<Policy>(
      Policy{PolicyOp::Scope, std::move(g), {}, std::move(p), nullptr});
}

inline PolicyPtr binary(PolicyOp op, PolicyPtr l, PolicyPtr r) {
  return std::make_shared<Policy>(Policy{op, {}, {}, std::move(l), std::move(r)});
}

inline PolicyPtr seq(PolicyPtr l, PolicyPtr r) { return binary(PolicyOp::Seq, std::move(l), std::move(r)); }
inline PolicyPtr pov(PolicyPtr l, PolicyPtr r) { return binary(PolicyOp::Pov, std::move(l), std::move(r)); }
inline PolicyPtr dov(PolicyPtr l, PolicyPtr r) { return binary(PolicyOp::Dov, std::move(l), std::move(r)); }
inline PolicyPtr par(PolicyPtr l, PolicyPtr r) { return binary(PolicyOp::Par, std::move(l), std::move(r)); }
inline PolicyPtr choice(PolicyPtr l, PolicyPtr r) { return binary(PolicyOp::Choice, std::move(l), std::move(r)); }
inline PolicyPtr minus(PolicyPtr l, PolicyPtr r) { return binary(PolicyOp::Minus, std::move(l), std::move(r)); }
inline PolicyPtr ominus(PolicyPtr l, PolicyPtr r) { return binary(PolicyOp::Ominus, std::move(l), std::move(r)); }

inline bool policy_is_constant(PolicyOp op) {
  return op == PolicyOp::Empty || op == PolicyOp::Zero || op == PolicyOp::One;
}

inline bool policy_is_unary(PolicyOp op) {
  return op == PolicyOp::Neg || op == PolicyOp::Det || op == PolicyOp::Scope;
}

inline bool policy_is_binary(PolicyOp op) {
  switch (op) {
    case PolicyOp::Seq:
    case PolicyOp::Pov:
    case PolicyOp::Dov:
    case PolicyOp::Par:
    case PolicyOp::Choice:
    case PolicyOp::Minus:
    case PolicyOp::Ominus:
      return true;
    default:
      return false;
  }
}

inline bool policy_equal(const PolicyPtr& p, const PolicyPtr& q) {
  if (p == q) return true;
  if (!p || !q) return false;
  if (p->op != q->op || !(p->g1 == q->g1) || !(p->g2 == q->g2)) return false;
  return policy_equal(p->a, q->a) && policy_equal(p->b, q->b);
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline int precedence_level(PolicyOp op) {
  switch (op) {
    case PolicyOp::Empty:
    case PolicyOp::Zero:
    case PolicyOp::One:
    case PolicyOp::Rule:
      return 0;
    case PolicyOp::Neg:
    case PolicyOp::Det:
    case PolicyOp::Scope:
      return 1;
    case PolicyOp::Seq:
      return 2;
    case PolicyOp::Par:
      return 3;
    case PolicyOp::Pov:
    case PolicyOp::Dov:
      return 4;
    case PolicyOp::Choice:
    case PolicyOp::Minus:
    case PolicyOp::Ominus:
      return 5;
  }
  return 5;
}

inline const char* binary_token(PolicyOp op) {
  switch (op) {
    case PolicyOp::Seq: return " . ";
    case PolicyOp::Par: return " && ";
    case PolicyOp::Pov: return " pov ";
    case PolicyOp::Dov: return " dov ";
    case PolicyOp::Choice: return " + ";
    case PolicyOp::Minus: return " - ";
    case PolicyOp::Ominus: return " (-) ";
    default: return " ? ";
  }
}

inline void print_policy_rec(const PolicyPtr& p, std::string& out) {
  auto wrap = [&out](const PolicyPtr& child, bool parens) {
    if (parens) out += "(";
    print_policy_rec(child, out);
    if (parens) out += ")";
  };
  int level = precedence_level(p->op);
  switch (p->op) {
    case PolicyOp::Empty: out += "eps"; break;
    case PolicyOp::Zero: out += "0"; break;
    case PolicyOp::One: out += "1"; break;
    case PolicyOp::Rule:
      out += "<" + print_guard(p->g1) + ", " + print_guard(p->g2) + ">";
      break;
    case PolicyOp::Neg:
      out += "~";
      wrap(p->a, precedence_level(p->a->op) > level);
      break;
    case PolicyOp::Det:
      out += "det ";
      wrap(p->a, precedence_level(p->a->op) > level);
      break;
    case PolicyOp::Scope:
      out += print_guard(p->g1) + ": ";
      wrap(p->a, precedence_level(p->a->op) > level);
      break;
    default:
      wrap(p->a, precedence_level(p->a->op) > level);
      out += binary_token(p->op);
      wrap(p->b, precedence_level(p->b->op) >= level);
      break;
  }
}

}  // namespace detail

inline std::string print_policy(const PolicyPtr& p) {
  std::string out;
  detail::print_policy_rec(p, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

struct Token {
  enum Kind {
    LBrace, RBrace, LParen, RParen, LAngle, RAngle, LeOp, GeOp, EqOp, NeqOp,
    Comma, Colon, Plus, MinusTok, OminusTok, Tilde, Dot, AndAnd,
    KwOr, KwIn, KwNone, KwEps, KwDet, KwPov, KwDov, Word, End,
  };
  Kind kind;
  std::string text;
  int line, col;
};

inline bool word_start(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

inline bool word_char(char c, int depth) {
  if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') return true;
  if (depth > 0) return c == '.' || c == '-' || c == '/' || c == '@';
  return false;
}

inline std::vector<Token> lex_policy(const std::string& text,
                                     const std::string& filename) {
  std::vector<Token> tokens;
  int line = 1, col = 1;
  int depth = 0;
  std::size_t i = 0;
  auto push = [&](Token::Kind k, std::string t, int l, int c) {
    tokens.push_back({k, std::move(t), l, c});
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') { ++i; ++line; col = 1; continue; }
    if (c == ' ' || c == '\t' || c == '\r') { ++i; ++col; continue; }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    int tl = line, tc = col;
    // Multi-character operators first.
    if (c == '(' && depth == 0 && i + 2 < text.size() && text[i + 1] == '-' &&
        text[i + 2] == ')') {
      push(Token::OminusTok, "(-)", tl, tc);
      i += 3; col += 3;
      continue;
    }
    if (c == '&' && i + 1 < text.size() && text[i + 1] == '&') {
      push(Token::AndAnd, "&&", tl, tc);
      i += 2; col += 2;
      continue;
    }
    if (c == '!' && i + 1 < text.size() && text[i + 1] == '=') {
      push(Token::NeqOp, "!=", tl, tc);
      i += 2; col += 2;
      continue;
    }
    if (c == '<' && i + 1 < text.size() && text[i + 1] == '=') {
      push(Token::LeOp, "<=", tl, tc);
      i += 2; col += 2;
      continue;
    }
    if (c == '>' && i + 1 < text.size() && text[i + 1] == '=') {
      push(Token::GeOp, ">=", tl, tc);
      i += 2; col += 2;
      continue;
    }
    // Words; inside braces '-' may start a negative number.
    if (word_start(c) ||
        (depth > 0 && c == '-' && i + 1 < text.size() &&
         std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t start = i;
      ++i; ++col;
      while (i < text.size() && word_char(text[i], depth)) { ++i; ++col; }
      std::string w = text.substr(start, i - start);
      Token::Kind k = Token::Word;
      if (depth == 0) {
        if (w == "or") k = Token::KwOr;
        else if (w == "none") k = Token::KwNone;
        else if (w == "eps") k = Token::KwEps;
        else if (w == "det") k = Token::KwDet;
        else if (w == "pov") k = Token::KwPov;
        else if (w == "dov") k = Token::KwDov;
      } else if (w == "in") {
        k = Token::KwIn;
      }
      push(k, std::move(w), tl, tc);
      continue;
    }
    switch (c) {
      case '{': ++depth; push(Token::LBrace, "{", tl, tc); break;
      case '}': if (depth > 0) --depth; push(Token::RBrace, "}", tl, tc); break;
      case '(': push(Token::LParen, "(", tl, tc); break;
      case ')': push(Token::RParen, ")", tl, tc); break;
      case '<': push(Token::LAngle, "<", tl, tc); break;
      case '>': push(Token::RAngle, ">", tl, tc); break;
      case '=': push(Token::EqOp, "=", tl, tc); break;
      case ',': push(Token::Comma, ",", tl, tc); break;
      case ':': push(Token::Colon, ":", tl, tc); break;
      case '+': push(Token::Plus, "+", tl, tc); break;
      case '-': push(Token::MinusTok, "-", tl, tc); break;
      case '~': push(Token::Tilde, "~", tl, tc); break;
      case '.': push(Token::Dot, ".", tl, tc); break;
      default:
        throw Error(filename, tl, tc,
                    std::string("unexpected character '") + c + "'");
    }
    ++i; ++col;
  }
  tokens.push_back({Token::End, "", line, col});
  return tokens;
}

class PolicyParser {
 public:
  PolicyParser(std::vector<Token> tokens, const Schema& schema,
               std::string filename)
      : tokens_(std::move(tokens)), schema_(schema), filename_(std::move(filename)) {}

  PolicyPtr parse() {
    PolicyPtr p = sum();
    if (peek().kind != Token::End)
      fail(peek(), "unexpected input after policy");
    return p;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }

  bool accept(Token::Kind k) {
    if (peek().kind == k) { ++pos_; return true; }
    return false;
  }

  const Token& expect(Token::Kind k, const char* what) {
    if (peek().kind != k) fail(peek(), std::string("expected ") + what);
    return advance();
  }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    std::string found = t.kind == Token::End ? "end of input" : "'" + t.text + "'";
    throw Error(filename_, t.line, t.col, msg + ", found " + found);
  }

  PolicyPtr sum() {
    PolicyPtr l = prio();
    while (true) {
      if (accept(Token::Plus)) l = choice(l, prio());
      else if (accept(Token::MinusTok)) l = minus(l, prio());
      else if (accept(Token::OminusTok)) l = ominus(l, prio());
      else return l;
    }
  }

  PolicyPtr prio() {
    PolicyPtr l = par_level();
    while (true) {
      if (accept(Token::KwPov)) l = pov(l, par_level());
      else if (accept(Token::KwDov)) l = dov(l, par_level());
      else return l;
    }
  }

  PolicyPtr par_level() {
    PolicyPtr l = seq_level();
    while (accept(Token::AndAnd)) l = par(l, seq_level());
    return l;
  }

  PolicyPtr seq_level() {
    PolicyPtr l = unary();
    while (accept(Token::Dot)) l = seq(l, unary());
    return l;
  }

  PolicyPtr unary() {
    if (accept(Token::Tilde)) return neg(unary());
    if (accept(Token::KwDet)) return det(unary());
    return scoped();
  }

  PolicyPtr scoped() {
    if (peek().kind == Token::KwNone || peek().kind == Token::LBrace) {
      Guard g = guard();
      expect(Token::Colon, "':' after scope guard");
      return scope(std::move(g), unary());
    }
    return atom();
  }

  PolicyPtr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::KwEps:
        advance();
        return empty_policy();
      case Token::Word:
        if (t.text == "0") { advance(); return zero_policy(); }
        if (t.text == "1") { advance(); return one_policy(); }
        fail(t, "expected a policy");
      case Token::LAngle: {
        advance();
        Guard g1 = guard();
        expect(Token::Comma, "',' between rule guards");
        Guard g2 = guard();
        expect(Token::RAngle, "'>' closing the rule");
        return rule(std::move(g1), std::move(g2));
      }
      case Token::LParen: {
        advance();
        PolicyPtr p = sum();
        expect(Token::RParen, "')'");
        return p;
      }
      default:
        fail(t, "expected a policy");
    }
  }

  Guard guard() {
    if (accept(Token::KwNone)) return guard_bottom();
    Guard g;
    g.boxes.push_back(box());
    while (accept(Token::KwOr)) g.boxes.push_back(box());
    return g;
  }

  Box box() {
    expect(Token::LBrace, "'{'");
    Box b;
    if (accept(Token::RBrace)) return b;  // {} matches everything
    std::vector<std::size_t> seen;
    while (true) {
      b.atoms.push_back(constraint(seen));
      if (accept(Token::RBrace)) break;
      expect(Token::Comma, "',' or '}' in constraint list");
    }
    sort_box(schema_, b);
    return b;
  }

  Atom constraint(std::vector<std::size_t>& seen) {
    const Token& key_tok = expect(Token::Word, "an attribute name");
    auto ai = schema_.find_attribute(key_tok.text);
    if (!ai) fail(key_tok, "unknown attribute '" + key_tok.text + "'");
    for (std::size_t s : seen)
      if (s == *ai)
        fail(key_tok, "attribute '" + key_tok.text + "' constrained twice in one box");
    seen.push_back(*ai);
    const Attribute& attr = schema_.attribute(*ai);

    Atom atom;
    atom.key = key_tok.text;
    const Token& op = advance();
    switch (op.kind) {
      case Token::KwIn: {
        expect(Token::LBrace, "'{' starting a value set");
        atom.pred = AtomPred::InSet;
        std::vector<bool> set(attr.size(), false);
        while (true) {
          const Token& v = expect(Token::Word, "a value");
          auto idx = attr.find_value(v.text);
          if (!idx)
            fail(v, "value '" + v.text + "' is outside the domain of '" +
                        atom.key + "'");
          set[*idx] = true;
          if (accept(Token::RBrace)) break;
          expect(Token::Comma, "',' or '}' in value set");
        }
        for (std::size_t i = 0; i < set.size(); ++i)
          if (set[i]) atom.values.push_back(attr.value_name(i));
        return atom;
      }
      case Token::EqOp:
      case Token::NeqOp: {
        const Token& v = expect(Token::Word, "a value");
        auto idx = attr.find_value(v.text);
        if (!idx)
          fail(v, "value '" + v.text + "' is outside the domain of '" +
                      atom.key + "'");
        atom.pred = op.kind == Token::EqOp ? AtomPred::Eq : AtomPred::Neq;
        atom.value = attr.value_name(*idx);
        return atom;
      }
      case Token::LAngle:
      case Token::RAngle:
      case Token::LeOp:
      case Token::GeOp: {
        if (attr.kind != AttrKind::Int)
          fail(op, "ordered comparison on enum attribute '" + atom.key + "'");
        const Token& v = expect(Token::Word, "an integer");
        long bound;
        if (!parse_long(v.text, bound))
          fail(v, "comparison value '" + v.text + "' is not an integer");
        atom.pred = op.kind == Token::LAngle  ? AtomPred::Lt
                    : op.kind == Token::RAngle ? AtomPred::Gt
                    : op.kind == Token::LeOp   ? AtomPred::Le
                                               : AtomPred::Ge;
        atom.value = std::to_string(bound);
        return atom;
      }
      default:
        fail(op, "expected 'in' or a comparison operator");
    }
  }

  std::vector<Token> tokens_;
  const Schema& schema_;
  std::string filename_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline PolicyPtr parse_policy(const std::string& text, const Schema& schema,
                              const std::string& filename = "<policy>") {
  detail::PolicyParser parser(detail::lex_policy(text, filename), schema, filename);
  return parser.parse();
}

}  // namespace sepl

#endif  // SEPL_POLICY_HPP
