#ifndef SEPL_TRIVALUE_HPP
#define SEPL_TRIVALUE_HPP

// Three-valued logic kernel: truth values, Kleene connectives, the
// guarded-difference connective, and the accept/deny decision lattice.

#include <cstdint>
#include <string>

namespace sepl {

// Ordered so that conjunction is min and disjunction is max.
enum class Tri : std::uint8_t { F = 0, U = 1, T = 2 };

constexpr Tri tri_not(Tri a) {
  switch (a) {
    case Tri::T: return Tri::F;
    case Tri::F: return Tri::T;
    default: return Tri::U;
  }
}

constexpr Tri tri_and(Tri a, Tri b) { return a < b ? a : b; }
constexpr Tri tri_or(Tri a, Tri b) { return a < b ? b : a; }

// a and not b.
constexpr Tri tri_minus(Tri a, Tri b) { return tri_and(a, tri_not(b)); }

// Guarded difference: definite only when the left side is False or the
// right side is definitely absent; a True left side with a possible right
// side degrades to Unknown instead of False.
constexpr Tri tri_ominus(Tri a, Tri b) {
  if (a == Tri::F) return Tri::F;
  if (a == Tri::U) return Tri::U;
  return b == Tri::F ? Tri::T : Tri::U;
}

// Collapse Unknown pessimistically / optimistically.
constexpr Tri tri_det(Tri a) { return a == Tri::U ? Tri::F : a; }
constexpr Tri tri_det_dual(Tri a) { return a == Tri::U ? Tri::T : a; }

constexpr char tri_char(Tri a) {
  return a == Tri::T ? 'T' : (a == Tri::F ? 'F' : '?');
}

// Accept/deny pair produced by evaluating a policy against one request.
struct DecisionPair {
  Tri accept = Tri::F;
  Tri deny = Tri::F;
  friend constexpr bool operator==(const DecisionPair&, const DecisionPair&) = default;
};

inline std::string pair_text(const DecisionPair& p) {
  std::string s = "(";
  s += tri_char(p.accept);
  s += ",";
  s += tri_char(p.deny);
  s += ")";
  return s;
}

enum class Decision {
  Permit,
  Deny,
  NotApplicable,
  IndeterminateP,
  IndeterminateD,
  IndeterminatePD,
  Conflict,
};

// Collapse an accept/deny pair to a single decision. A True side wins over
// an Unknown opposite side; two True sides are a conflict (never produced
// by the policy grammar, kept as a defensive outcome).
constexpr Decision classify(const DecisionPair& p) {
  if (p.accept == Tri::T && p.deny == Tri::T) return Decision::Conflict;
  if (p.accept == Tri::T) return Decision::Permit;
  if (p.deny == Tri::T) return Decision::Deny;
  if (p.accept == Tri::U && p.deny == Tri::U) return Decision::IndeterminatePD;
  if (p.accept == Tri::U) return Decision::IndeterminateP;
  if (p.deny == Tri::U) return Decision::IndeterminateD;
  return Decision::NotApplicable;
}

constexpr const char* decision_token(Decision d) {
  switch (d) {
    case Decision::Permit: return "PERMIT";
    case Decision::Deny: return "DENY";
    case Decision::NotApplicable: return "NOT_APPLICABLE";
    case Decision::IndeterminateP: return "INDETERMINATE_P";
    case Decision::IndeterminateD: return "INDETERMINATE_D";
    case Decision::IndeterminatePD: return "INDETERMINATE_PD";
    case Decision::Conflict: return "CONFLICT";
  }
  return "UNKNOWN";
}

}  // namespace sepl

#endif  // SEPL_TRIVALUE_HPP
