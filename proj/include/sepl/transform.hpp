#ifndef SEPL_TRANSFORM_HPP
#define SEPL_TRANSFORM_HPP

// Policy transformations:
//  - scope_expand: eliminate every scope node by pushing guards to the rules
//  - SetExpr and the region-expression -> policy construction
//  - desugar_core: rewrite to the {rule, ~, det, &&, +, (-)} core
//  - n-ary folds used by the combining algorithms

#include <memory>
#include <vector>

#include "sepl/error.hpp"
#include "sepl/guard.hpp"
#include "sepl/policy.hpp"

namespace sepl {

namespace detail {

// Push one scope guard through a scope-free policy body.
inline PolicyPtr push_scope(const Schema& schema, const Guard& g,
                            const PolicyPtr& p, const GuardLimits& limits) {
  switch (p->op) {
    case PolicyOp::Rule:
      return rule(guard_and(schema, g, p->g1, limits),
                  guard_and(schema, g, p->g2, limits));
    case PolicyOp::One:
      return rule(g, guard_bottom());
    case PolicyOp::Zero:
      return rule(guard_bottom(), g);
    case PolicyOp::Empty:
      return empty_policy();
    case PolicyOp::Neg:
      return neg(push_scope(schema, g, p->a, limits));
    case PolicyOp::Det:
      return det(push_scope(schema, g, p->a, limits));
    case PolicyOp::Scope:
      return push_scope(schema, guard_and(schema, g, p->g1, limits), p->a, limits);
    default:
      return binary(p->op, push_scope(schema, g, p->a, limits),
                    push_scope(schema, g, p->b, limits));
  }
}

}  // namespace detail

// Rewrite away every scope node; the result evaluates identically and
// contains no PolicyOp::Scope.
inline PolicyPtr scope_expand(const Schema& schema, const PolicyPtr& p,
                              const GuardLimits& limits = {}) {
  switch (p->op) {
    case PolicyOp::Empty:
    case PolicyOp::Zero:
    case PolicyOp::One:
    case PolicyOp::Rule:
      return p;
    case PolicyOp::Neg:
      return neg(scope_expand(schema, p->a, limits));
    case PolicyOp::Det:
      return det(scope_expand(schema, p->a, limits));
    case PolicyOp::Scope:
      return detail::push_scope(schema, p->g1,
                                scope_expand(schema, p->a, limits), limits);
    default:
      return binary(p->op, scope_expand(schema, p->a, limits),
                    scope_expand(schema, p->b, limits));
  }
}

// ---------------------------------------------------------------------------
// Region expressions over the accept/deny regions of two policies.

enum class SetOp {
  AcceptL,  // accept region of the left policy
  DenyL,    // deny region of the left policy
  AcceptR,  // accept region of the right policy
  DenyR,    // deny region of the right policy
  Union,
  Inter,
  Diff,
  Compl,
};

struct SetExpr;
using SetExprPtr = std::shared_ptr<const SetExpr>;

struct SetExpr {
  SetOp op;
  SetExprPtr a, b;
};

inline SetExprPtr set_leaf(SetOp op) {
  return std::make_shared<SetExpr>(SetExpr{op, nullptr, nullptr});
}
inline SetExprPtr set_union(SetExprPtr a, SetExprPtr b) {
  return std::make_shared<SetExpr>(SetExpr{SetOp::Union, std::move(a), std::move(b)});
}
inline SetExprPtr set_inter(SetExprPtr a, SetExprPtr b) {
  return std::make_shared<SetExpr>(SetExpr{SetOp::Inter, std::move(a), std::move(b)});
}
inline SetExprPtr set_diff(SetExprPtr a, SetExprPtr b) {
  return std::make_shared<SetExpr>(SetExpr{SetOp::Diff, std::move(a), std::move(b)});
}
inline SetExprPtr set_compl(SetExprPtr a) {
  return std::make_shared<SetExpr>(SetExpr{SetOp::Compl, std::move(a), nullptr});
}

// Build a policy whose accept region is exactly the set denoted by `expr`
// (and whose deny region is empty). `unit` is the always-permit policy to
// use; passing a core-form unit keeps the output in core form.
inline PolicyPtr set_expr_policy(const SetExprPtr& expr, const PolicyPtr& left,
                                 const PolicyPtr& right, const PolicyPtr& unit) {
  switch (expr->op) {
    case SetOp::AcceptL: return par(left, unit);
    case SetOp::DenyL: return par(neg(left), unit);
    case SetOp::AcceptR: return par(right, unit);
    case SetOp::DenyR: return par(neg(right), unit);
    case SetOp::Union:
      return choice(set_expr_policy(expr->a, left, right, unit),
                    set_expr_policy(expr->b, left, right, unit));
    case SetOp::Inter:
      return par(set_expr_policy(expr->a, left, right, unit),
                 set_expr_policy(expr->b, left, right, unit));
    case SetOp::Diff:
      return par(choice(set_expr_policy(expr->a, left, right, unit),
                        neg(set_expr_policy(expr->b, left, right, unit))),
                 unit);
    case SetOp::Compl:
      return choice(unit, neg(set_expr_policy(expr->a, left, right, unit)));
  }
  throw Error("malformed set expression");
}

// Policy with accept region f and deny region g (regions given as set
// expressions over the left/right policies' regions).
inline PolicyPtr regions_policy(const SetExprPtr& f, const SetExprPtr& g,
                                const PolicyPtr& left, const PolicyPtr& right,
                                const PolicyPtr& unit) {
  return choice(set_expr_policy(f, left, right, unit),
                neg(set_expr_policy(g, left, right, unit)));
}

// ---------------------------------------------------------------------------
// Desugaring to the core fragment {Rule, Neg, Det, Par, Choice, Ominus}.

namespace detail {

inline PolicyPtr desugar_rec(const Schema& schema, const PolicyPtr& p) {
  // Always-permit policy already in core form.
  auto unit = [] { return rule(guard_top(), guard_bottom()); };
  auto AL = [] { return set_leaf(SetOp::AcceptL); };
  auto DL = [] { return set_leaf(SetOp::DenyL); };
  auto AR = [] { return set_leaf(SetOp::AcceptR); };
  auto DR = [] { return set_leaf(SetOp::DenyR); };
  switch (p->op) {
    case PolicyOp::Empty:
      return rule(guard_bottom(), guard_bottom());
    case PolicyOp::Zero:
      return rule(guard_bottom(), guard_top());
    case PolicyOp::One:
      return rule(guard_top(), guard_bottom());
    case PolicyOp::Rule:
      return p;
    case PolicyOp::Neg:
      return neg(desugar_rec(schema, p->a));
    case PolicyOp::Det:
      return det(desugar_rec(schema, p->a));
    case PolicyOp::Par:
    case PolicyOp::Choice:
    case PolicyOp::Ominus:
      return binary(p->op, desugar_rec(schema, p->a), desugar_rec(schema, p->b));
    case PolicyOp::Minus: {
      PolicyPtr l = desugar_rec(schema, p->a), r = desugar_rec(schema, p->b);
      return regions_policy(set_diff(AL(), set_union(AR(), DR())),
                            set_diff(DL(), set_union(AR(), DR())), l, r, unit());
    }
    case PolicyOp::Seq: {
      PolicyPtr l = desugar_rec(schema, p->a), r = desugar_rec(schema, p->b);
      return regions_policy(set_union(AL(), set_diff(AR(), DL())),
                            set_union(DL(), set_diff(DR(), AL())), l, r, unit());
    }
    case PolicyOp::Pov: {
      PolicyPtr l = desugar_rec(schema, p->a), r = desugar_rec(schema, p->b);
      return regions_policy(set_union(AL(), AR()),
                            set_union(set_diff(DL(), AR()), set_diff(DR(), AL())),
                            l, r, unit());
    }
    case PolicyOp::Dov: {
      // Mirror of Pov with accept and deny exchanged.
      PolicyPtr l = desugar_rec(schema, p->a), r = desugar_rec(schema, p->b);
      return regions_policy(set_union(set_diff(AL(), DR()), set_diff(AR(), DL())),
                            set_union(DL(), DR()), l, r, unit());
    }
    case PolicyOp::Scope:
      throw Error("scope nodes must be expanded before desugaring");
  }
  throw Error("malformed policy");
}

}  // namespace detail

// Rewrite to the core fragment: output contains only Rule, Neg, Det, Par,
// Choice, and Ominus nodes, and denotes the same absolute regions.
inline PolicyPtr desugar_core(const Schema& schema, const PolicyPtr& p,
                              const GuardLimits& limits = {}) {
  return detail::desugar_rec(schema, scope_expand(schema, p, limits));
}

// ---------------------------------------------------------------------------
// N-ary folds for the combining algorithms.

inline PolicyPtr combine_nary(PolicyOp op, const std::vector<PolicyPtr>& children) {
  if (children.empty()) throw Error("combining over an empty policy list");
  PolicyPtr acc = children[0];
  for (std::size_t i = 1; i < children.size(); ++i)
    acc = binary(op, acc, children[i]);
  return acc;
}

// only-one-applicable: each child applies exactly when every other child is
// silent; any overlap or lone indeterminacy degrades the result.
inline PolicyPtr ooa_nary(const std::vector<PolicyPtr>& children) {
  if (children.empty()) throw Error("combining over an empty policy list");
  if (children.size() == 1) return children[0];
  std::vector<PolicyPtr> terms;
  terms.reserve(children.size());
  for (std::size_t j = 0; j < children.size(); ++j) {
    std::vector<PolicyPtr> rest;
    rest.reserve(children.size() - 1);
    for (std::size_t i = 0; i < children.size(); ++i)
      if (i != j) rest.push_back(children[i]);
    terms.push_back(ominus(children[j], combine_nary(PolicyOp::Choice, rest)));
  }
  return combine_nary(PolicyOp::Choice, terms);
}

}  // namespace sepl

#endif  // SEPL_TRANSFORM_HPP
