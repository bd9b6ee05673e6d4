#ifndef SEPL_SEMANTICS_HPP
#define SEPL_SEMANTICS_HPP

// Policy evaluation.
//  - eval_rel: one request (possibly with unknown attributes) -> accept/deny pair
//  - eval_abs: whole domain -> accept/deny regions over all fully bound points
// The two agree pointwise on fully bound requests.

#include <vector>

#include "sepl/error.hpp"
#include "sepl/guard.hpp"
#include "sepl/policy.hpp"
#include "sepl/schema.hpp"
#include "sepl/transform.hpp"
#include "sepl/trivalue.hpp"

namespace sepl {

inline DecisionPair constant_pair(PolicyOp op) {
  switch (op) {
    case PolicyOp::Zero: return {Tri::F, Tri::T};
    case PolicyOp::One: return {Tri::T, Tri::F};
    default: return {Tri::F, Tri::F};  // Empty
  }
}

// A rule accepts where its accept guard holds and its deny guard does not,
// and symmetrically for deny; simultaneous matches cancel out.
inline DecisionPair rule_pair(Tri m1, Tri m2) {
  return {tri_minus(m1, m2), tri_minus(m2, m1)};
}

inline DecisionPair apply_unary(PolicyOp op, const DecisionPair& e) {
  if (op == PolicyOp::Neg) return {e.deny, e.accept};
  return {tri_det(e.accept), tri_det(e.deny)};  // Det
}

// Composition table for the binary operators.
inline DecisionPair combine_pair(PolicyOp op, const DecisionPair& l,
                                 const DecisionPair& r) {
  const Tri a1 = l.accept, d1 = l.deny, a2 = r.accept, d2 = r.deny;
  switch (op) {
    case PolicyOp::Seq:
      return {tri_or(a1, tri_minus(a2, d1)), tri_or(d1, tri_minus(d2, a1))};
    case PolicyOp::Pov:
      return {tri_or(a1, a2), tri_or(tri_minus(d1, a2), tri_minus(d2, a1))};
    case PolicyOp::Dov:
      return {tri_or(tri_minus(a1, d2), tri_minus(a2, d1)), tri_or(d1, d2)};
    case PolicyOp::Par:
      return {tri_and(a1, a2), tri_and(d1, d2)};
    case PolicyOp::Choice: {
      Tri acc = tri_or(a1, a2), den = tri_or(d1, d2);
      return {tri_minus(acc, den), tri_minus(den, acc)};
    }
    case PolicyOp::Minus: {
      Tri speaks = tri_or(a2, d2);
      return {tri_minus(a1, speaks), tri_minus(d1, speaks)};
    }
    case PolicyOp::Ominus: {
      Tri speaks = tri_or(a2, d2);
      return {tri_ominus(a1, speaks), tri_ominus(d1, speaks)};
    }
    default:
      throw Error("not a binary policy operator");
  }
}

namespace detail {

inline bool contains_scope(const PolicyPtr& p) {
  if (!p) return false;
  if (p->op == PolicyOp::Scope) return true;
  return contains_scope(p->a) || contains_scope(p->b);
}

inline DecisionPair eval_rel_rec(const Schema& schema, const PolicyPtr& p,
                                 const Request& req) {
  switch (p->op) {
    case PolicyOp::Empty:
    case PolicyOp::Zero:
    case PolicyOp::One:
      return constant_pair(p->op);
    case PolicyOp::Rule:
      return rule_pair(guard_eval(schema, p->g1, req),
                       guard_eval(schema, p->g2, req));
    case PolicyOp::Neg:
    case PolicyOp::Det:
      return apply_unary(p->op, eval_rel_rec(schema, p->a, req));
    case PolicyOp::Scope:
      throw Error("scope nodes must be expanded before evaluation");
    default:
      return combine_pair(p->op, eval_rel_rec(schema, p->a, req),
                          eval_rel_rec(schema, p->b, req));
  }
}

}  // namespace detail

inline DecisionPair eval_rel(const Schema& schema, const PolicyPtr& p,
                             const Request& req,
                             const GuardLimits& limits = {}) {
  PolicyPtr q = detail::contains_scope(p) ? scope_expand(schema, p, limits) : p;
  return detail::eval_rel_rec(schema, q, req);
}

inline Decision decide(const Schema& schema, const PolicyPtr& p,
                       const Request& req, const GuardLimits& limits = {}) {
  return classify(eval_rel(schema, p, req, limits));
}

// ---------------------------------------------------------------------------
// Absolute semantics: regions over all fully bound points.

using TriRegion = std::vector<Tri>;

struct PolicyMeaning {
  TriRegion accept, deny;
};

inline PolicyMeaning eval_abs(const Schema& schema, const PolicyPtr& p) {
  const std::size_t n = schema.point_count();
  switch (p->op) {
    case PolicyOp::Empty:
      return {TriRegion(n, Tri::F), TriRegion(n, Tri::F)};
    case PolicyOp::Zero:
      return {TriRegion(n, Tri::F), TriRegion(n, Tri::T)};
    case PolicyOp::One:
      return {TriRegion(n, Tri::T), TriRegion(n, Tri::F)};
    case PolicyOp::Rule: {
      std::vector<bool> r1 = guard_region(schema, p->g1);
      std::vector<bool> r2 = guard_region(schema, p->g2);
      PolicyMeaning m{TriRegion(n, Tri::F), TriRegion(n, Tri::F)};
      for (std::size_t i = 0; i < n; ++i) {
        if (r1[i] && !r2[i]) m.accept[i] = Tri::T;
        if (r2[i] && !r1[i]) m.deny[i] = Tri::T;
      }
      return m;
    }
    case PolicyOp::Neg: {
      PolicyMeaning m = eval_abs(schema, p->a);
      return {std::move(m.deny), std::move(m.accept)};
    }
    case PolicyOp::Det: {
      PolicyMeaning m = eval_abs(schema, p->a);
      for (std::size_t i = 0; i < n; ++i) {
        m.accept[i] = tri_det(m.accept[i]);
        m.deny[i] = tri_det(m.deny[i]);
      }
      return m;
    }
    case PolicyOp::Scope: {
      // Guards are definite at fully bound points, so scoping is masking.
      std::vector<bool> mask = guard_region(schema, p->g1);
      PolicyMeaning m = eval_abs(schema, p->a);
      for (std::size_t i = 0; i < n; ++i) {
        if (!mask[i]) {
          m.accept[i] = Tri::F;
          m.deny[i] = Tri::F;
        }
      }
      return m;
    }
    default: {
      PolicyMeaning l = eval_abs(schema, p->a);
      PolicyMeaning r = eval_abs(schema, p->b);
      PolicyMeaning out{TriRegion(n), TriRegion(n)};
      for (std::size_t i = 0; i < n; ++i) {
        DecisionPair d = combine_pair(p->op, {l.accept[i], l.deny[i]},
                                      {r.accept[i], r.deny[i]});
        out.accept[i] = d.accept;
        out.deny[i] = d.deny;
      }
      return out;
    }
  }
}

inline DecisionPair lookup_meaning(const PolicyMeaning& m, std::size_t point) {
  return {m.accept[point], m.deny[point]};
}

// Definite-True bitmap of one region.
inline std::vector<bool> region_true(const TriRegion& r) {
  std::vector<bool> out(r.size(), false);
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = r[i] == Tri::T;
  return out;
}

}  // namespace sepl

#endif  // SEPL_SEMANTICS_HPP
