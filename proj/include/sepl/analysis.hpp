#ifndef SEPL_ANALYSIS_HPP
#define SEPL_ANALYSIS_HPP

// Whole-domain analyses: policy comparison, incompleteness and conflict
// reports, distance metrics, construction of a policy from target regions,
// and the algebraic-law checker.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sepl/error.hpp"
#include "sepl/guard.hpp"
#include "sepl/policy.hpp"
#include "sepl/schema.hpp"
#include "sepl/semantics.hpp"
#include "sepl/transform.hpp"

namespace sepl {

struct RegionSummary {
  std::size_t count = 0;
  std::vector<std::size_t> samples;  // first few member points
};

inline RegionSummary summarize_region(const std::vector<bool>& region,
                                      std::size_t max_samples = 10) {
  RegionSummary s;
  for (std::size_t i = 0; i < region.size(); ++i) {
    if (!region[i]) continue;
    ++s.count;
    if (s.samples.size() < max_samples) s.samples.push_back(i);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Comparison

enum class Relation { Equivalent, LeftLower, RightLower, Incomparable };

inline const char* relation_token(Relation r) {
  switch (r) {
    case Relation::Equivalent: return "Equivalent";
    case Relation::LeftLower: return "LeftLower";
    case Relation::RightLower: return "RightLower";
    case Relation::Incomparable: return "Incomparable";
  }
  return "Incomparable";
}

struct CompareReport {
  Relation relation = Relation::Incomparable;
  bool applicability_disjoint = false;
  // Witness points for each inclusion that fails, up to the sample cap.
  std::vector<std::size_t> accept_left_not_right, deny_left_not_right;
  std::vector<std::size_t> accept_right_not_left, deny_right_not_left;
};

// Compares definite-True regions: left is lower when its accept and deny
// regions are both included in the right's.
inline CompareReport compare(const Schema& schema, const PolicyPtr& left,
                             const PolicyPtr& right,
                             std::size_t max_samples = 10) {
  PolicyMeaning ml = eval_abs(schema, left);
  PolicyMeaning mr = eval_abs(schema, right);
  CompareReport rep;
  bool applicability_overlap = false;
  auto note = [&](std::vector<std::size_t>& out, std::size_t i) {
    if (out.size() < max_samples) out.push_back(i);
  };
  for (std::size_t i = 0; i < schema.point_count(); ++i) {
    bool al = ml.accept[i] == Tri::T, dl = ml.deny[i] == Tri::T;
    bool ar = mr.accept[i] == Tri::T, dr = mr.deny[i] == Tri::T;
    if (al && !ar) note(rep.accept_left_not_right, i);
    if (dl && !dr) note(rep.deny_left_not_right, i);
    if (ar && !al) note(rep.accept_right_not_left, i);
    if (dr && !dl) note(rep.deny_right_not_left, i);
    if ((al || dl) && (ar || dr)) applicability_overlap = true;
  }
  bool left_lower =
      rep.accept_left_not_right.empty() && rep.deny_left_not_right.empty();
  bool right_lower =
      rep.accept_right_not_left.empty() && rep.deny_right_not_left.empty();
  rep.relation = left_lower && right_lower ? Relation::Equivalent
                 : left_lower              ? Relation::LeftLower
                 : right_lower             ? Relation::RightLower
                                           : Relation::Incomparable;
  rep.applicability_disjoint = !applicability_overlap;
  return rep;
}

// ---------------------------------------------------------------------------
// Incompleteness and conflict

struct OverlapPair {
  std::size_t left = 0, right = 0;  // indices into the analyzed sequence
  RegionSummary region;
};

struct AnalysisReport {
  std::size_t domain_size = 0;
  RegionSummary not_applicable;  // points deciding (F,F)
  RegionSummary indeterminate;   // points whose pair contains Unknown
  RegionSummary conflict;        // points yielding (T,T) — expected empty
  std::vector<OverlapPair> overlaps;

  bool complete() const {
    return not_applicable.count == 0 && indeterminate.count == 0;
  }
  bool conflict_free() const { return conflict.count == 0; }
};

inline AnalysisReport incompleteness(const Schema& schema, const PolicyPtr& p,
                                     std::size_t max_samples = 10) {
  PolicyMeaning m = eval_abs(schema, p);
  std::size_t n = schema.point_count();
  std::vector<bool> na(n), ind(n), conf(n);
  for (std::size_t i = 0; i < n; ++i) {
    na[i] = m.accept[i] == Tri::F && m.deny[i] == Tri::F;
    ind[i] = m.accept[i] == Tri::U || m.deny[i] == Tri::U;
    conf[i] = m.accept[i] == Tri::T && m.deny[i] == Tri::T;
  }
  AnalysisReport rep;
  rep.domain_size = n;
  rep.not_applicable = summarize_region(na, max_samples);
  rep.indeterminate = summarize_region(ind, max_samples);
  rep.conflict = summarize_region(conf, max_samples);
  return rep;
}

// Internal conflicts of each policy plus pairwise applicability overlaps
// (the regions where only-one-applicable would degrade).
inline AnalysisReport conflict_report(const Schema& schema,
                                      const std::vector<PolicyPtr>& policies,
                                      std::size_t max_samples = 10) {
  std::size_t n = schema.point_count();
  std::vector<PolicyMeaning> meanings;
  meanings.reserve(policies.size());
  for (const PolicyPtr& p : policies) meanings.push_back(eval_abs(schema, p));
  std::vector<bool> conf(n, false);
  for (const PolicyMeaning& m : meanings)
    for (std::size_t i = 0; i < n; ++i)
      if (m.accept[i] == Tri::T && m.deny[i] == Tri::T) conf[i] = true;
  AnalysisReport rep;
  rep.domain_size = n;
  rep.conflict = summarize_region(conf, max_samples);
  for (std::size_t a = 0; a < meanings.size(); ++a) {
    for (std::size_t b = a + 1; b < meanings.size(); ++b) {
      std::vector<bool> overlap(n);
      for (std::size_t i = 0; i < n; ++i) {
        bool appl_a = meanings[a].accept[i] == Tri::T || meanings[a].deny[i] == Tri::T;
        bool appl_b = meanings[b].accept[i] == Tri::T || meanings[b].deny[i] == Tri::T;
        overlap[i] = appl_a && appl_b;
      }
      RegionSummary s = summarize_region(overlap, max_samples);
      if (s.count > 0) rep.overlaps.push_back({a, b, std::move(s)});
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Distance

enum class DistanceMetric { Hamming, Jaccard };

struct DistanceResult {
  std::size_t numerator = 0, denominator = 0;  // exact ratio; 0/0 means 0
  double value() const {
    return denominator == 0 ? 0.0
                            : static_cast<double>(numerator) /
                                  static_cast<double>(denominator);
  }
};

inline DistanceResult distance(const Schema& schema, const PolicyPtr& left,
                               const PolicyPtr& right, DistanceMetric metric) {
  PolicyMeaning ml = eval_abs(schema, left);
  PolicyMeaning mr = eval_abs(schema, right);
  std::size_t n = schema.point_count();
  std::size_t sym_diff = 0, inter = 0, uni = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool al = ml.accept[i] == Tri::T, ar = mr.accept[i] == Tri::T;
    bool dl = ml.deny[i] == Tri::T, dr = mr.deny[i] == Tri::T;
    sym_diff += (al != ar) + (dl != dr);
    inter += (al && ar) + (dl && dr);
    uni += (al || ar) + (dl || dr);
  }
  if (metric == DistanceMetric::Hamming) return {sym_diff, 2 * n};
  return {uni - inter, uni};  // Jaccard; 0/0 handled by value()
}

// ---------------------------------------------------------------------------
// Region expressions -> policy (the completeness construction)

// Bitmap denoted by a set expression over two policies' definite regions.
inline std::vector<bool> set_region(const Schema& schema, const SetExprPtr& e,
                                    const PolicyMeaning& left,
                                    const PolicyMeaning& right) {
  switch (e->op) {
    case SetOp::AcceptL: return region_true(left.accept);
    case SetOp::DenyL: return region_true(left.deny);
    case SetOp::AcceptR: return region_true(right.accept);
    case SetOp::DenyR: return region_true(right.deny);
    case SetOp::Compl: {
      std::vector<bool> r = set_region(schema, e->a, left, right);
      r.flip();
      return r;
    }
    default: {
      std::vector<bool> a = set_region(schema, e->a, left, right);
      std::vector<bool> b = set_region(schema, e->b, left, right);
      for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = e->op == SetOp::Union   ? (a[i] || b[i])
               : e->op == SetOp::Inter ? (a[i] && b[i])
                                       : (a[i] && !b[i]);  // Diff
      }
      return a;
    }
  }
}

// Build a policy whose absolute accept/deny regions are exactly the regions
// denoted by f and g. The two regions must be disjoint.
inline PolicyPtr semantics_to_policy(const Schema& schema, const PolicyPtr& left,
                                     const PolicyPtr& right, const SetExprPtr& f,
                                     const SetExprPtr& g) {
  PolicyMeaning ml = eval_abs(schema, left);
  PolicyMeaning mr = eval_abs(schema, right);
  std::vector<bool> rf = set_region(schema, f, ml, mr);
  std::vector<bool> rg = set_region(schema, g, ml, mr);
  for (std::size_t i = 0; i < rf.size(); ++i)
    if (rf[i] && rg[i])
      throw Error("accept and deny target regions are not disjoint at point (" +
                  schema.point_text(i) + ")");
  return regions_policy(f, g, left, right, one_policy());
}

// ---------------------------------------------------------------------------
// Random generation (shared by the law checker and property tests)

inline Guard random_guard(std::mt19937_64& rng, const Schema& schema) {
  if (rng() % 10 == 0) return guard_bottom();
  Guard g;
  std::size_t boxes = 1 + rng() % 2;
  for (std::size_t b = 0; b < boxes; ++b) {
    Box box;
    for (std::size_t ai = 0; ai < schema.attribute_count(); ++ai) {
      if (rng() % 2) continue;
      const Attribute& attr = schema.attribute(ai);
      Atom atom;
      atom.key = attr.name;
      std::uint64_t kind = rng() % 4;
      if (attr.kind == AttrKind::Enum && kind >= 2) kind = rng() % 2;
      switch (kind) {
        case 0: {  // equality
          atom.pred = AtomPred::Eq;
          atom.value = attr.value_name(rng() % attr.size());
          break;
        }
        case 1: {  // membership in a random nonempty subset
          atom.pred = AtomPred::InSet;
          std::vector<bool> set(attr.size(), false);
          set[rng() % attr.size()] = true;
          for (std::size_t i = 0; i < attr.size(); ++i)
            if (rng() % 3 == 0) set[i] = true;
          for (std::size_t i = 0; i < attr.size(); ++i)
            if (set[i]) atom.values.push_back(attr.value_name(i));
          break;
        }
        case 2: {  // lower bound (integer attributes only)
          atom.pred = rng() % 2 ? AtomPred::Ge : AtomPred::Gt;
          atom.value = std::to_string(attr.lo + static_cast<long>(rng() % attr.size()));
          break;
        }
        default: {  // upper bound
          atom.pred = rng() % 2 ? AtomPred::Le : AtomPred::Lt;
          atom.value = std::to_string(attr.lo + static_cast<long>(rng() % attr.size()));
          break;
        }
      }
      box.atoms.push_back(std::move(atom));
    }
    g.boxes.push_back(std::move(box));
  }
  return g;
}

inline PolicyPtr random_policy(std::mt19937_64& rng, const Schema& schema,
                               int depth) {
  if (depth <= 0 || rng() % 5 == 0) {
    switch (rng() % 8) {
      case 0: return empty_policy();
      case 1: return zero_policy();
      case 2: return one_policy();
      default:
        return rule(random_guard(rng, schema), random_guard(rng, schema));
    }
  }
  switch (rng() % 10) {
    case 0: return neg(random_policy(rng, schema, depth - 1));
    case 1: return det(random_policy(rng, schema, depth - 1));
    case 2:
      return scope(random_guard(rng, schema),
                   random_policy(rng, schema, depth - 1));
    case 3:
      return seq(random_policy(rng, schema, depth - 1),
                 random_policy(rng, schema, depth - 1));
    case 4:
      return pov(random_policy(rng, schema, depth - 1),
                 random_policy(rng, schema, depth - 1));
    case 5:
      return dov(random_policy(rng, schema, depth - 1),
                 random_policy(rng, schema, depth - 1));
    case 6:
      return par(random_policy(rng, schema, depth - 1),
                 random_policy(rng, schema, depth - 1));
    case 7:
      return choice(random_policy(rng, schema, depth - 1),
                    random_policy(rng, schema, depth - 1));
    case 8:
      return minus(random_policy(rng, schema, depth - 1),
                   random_policy(rng, schema, depth - 1));
    default:
      return ominus(random_policy(rng, schema, depth - 1),
                    random_policy(rng, schema, depth - 1));
  }
}

// ---------------------------------------------------------------------------
// Law catalog and checker

using LawBuilder = std::function<PolicyPtr(const std::vector<PolicyPtr>&)>;

struct LawSpec {
  std::string id;    // catalog number
  std::string name;  // what the identity says
  int arity = 0;     // metavariables P1..Pn
  LawBuilder lhs, rhs;
  bool expected_pass = true;  // shipped verdict profile for the laws command
};

struct LawCounterexample {
  std::vector<PolicyPtr> instantiation;
  std::size_t point = 0;
  DecisionPair lhs, rhs;
};

struct LawVerdict {
  std::string law;
  bool pass = true;
  std::size_t instances_checked = 0;
  std::optional<LawCounterexample> counterexample;
};

struct LawSampling {
  std::size_t samples = 200;   // total instantiations per law (incl. corners)
  std::uint64_t seed = 20230815;
  int max_depth = 3;
};

inline const std::vector<LawSpec>& law_catalog() {
  static const std::vector<LawSpec> catalog = [] {
    auto P = [](const std::vector<PolicyPtr>& ps, std::size_t i) { return ps[i]; };
    std::vector<LawSpec> laws;
    laws.push_back({"1", "choice is commutative", 2,
                    [P](const std::vector<PolicyPtr>& ps) { return choice(P(ps, 0), P(ps, 1)); },
                    [P](const std::vector<PolicyPtr>& ps) { return choice(P(ps, 1), P(ps, 0)); },
                    true});
    laws.push_back({"2", "choice is associative", 3,
                    [P](const std::vector<PolicyPtr>& ps) { return choice(P(ps, 0), choice(P(ps, 1), P(ps, 2))); },
                    [P](const std::vector<PolicyPtr>& ps) { return choice(choice(P(ps, 0), P(ps, 1)), P(ps, 2)); },
                    true});
    laws.push_back({"3", "parallel is commutative", 2,
                    [P](const std::vector<PolicyPtr>& ps) { return par(P(ps, 0), P(ps, 1)); },
                    [P](const std::vector<PolicyPtr>& ps) { return par(P(ps, 1), P(ps, 0)); },
                    true});
    laws.push_back({"4", "parallel is associative", 3,
                    [P](const std::vector<PolicyPtr>& ps) { return par(P(ps, 0), par(P(ps, 1), P(ps, 2))); },
                    [P](const std::vector<PolicyPtr>& ps) { return par(par(P(ps, 0), P(ps, 1)), P(ps, 2)); },
                    true});
    laws.push_back({"5", "parallel distributes over choice", 3,
                    [P](const std::vector<PolicyPtr>& ps) { return par(choice(P(ps, 0), P(ps, 1)), P(ps, 2)); },
                    [P](const std::vector<PolicyPtr>& ps) { return choice(par(P(ps, 0), P(ps, 2)), par(P(ps, 1), P(ps, 2))); },
                    false});
    laws.push_back({"6", "negated 1 is 0", 0,
                    [](const std::vector<PolicyPtr>&) { return neg(one_policy()); },
                    [](const std::vector<PolicyPtr>&) { return zero_policy(); },
                    true});
    laws.push_back({"7", "negated 0 is 1", 0,
                    [](const std::vector<PolicyPtr>&) { return neg(zero_policy()); },
                    [](const std::vector<PolicyPtr>&) { return one_policy(); },
                    true});
    laws.push_back({"8", "negated eps is eps", 0,
                    [](const std::vector<PolicyPtr>&) { return neg(empty_policy()); },
                    [](const std::vector<PolicyPtr>&) { return empty_policy(); },
                    true});
    laws.push_back({"9", "negation is an involution", 1,
                    [P](const std::vector<PolicyPtr>& ps) { return neg(neg(P(ps, 0))); },
                    [P](const std::vector<PolicyPtr>& ps) { return P(ps, 0); },
                    true});
    laws.push_back({"10", "negation distributes over parallel", 2,
                    [P](const std::vector<PolicyPtr>& ps) { return neg(par(P(ps, 0), P(ps, 1))); },
                    [P](const std::vector<PolicyPtr>& ps) { return par(neg(P(ps, 0)), neg(P(ps, 1))); },
                    true});
    laws.push_back({"11", "negation distributes over choice", 2,
                    [P](const std::vector<PolicyPtr>& ps) { return neg(choice(P(ps, 0), P(ps, 1))); },
                    [P](const std::vector<PolicyPtr>& ps) { return choice(neg(P(ps, 0)), neg(P(ps, 1))); },
                    true});
    laws.push_back({"12", "choice with a negated policy vanishes", 2,
                    [P](const std::vector<PolicyPtr>& ps) { return choice(P(ps, 0), neg(P(ps, 1))); },
                    [](const std::vector<PolicyPtr>&) { return empty_policy(); },
                    false});
    laws.push_back({"13", "eps is a unit for choice", 1,
                    [P](const std::vector<PolicyPtr>& ps) { return choice(P(ps, 0), empty_policy()); },
                    [P](const std::vector<PolicyPtr>& ps) { return P(ps, 0); },
                    true});
    laws.push_back({"14", "parallel with a negated policy vanishes", 2,
                    [P](const std::vector<PolicyPtr>& ps) { return par(P(ps, 0), neg(P(ps, 1))); },
                    [](const std::vector<PolicyPtr>&) { return empty_policy(); },
                    false});
    laws.push_back({"P1", "deny-overrides from permit-overrides", 2,
                    [P](const std::vector<PolicyPtr>& ps) { return dov(P(ps, 0), P(ps, 1)); },
                    [P](const std::vector<PolicyPtr>& ps) { return neg(pov(neg(P(ps, 0)), neg(P(ps, 1)))); },
                    true});
    return laws;
  }();
  return catalog;
}

// Check one law: constant corner instantiations first (every tuple over
// {eps, 0, 1}), then random policies up to the sample budget. A mismatch
// reports the first differing point of the first failing instantiation.
inline LawVerdict check_law(const Schema& schema, const LawSpec& law,
                            const LawSampling& sampling = {}) {
  LawVerdict verdict;
  verdict.law = law.id;

  std::vector<std::vector<PolicyPtr>> instances;
  std::size_t corners = 1;
  for (int i = 0; i < law.arity; ++i) corners *= 3;
  for (std::size_t c = 0; c < corners; ++c) {
    std::vector<PolicyPtr> tuple;
    std::size_t place = corners;
    for (int i = 0; i < law.arity; ++i) {
      place /= 3;
      switch ((c / place) % 3) {
        case 0: tuple.push_back(empty_policy()); break;
        case 1: tuple.push_back(zero_policy()); break;
        default: tuple.push_back(one_policy()); break;
      }
    }
    instances.push_back(std::move(tuple));
  }
  std::mt19937_64 rng(sampling.seed);
  while (law.arity > 0 && instances.size() < sampling.samples) {
    std::vector<PolicyPtr> tuple;
    for (int i = 0; i < law.arity; ++i)
      tuple.push_back(random_policy(rng, schema, sampling.max_depth));
    instances.push_back(std::move(tuple));
  }

  for (const auto& tuple : instances) {
    PolicyPtr lhs = law.lhs(tuple);
    PolicyPtr rhs = law.rhs(tuple);
    PolicyMeaning ml = eval_abs(schema, lhs);
    PolicyMeaning mr = eval_abs(schema, rhs);
    ++verdict.instances_checked;
    for (std::size_t i = 0; i < schema.point_count(); ++i) {
      if (ml.accept[i] != mr.accept[i] || ml.deny[i] != mr.deny[i]) {
        verdict.pass = false;
        verdict.counterexample =
            LawCounterexample{tuple, i,
                              {ml.accept[i], ml.deny[i]},
                              {mr.accept[i], mr.deny[i]}};
        return verdict;
      }
    }
  }
  return verdict;
}

}  // namespace sepl

#endif  // SEPL_ANALYSIS_HPP
