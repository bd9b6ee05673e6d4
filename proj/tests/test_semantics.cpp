// Pairwise combination tables, request evaluation, and whole-domain
// evaluation. The expected combination formulas are restated here
// independently so the two sources must agree cell by cell.

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "sepl/analysis.hpp"
#include "sepl/semantics.hpp"

using sepl::DecisionPair;
using sepl::PolicyOp;
using sepl::PolicyPtr;
using sepl::Tri;

namespace {

constexpr Tri F = Tri::F, U = Tri::U, T = Tri::T;
const Tri kAll[] = {F, U, T};

sepl::Schema toy() {
  return sepl::parse_schema(
      "attribute user : enum { alice, bob }\n"
      "attribute action : enum { read, write }\n");
}

// Independent statement of each combination rule.
DecisionPair expected_combine(PolicyOp op, DecisionPair l, DecisionPair r) {
  using sepl::tri_minus;
  using sepl::tri_ominus;
  using sepl::tri_or;
  Tri a1 = l.accept, d1 = l.deny, a2 = r.accept, d2 = r.deny;
  switch (op) {
    case PolicyOp::Seq:
      return {tri_or(a1, tri_minus(a2, d1)), tri_or(d1, tri_minus(d2, a1))};
    case PolicyOp::Pov:
      return {tri_or(a1, a2), tri_or(tri_minus(d1, a2), tri_minus(d2, a1))};
    case PolicyOp::Dov:
      return {tri_or(tri_minus(a1, d2), tri_minus(a2, d1)), tri_or(d1, d2)};
    case PolicyOp::Par:
      return {sepl::tri_and(a1, a2), sepl::tri_and(d1, d2)};
    case PolicyOp::Choice: {
      Tri acc = tri_or(a1, a2), den = tri_or(d1, d2);
      return {tri_minus(acc, den), tri_minus(den, acc)};
    }
    case PolicyOp::Minus: {
      Tri applic = tri_or(a2, d2);
      return {tri_minus(a1, applic), tri_minus(d1, applic)};
    }
    case PolicyOp::Ominus: {
      Tri applic = tri_or(a2, d2);
      return {tri_ominus(a1, applic), tri_ominus(d1, applic)};
    }
    default:
      FAIL("not a binary operator");
      return {};
  }
}

// Every request over the schema, unknown bindings included.
std::vector<sepl::Request> all_requests(const sepl::Schema& s) {
  std::vector<sepl::Request> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < s.attribute_count(); ++i)
    total *= s.attribute(i).size() + 1;
  for (std::size_t code = 0; code < total; ++code) {
    sepl::Request r;
    std::size_t rest = code;
    for (std::size_t i = 0; i < s.attribute_count(); ++i) {
      std::size_t base = s.attribute(i).size() + 1;
      std::size_t digit = rest % base;
      rest /= base;
      if (digit == 0)
        r.values.push_back(std::nullopt);
      else
        r.values.push_back(static_cast<std::uint32_t>(digit - 1));
    }
    out.push_back(std::move(r));
  }
  return out;
}

bool in_reachable_set(DecisionPair p) {
  // (T,U), (U,T) and (T,T) never arise from a policy.
  return !(p.accept == T && p.deny != F) && !(p.accept == U && p.deny == T);
}

}  // namespace

TEST_CASE("constant pairs") {
  CHECK(sepl::constant_pair(PolicyOp::Empty) == DecisionPair{F, F});
  CHECK(sepl::constant_pair(PolicyOp::Zero) == DecisionPair{F, T});
  CHECK(sepl::constant_pair(PolicyOp::One) == DecisionPair{T, F});
}

TEST_CASE("rule pairs, all nine cells") {
  CHECK(sepl::rule_pair(F, F) == DecisionPair{F, F});
  CHECK(sepl::rule_pair(F, U) == DecisionPair{F, U});
  CHECK(sepl::rule_pair(F, T) == DecisionPair{F, T});
  CHECK(sepl::rule_pair(U, F) == DecisionPair{U, F});
  CHECK(sepl::rule_pair(U, U) == DecisionPair{U, U});
  CHECK(sepl::rule_pair(U, T) == DecisionPair{F, U});
  CHECK(sepl::rule_pair(T, F) == DecisionPair{T, F});
  CHECK(sepl::rule_pair(T, U) == DecisionPair{U, F});
  CHECK(sepl::rule_pair(T, T) == DecisionPair{F, F});
}

TEST_CASE("unary application") {
  CHECK(sepl::apply_unary(PolicyOp::Neg, {U, T}) == DecisionPair{T, U});
  CHECK(sepl::apply_unary(PolicyOp::Neg, {T, F}) == DecisionPair{F, T});
  CHECK(sepl::apply_unary(PolicyOp::Det, {U, F}) == DecisionPair{F, F});
  CHECK(sepl::apply_unary(PolicyOp::Det, {T, U}) == DecisionPair{T, F});
  CHECK(sepl::apply_unary(PolicyOp::Det, {T, T}) == DecisionPair{T, T});
}

TEST_CASE("binary combination agrees with the stated formulas on all cells") {
  const PolicyOp ops[] = {PolicyOp::Seq,    PolicyOp::Pov,   PolicyOp::Dov,
                          PolicyOp::Par,    PolicyOp::Choice, PolicyOp::Minus,
                          PolicyOp::Ominus};
  for (PolicyOp op : ops)
    for (Tri a1 : kAll)
      for (Tri d1 : kAll)
        for (Tri a2 : kAll)
          for (Tri d2 : kAll) {
            DecisionPair l{a1, d1}, r{a2, d2};
            CHECK(sepl::combine_pair(op, l, r) == expected_combine(op, l, r));
          }
}

TEST_CASE("spot cells, computed by hand") {
  CHECK(sepl::combine_pair(PolicyOp::Seq, {F, F}, {F, T}) == DecisionPair{F, T});
  CHECK(sepl::combine_pair(PolicyOp::Seq, {U, F}, {T, F}) == DecisionPair{T, F});
  CHECK(sepl::combine_pair(PolicyOp::Seq, {T, F}, {F, T}) == DecisionPair{T, F});
  CHECK(sepl::combine_pair(PolicyOp::Pov, {U, F}, {F, T}) == DecisionPair{U, U});
  CHECK(sepl::combine_pair(PolicyOp::Pov, {T, F}, {F, T}) == DecisionPair{T, F});
  CHECK(sepl::combine_pair(PolicyOp::Dov, {T, F}, {F, U}) == DecisionPair{U, U});
  CHECK(sepl::combine_pair(PolicyOp::Par, {T, F}, {T, U}) == DecisionPair{T, F});
  CHECK(sepl::combine_pair(PolicyOp::Choice, {T, F}, {F, T}) == DecisionPair{F, F});
  CHECK(sepl::combine_pair(PolicyOp::Minus, {T, F}, {U, F}) == DecisionPair{U, F});
  CHECK(sepl::combine_pair(PolicyOp::Ominus, {T, F}, {U, F}) == DecisionPair{U, F});
  CHECK(sepl::combine_pair(PolicyOp::Ominus, {T, F}, {T, F}) == DecisionPair{U, F});
}

TEST_CASE("request evaluation on a small policy, frozen") {
  sepl::Schema s = toy();
  PolicyPtr p = sepl::parse_policy(
      "<{user = alice}, none> pov <none, {action = write}>", s);
  auto req = [](std::optional<std::uint32_t> u, std::optional<std::uint32_t> a) {
    sepl::Request r;
    r.values = {u, a};
    return r;
  };
  CHECK(sepl::eval_rel(s, p, req(0, 0)) == DecisionPair{T, F});
  CHECK(sepl::eval_rel(s, p, req(1, 1)) == DecisionPair{F, T});
  CHECK(sepl::eval_rel(s, p, req(1, 0)) == DecisionPair{F, F});
  CHECK(sepl::eval_rel(s, p, req(std::nullopt, 0)) == DecisionPair{U, F});
  CHECK(sepl::decide(s, p, req(0, 0)) == sepl::Decision::Permit);
  CHECK(sepl::decide(s, p, req(std::nullopt, 0)) ==
        sepl::Decision::IndeterminateP);
}

TEST_CASE("whole-domain evaluation masks scopes") {
  sepl::Schema s = toy();
  PolicyPtr p = sepl::parse_policy("{user = alice}: 1", s);
  sepl::PolicyMeaning m = sepl::eval_abs(s, p);
  // alice points are 0 and 1 (user is the most significant attribute).
  CHECK(sepl::region_true(m.accept) == std::vector<bool>{true, true, false, false});
  CHECK(sepl::region_true(m.deny) == std::vector<bool>{false, false, false, false});
}

TEST_CASE("relative and absolute evaluation agree at bound points") {
  sepl::Schema s = toy();
  std::mt19937_64 rng(777);
  for (int iter = 0; iter < 100; ++iter) {
    PolicyPtr p = sepl::random_policy(rng, s, 4);
    sepl::PolicyMeaning m = sepl::eval_abs(s, p);
    for (std::size_t i = 0; i < s.point_count(); ++i) {
      sepl::Request r;
      for (std::uint32_t v : s.point_of(i)) r.values.push_back(v);
      CHECK(sepl::eval_rel(s, p, r) == sepl::lookup_meaning(m, i));
    }
  }
}

TEST_CASE("evaluation never leaves the reachable pair set") {
  sepl::Schema s = toy();
  std::vector<sepl::Request> requests = all_requests(s);
  std::mt19937_64 rng(999);
  for (int iter = 0; iter < 200; ++iter) {
    PolicyPtr p = sepl::random_policy(rng, s, 4);
    for (const sepl::Request& r : requests) {
      DecisionPair e = sepl::eval_rel(s, p, r);
      CHECK(in_reachable_set(e));
      CHECK(sepl::classify(e) != sepl::Decision::Conflict);
    }
  }
}
