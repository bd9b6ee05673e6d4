// Policy syntax: printing with minimal parentheses, parsing, precedence,
// and print/parse round-tripping.

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "sepl/analysis.hpp"  // random_policy
#include "sepl/policy.hpp"
#include "sepl/schema.hpp"

using sepl::PolicyOp;
using sepl::PolicyPtr;

namespace {

sepl::Schema toy() {
  return sepl::parse_schema(
      "attribute user : enum { alice, bob }\n"
      "attribute temp : int [-2, 2]\n"
      "attribute action : enum { read, write }\n");
}

PolicyPtr parse(const sepl::Schema& s, const std::string& text) {
  return sepl::parse_policy(text, s, "p");
}

sepl::Guard g_user_alice() {
  sepl::Atom a;
  a.pred = sepl::AtomPred::Eq;
  a.key = "user";
  a.value = "alice";
  return sepl::guard_from_atom(a);
}

sepl::Guard g_action_write() {
  sepl::Atom a;
  a.pred = sepl::AtomPred::Eq;
  a.key = "action";
  a.value = "write";
  return sepl::guard_from_atom(a);
}

}  // namespace

TEST_CASE("printing constants and rules") {
  CHECK(sepl::print_policy(sepl::empty_policy()) == "eps");
  CHECK(sepl::print_policy(sepl::zero_policy()) == "0");
  CHECK(sepl::print_policy(sepl::one_policy()) == "1");
  CHECK(sepl::print_policy(sepl::rule(g_user_alice(), sepl::guard_bottom())) ==
        "<{user = alice}, none>");
}

TEST_CASE("printing uses minimal parentheses") {
  PolicyPtr a = sepl::rule(g_user_alice(), sepl::guard_bottom());
  PolicyPtr b = sepl::one_policy();
  PolicyPtr c = sepl::zero_policy();
  CHECK(sepl::print_policy(sepl::choice(sepl::seq(b, c), b)) == "1 . 0 + 1");
  CHECK(sepl::print_policy(sepl::seq(sepl::choice(b, c), b)) == "(1 + 0) . 1");
  CHECK(sepl::print_policy(sepl::choice(b, sepl::choice(c, b))) ==
        "1 + (0 + 1)");
  CHECK(sepl::print_policy(sepl::choice(sepl::choice(b, c), b)) == "1 + 0 + 1");
  CHECK(sepl::print_policy(sepl::neg(sepl::choice(b, c))) == "~(1 + 0)");
  CHECK(sepl::print_policy(sepl::neg(sepl::neg(b))) == "~~1");
  CHECK(sepl::print_policy(sepl::det(b)) == "det 1");
  CHECK(sepl::print_policy(sepl::dov(sepl::pov(b, c), b)) == "1 pov 0 dov 1");
  CHECK(sepl::print_policy(sepl::pov(b, sepl::dov(c, b))) == "1 pov (0 dov 1)");
  CHECK(sepl::print_policy(sepl::seq(sepl::par(b, c), b)) == "(1 && 0) . 1");
  CHECK(sepl::print_policy(sepl::par(sepl::seq(b, c), b)) == "1 . 0 && 1");
  CHECK(sepl::print_policy(sepl::minus(sepl::choice(b, c), b)) == "1 + 0 - 1");
  CHECK(sepl::print_policy(sepl::choice(b, sepl::minus(c, b))) ==
        "1 + (0 - 1)");
  CHECK(sepl::print_policy(sepl::ominus(b, c)) == "1 (-) 0");
  CHECK(sepl::print_policy(sepl::scope(g_user_alice(), sepl::seq(a, b))) ==
        "{user = alice}: (<{user = alice}, none> . 1)");
  CHECK(sepl::print_policy(sepl::scope(sepl::guard_top(), b)) == "{}: 1");
}

TEST_CASE("parsing structure and precedence") {
  sepl::Schema s = toy();
  SECTION("sum is the loosest level") {
    PolicyPtr p = parse(s, "1 . 0 + 1");
    REQUIRE(p->op == PolicyOp::Choice);
    CHECK(p->a->op == PolicyOp::Seq);
  }
  SECTION("overrides bind looser than par, tighter than sum") {
    PolicyPtr p = parse(s, "1 && 0 pov 1 + 0");
    REQUIRE(p->op == PolicyOp::Choice);
    REQUIRE(p->a->op == PolicyOp::Pov);
    CHECK(p->a->a->op == PolicyOp::Par);
  }
  SECTION("mixed sum operators associate left") {
    PolicyPtr p = parse(s, "1 - 0 (-) eps + 1");
    REQUIRE(p->op == PolicyOp::Choice);
    REQUIRE(p->a->op == PolicyOp::Ominus);
    CHECK(p->a->a->op == PolicyOp::Minus);
  }
  SECTION("scoping binds tighter than binary operators") {
    PolicyPtr p = parse(s, "{user = alice}: <none, none> + 1");
    REQUIRE(p->op == PolicyOp::Choice);
    CHECK(p->a->op == PolicyOp::Scope);
    CHECK(p->b->op == PolicyOp::One);
  }
  SECTION("unaries stack") {
    PolicyPtr p = parse(s, "~det ~1");
    REQUIRE(p->op == PolicyOp::Neg);
    REQUIRE(p->a->op == PolicyOp::Det);
    CHECK(p->a->a->op == PolicyOp::Neg);
  }
  SECTION("comments and whitespace") {
    PolicyPtr p = parse(s, "# leading comment\n  1 +\n 0 # trailing\n");
    CHECK(p->op == PolicyOp::Choice);
  }
  SECTION("guards canonicalize value order") {
    PolicyPtr p = parse(s, "<{user in {bob, alice}}, none>");
    PolicyPtr q = parse(s, "<{user in {alice, bob}}, none>");
    CHECK(sepl::policy_equal(p, q));
  }
  SECTION("negative integers in guards") {
    PolicyPtr p = parse(s, "<{temp = -2}, none>");
    CHECK(sepl::print_policy(p) == "<{temp = -2}, none>");
  }
  SECTION("structural equality distinguishes guards") {
    PolicyPtr p = sepl::rule(g_user_alice(), sepl::guard_bottom());
    PolicyPtr q = sepl::rule(g_action_write(), sepl::guard_bottom());
    CHECK(sepl::policy_equal(p, p));
    CHECK_FALSE(sepl::policy_equal(p, q));
  }
}

TEST_CASE("parse errors carry positions") {
  sepl::Schema s = toy();
  CHECK_THROWS_WITH(parse(s, "1 +"), Catch::Matchers::StartsWith("p:1:"));
  CHECK_THROWS_WITH(parse(s, "<{user = carol}, none>"),
                    Catch::Matchers::ContainsSubstring("domain"));
  CHECK_THROWS_WITH(parse(s, "{user < alice}: 1"),
                    Catch::Matchers::ContainsSubstring("ordered"));
  CHECK_THROWS_WITH(parse(s, "(1 + 0"),
                    Catch::Matchers::ContainsSubstring("expected"));
  CHECK_THROWS_WITH(parse(s, "{user = alice, user = bob}: 1"),
                    Catch::Matchers::ContainsSubstring("twice"));
  CHECK_THROWS_WITH(parse(s, "1 1"),
                    Catch::Matchers::ContainsSubstring("after policy"));
  CHECK_THROWS_WITH(parse(s, "<{who = alice}, none>"),
                    Catch::Matchers::ContainsSubstring("unknown attribute"));
  CHECK_THROWS_WITH(parse(s, ""), Catch::Matchers::ContainsSubstring("policy"));
}

TEST_CASE("printed policies parse back to the same tree") {
  sepl::Schema s = toy();
  std::mt19937_64 rng(42);
  for (int iter = 0; iter < 200; ++iter) {
    PolicyPtr p = sepl::random_policy(rng, s, 4);
    std::string text = sepl::print_policy(p);
    INFO("policy: " << text);
    PolicyPtr q = parse(s, text);
    CHECK(sepl::policy_equal(p, q));
    // Printing is deterministic and stable under a round trip.
    CHECK(sepl::print_policy(q) == text);
  }
}
