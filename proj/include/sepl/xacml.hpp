#ifndef SEPL_XACML_HPP
#define SEPL_XACML_HPP

// XACML-3.0 subset front end: parse PolicySet/Policy/Rule documents and
// translate them into the policy algebra.
//
// Element and attribute names are matched case-insensitively and a few
// spellings are accepted as aliases (AttrValue/AttributeValue, MatchID/
// MatchId, PolicyeId/PolicyId) because the input vocabulary is inconsistent
// about them. Attribute keys are derived as "<category>.<attributeId>" with
// URN prefixes stripped to their last ':' segment, e.g.
// "urn:...:attribute-category:resource" + "urn:...:resource-id" gives the
// schema key "resource.resource-id".

#include <optional>
#include <string>
#include <vector>

#include "sepl/error.hpp"
#include "sepl/guard.hpp"
#include "sepl/policy.hpp"
#include "sepl/schema.hpp"
#include "sepl/transform.hpp"
#include "sepl/xml.hpp"

namespace sepl {

inline std::string urn_suffix(const std::string& s) {
  std::size_t p = s.rfind(':');
  return p == std::string::npos ? s : s.substr(p + 1);
}

inline bool known_combining_alg(const std::string& bare) {
  return bare == "deny-overrides" || bare == "permit-overrides" ||
         bare == "first-applicable" || bare == "ordered-permit-overrides" ||
         bare == "only-one-applicable" || bare == "deny-unless-permit" ||
         bare == "permit-unless-deny";
}

inline bool known_match_id(const std::string& bare) {
  return bare == "string-equal" || bare == "integer-equal" ||
         bare == "integer-greater-than" || bare == "string-regexp-match";
}

struct XacmlMatch {
  std::string match_id;  // bare name, e.g. "string-equal"
  std::string category, attribute_id, data_type, must_be_present;
  std::string value;
  int line = 0, col = 0;
};

using XacmlAllOf = std::vector<XacmlMatch>;   // conjunction
using XacmlAnyOf = std::vector<XacmlAllOf>;   // disjunction
using XacmlTarget = std::vector<XacmlAnyOf>;  // conjunction; empty = match all

struct XacmlCond {
  enum Kind { And, Or, Not, Leaf } kind = Leaf;
  std::vector<XacmlCond> children;
  XacmlMatch leaf;
  int line = 0, col = 0;
};

struct XacmlRule {
  std::string id, effect, description;
  XacmlTarget target;
  std::optional<XacmlCond> condition;
  std::vector<std::string> retained;  // obligation/advice raw text
  int line = 0, col = 0;
};

struct XacmlPolicy {
  bool is_policy_set = false;
  std::string id, version, alg, description;  // alg is the bare name
  XacmlTarget target;
  std::vector<XacmlRule> rules;        // when !is_policy_set
  std::vector<XacmlPolicy> children;   // when is_policy_set
  std::vector<std::string> retained;
  int line = 0, col = 0;
};

struct XacmlDoc {
  XacmlPolicy root;
  std::string source;  // filename for error reporting
};

namespace detail {

class XacmlParser {
 public:
  explicit XacmlParser(std::string filename) : filename_(std::move(filename)) {}

  XacmlPolicy parse_root(const XmlNode& node) {
    if (ci_equal(node.name, "PolicySet") || ci_equal(node.name, "POLICYSET"))
      return policy_set(node);
    if (ci_equal(node.name, "Policy") || ci_equal(node.name, "POLICY"))
      return policy(node);
    fail(node, "root element must be Policy or PolicySet");
  }

 private:
  [[noreturn]] void fail(const XmlNode& n, const std::string& msg) const {
    throw Error(filename_, n.line, n.col, msg);
  }

  [[noreturn]] void fail_at(int line, int col, const std::string& msg) const {
    throw Error(filename_, line, col, msg);
  }

  static bool is_retained(const XmlNode& n) {
    return ci_equal(n.name, "Obligation") || ci_equal(n.name, "Obligations") ||
           ci_equal(n.name, "ObligationExpressions") ||
           ci_equal(n.name, "Advice") || ci_equal(n.name, "AdviceExpressions");
  }

  std::string required_attr(const XmlNode& n,
                            std::initializer_list<const char*> names,
                            const char* what) {
    for (const char* name : names)
      if (const XmlAttr* a = xml_attr(n, name)) return a->value;
    fail(n, std::string("missing ") + what + " attribute");
  }

  std::string combining_alg(const XmlNode& n) {
    std::string raw = required_attr(
        n, {"PolicyCombiningAlgId", "RuleCombiningAlgId"}, "combining-algorithm");
    std::string bare = urn_suffix(raw);
    if (!known_combining_alg(bare))
      fail(n, "unknown combining algorithm '" + raw + "'");
    return bare;
  }

  XacmlPolicy policy_set(const XmlNode& n) {
    XacmlPolicy p;
    p.is_policy_set = true;
    p.line = n.line;
    p.col = n.col;
    p.id = required_attr(n, {"PolicySetId", "PolicyId", "PolicyeId"}, "id");
    p.version = required_attr(n, {"Version"}, "Version");
    p.alg = combining_alg(n);
    for (const XmlNode& child : n.children) {
      if (ci_equal(child.name, "Description")) p.description = child.text;
      else if (ci_equal(child.name, "Target") || ci_equal(child.name, "TARGET"))
        p.target = target(child);
      else if (ci_equal(child.name, "PolicySet") || ci_equal(child.name, "Policy"))
        p.children.push_back(parse_root(child));
      else if (is_retained(child)) p.retained.push_back(child.text);
      else fail(child, "element '" + child.name + "' outside the supported subset");
    }
    if (p.children.empty())
      fail(n, "PolicySet requires at least one Policy or PolicySet");
    return p;
  }

  XacmlPolicy policy(const XmlNode& n) {
    XacmlPolicy p;
    p.line = n.line;
    p.col = n.col;
    p.id = required_attr(n, {"PolicyId", "PolicyeId", "PolicySetId"}, "id");
    p.version = required_attr(n, {"Version"}, "Version");
    p.alg = combining_alg(n);
    for (const XmlNode& child : n.children) {
      if (ci_equal(child.name, "Description")) p.description = child.text;
      else if (ci_equal(child.name, "Target") || ci_equal(child.name, "TARGET"))
        p.target = target(child);
      else if (ci_equal(child.name, "Rule") || ci_equal(child.name, "RULE"))
        p.rules.push_back(rule(child));
      else if (is_retained(child)) p.retained.push_back(child.text);
      else fail(child, "element '" + child.name + "' outside the supported subset");
    }
    if (p.rules.empty()) fail(n, "Policy requires at least one Rule");
    return p;
  }

  XacmlRule rule(const XmlNode& n) {
    XacmlRule r;
    r.line = n.line;
    r.col = n.col;
    r.id = required_attr(n, {"RuleId"}, "RuleId");
    r.effect = required_attr(n, {"Effect"}, "Effect");
    if (r.effect != "Permit" && r.effect != "Deny")
      fail(n, "Effect must be 'Permit' or 'Deny'");
    for (const XmlNode& child : n.children) {
      if (ci_equal(child.name, "Description")) r.description = child.text;
      else if (ci_equal(child.name, "Target") || ci_equal(child.name, "TARGET"))
        r.target = target(child);
      else if (ci_equal(child.name, "Condition"))
        r.condition = condition(child);
      else if (is_retained(child)) r.retained.push_back(child.text);
      else fail(child, "element '" + child.name + "' outside the supported subset");
    }
    return r;
  }

  XacmlTarget target(const XmlNode& n) {
    XacmlTarget t;
    for (const XmlNode& child : n.children) {
      if (!ci_equal(child.name, "AnyOf"))
        fail(child, "element '" + child.name + "' outside the supported subset");
      XacmlAnyOf any;
      for (const XmlNode& allof : child.children) {
        if (!ci_equal(allof.name, "AllOf"))
          fail(allof, "element '" + allof.name + "' outside the supported subset");
        XacmlAllOf all;
        for (const XmlNode& m : allof.children) all.push_back(match(m));
        if (all.empty()) fail(allof, "AllOf requires at least one Match");
        any.push_back(std::move(all));
      }
      if (any.empty()) fail(child, "AnyOf requires at least one AllOf");
      t.push_back(std::move(any));
    }
    return t;
  }

  XacmlMatch match(const XmlNode& n) {
    if (!ci_equal(n.name, "Match"))
      fail(n, "element '" + n.name + "' outside the supported subset");
    XacmlMatch m;
    m.line = n.line;
    m.col = n.col;
    std::string raw = required_attr(n, {"MatchId", "MatchID"}, "MatchId");
    m.match_id = urn_suffix(raw);
    if (!known_match_id(m.match_id)) fail(n, "unknown MatchId '" + raw + "'");
    fill_designator_and_value(n, m);
    return m;
  }

  static std::string trimmed(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

  void fill_designator_and_value(const XmlNode& n, XacmlMatch& m) {
    bool have_value = false, have_designator = false;
    for (const XmlNode& child : n.children) {
      if (ci_equal(child.name, "AttributeValue") ||
          ci_equal(child.name, "AttrValue")) {
        if (have_value) fail(child, "more than one AttributeValue");
        m.value = trimmed(child.text);
        have_value = true;
      } else if (ci_equal(child.name, "AttributeDesignator")) {
        if (have_designator) fail(child, "more than one AttributeDesignator");
        m.category = required_attr(child, {"Category"}, "Category");
        m.attribute_id = required_attr(child, {"AttributeId"}, "AttributeId");
        if (const XmlAttr* a = xml_attr(child, "DataType")) m.data_type = a->value;
        if (const XmlAttr* a = xml_attr(child, "MustBePresent"))
          m.must_be_present = a->value;
        have_designator = true;
      } else {
        fail(child, "element '" + child.name + "' outside the supported subset");
      }
    }
    if (!have_value) fail(n, "Match requires an AttributeValue");
    if (!have_designator) fail(n, "Match requires an AttributeDesignator");
  }

  XacmlCond condition(const XmlNode& n) {
    const XmlNode* expr = nullptr;
    for (const XmlNode& child : n.children) {
      if (expr) fail(child, "Condition must contain a single expression");
      expr = &child;
    }
    if (!expr) fail(n, "Condition must contain an expression");
    return apply(*expr);
  }

  XacmlCond apply(const XmlNode& n) {
    if (!ci_equal(n.name, "Apply"))
      fail(n, "element '" + n.name + "' outside the supported subset");
    std::string raw = required_attr(n, {"FunctionId"}, "FunctionId");
    std::string bare = urn_suffix(raw);
    XacmlCond c;
    c.line = n.line;
    c.col = n.col;
    if (bare == "and" || bare == "or" || bare == "not") {
      c.kind = bare == "and" ? XacmlCond::And
               : bare == "or" ? XacmlCond::Or
                              : XacmlCond::Not;
      for (const XmlNode& child : n.children) c.children.push_back(apply(child));
      if (c.children.empty())
        fail(n, "'" + bare + "' requires at least one operand");
      if (c.kind == XacmlCond::Not && c.children.size() != 1)
        fail(n, "'not' takes exactly one operand");
      return c;
    }
    if (!known_match_id(bare)) fail(n, "unknown function '" + raw + "'");
    c.kind = XacmlCond::Leaf;
    c.leaf.match_id = bare;
    c.leaf.line = n.line;
    c.leaf.col = n.col;
    fill_designator_and_value(n, c.leaf);
    return c;
  }

  std::string filename_;
};

}  // namespace detail

inline XacmlDoc parse_xacml(const std::string& text,
                            const std::string& filename = "<xacml>") {
  XmlNode root = parse_xml(text, filename);
  detail::XacmlParser parser(filename);
  return XacmlDoc{parser.parse_root(root), filename};
}

// ---------------------------------------------------------------------------
// Translation to the policy algebra.

namespace detail {

inline Guard match_to_guard(const Schema& schema, const XacmlMatch& m,
                            const std::string& source) {
  std::string key = urn_suffix(m.category) + "." + urn_suffix(m.attribute_id);
  auto ai = schema.find_attribute(key);
  if (!ai)
    throw Error(source, m.line, m.col,
                "attribute '" + key + "' is not declared in the schema");
  const Attribute& attr = schema.attribute(*ai);
  Atom atom;
  atom.key = key;
  if (m.match_id == "string-equal" || m.match_id == "integer-equal") {
    auto idx = attr.find_value(m.value);
    if (!idx)
      throw Error(source, m.line, m.col,
                  "value '" + m.value + "' is outside the domain of '" + key + "'");
    atom.pred = AtomPred::Eq;
    atom.value = attr.value_name(*idx);
    return guard_from_atom(std::move(atom));
  }
  if (m.match_id == "integer-greater-than") {
    if (attr.kind != AttrKind::Int)
      throw Error(source, m.line, m.col,
                  "integer-greater-than on non-integer attribute '" + key + "'");
    long bound;
    if (!parse_long(m.value, bound))
      throw Error(source, m.line, m.col,
                  "value '" + m.value + "' is not an integer");
    atom.pred = AtomPred::Gt;
    atom.value = std::to_string(bound);
    return guard_from_atom(std::move(atom));
  }
  // string-regexp-match: the concrete policy syntax has no regular-expression
  // atom, so lower the pattern to the set of matching domain values.
  Atom probe;
  probe.pred = AtomPred::Regex;
  probe.key = key;
  probe.value = m.value;
  std::vector<bool> set;
  try {
    set = atom_to_set(schema, probe);
  } catch (const Error& e) {
    throw Error(source, m.line, m.col, e.message());
  }
  SetAtom r = atom_from_set(schema, *ai, set);
  switch (r.kind) {
    case SetAtom::Empty: return guard_bottom();
    case SetAtom::Full: return guard_top();
    default: return guard_from_atom(std::move(r.atom));
  }
}

inline Guard target_to_guard(const Schema& schema, const XacmlTarget& t,
                             const std::string& source,
                             const GuardLimits& limits) {
  Guard conj = guard_top();
  for (const XacmlAnyOf& any : t) {
    Guard disj = guard_bottom();
    for (const XacmlAllOf& all : any) {
      Guard g = guard_top();
      for (const XacmlMatch& m : all)
        g = guard_and(schema, g, match_to_guard(schema, m, source), limits);
      disj = guard_or(disj, g);
    }
    conj = guard_and(schema, conj, disj, limits);
  }
  return conj;
}

inline Guard cond_to_guard(const Schema& schema, const XacmlCond& c,
                           const std::string& source, const GuardLimits& limits) {
  switch (c.kind) {
    case XacmlCond::Leaf:
      return match_to_guard(schema, c.leaf, source);
    case XacmlCond::Not:
      return guard_not(schema, cond_to_guard(schema, c.children[0], source, limits),
                       limits);
    case XacmlCond::And: {
      Guard g = guard_top();
      for (const XacmlCond& child : c.children)
        g = guard_and(schema, g, cond_to_guard(schema, child, source, limits), limits);
      return g;
    }
    case XacmlCond::Or: {
      Guard g = guard_bottom();
      for (const XacmlCond& child : c.children)
        g = guard_or(g, cond_to_guard(schema, child, source, limits));
      return g;
    }
  }
  throw Error("malformed condition");
}

}  // namespace detail

// Fold translated children with a combining algorithm. `policy_level` is
// true when combining policies inside a PolicySet; only-one-applicable is
// restricted to that level.
inline PolicyPtr expand_alg(const std::string& alg,
                            const std::vector<PolicyPtr>& children,
                            bool policy_level) {
  if (children.empty()) throw Error("combining over an empty policy list");
  if (alg == "permit-overrides" || alg == "ordered-permit-overrides")
    return combine_nary(PolicyOp::Pov, children);
  if (alg == "deny-overrides") return combine_nary(PolicyOp::Dov, children);
  if (alg == "first-applicable") return combine_nary(PolicyOp::Seq, children);
  if (alg == "only-one-applicable") {
    if (!policy_level)
      throw Error("only-one-applicable is a policy-combining algorithm");
    return ooa_nary(children);
  }
  if (alg == "deny-unless-permit")
    return seq(det(combine_nary(PolicyOp::Pov, children)), zero_policy());
  if (alg == "permit-unless-deny")
    return seq(det(combine_nary(PolicyOp::Dov, children)), one_policy());
  throw Error("unknown combining algorithm '" + alg + "'");
}

namespace detail {

inline PolicyPtr translate_node(const Schema& schema, const XacmlPolicy& p,
                                const std::string& source,
                                const GuardLimits& limits) {
  std::vector<PolicyPtr> children;
  if (p.is_policy_set) {
    for (const XacmlPolicy& child : p.children)
      children.push_back(translate_node(schema, child, source, limits));
  } else {
    for (const XacmlRule& r : p.rules) {
      Guard phi = target_to_guard(schema, r.target, source, limits);
      if (r.condition)
        phi = guard_and(schema, phi,
                        cond_to_guard(schema, *r.condition, source, limits), limits);
      children.push_back(r.effect == "Permit" ? rule(phi, guard_bottom())
                                              : rule(guard_bottom(), phi));
    }
  }
  if (!p.is_policy_set && p.alg == "only-one-applicable")
    throw Error(source, p.line, p.col,
                "only-one-applicable is a policy-combining algorithm and "
                "cannot combine rules");
  PolicyPtr body = expand_alg(p.alg, children, p.is_policy_set);
  return scope(target_to_guard(schema, p.target, source, limits), body);
}

}  // namespace detail

inline PolicyPtr translate(const Schema& schema, const XacmlDoc& doc,
                           const GuardLimits& limits = {}) {
  return detail::translate_node(schema, doc.root, doc.source, limits);
}

}  // namespace sepl

#endif  // SEPL_XACML_HPP
