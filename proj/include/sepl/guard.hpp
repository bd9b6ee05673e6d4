#ifndef SEPL_GUARD_HPP
#define SEPL_GUARD_HPP

// Guards: predicates over requests, kept in disjunctive normal form.
// A Guard is a disjunction of Boxes; a Box is a conjunction of Atoms,
// at most one per attribute; an Atom constrains one attribute.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "sepl/error.hpp"
#include "sepl/schema.hpp"
#include "sepl/trivalue.hpp"

namespace sepl {

enum class AtomPred { InSet, Eq, Neq, Lt, Le, Gt, Ge, Regex, Any, None };

struct Atom {
  AtomPred pred = AtomPred::Any;
  std::string key;
  std::vector<std::string> values;  // InSet members
  std::string value;                // Eq/Neq/Lt/Le/Gt/Ge operand, Regex pattern

  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Box {
  std::vector<Atom> atoms;  // sorted by schema attribute index
  friend bool operator==(const Box&, const Box&) = default;
};

struct Guard {
  std::vector<Box> boxes;  // empty vector = matches nothing
  friend bool operator==(const Guard&, const Guard&) = default;
};

struct GuardLimits {
  std::size_t max_boxes = 4096;
};

inline Guard guard_bottom() { return Guard{}; }
inline Guard guard_top() { return Guard{{Box{}}}; }
inline Guard guard_from_atom(Atom a) { return Guard{{Box{{std::move(a)}}}}; }

inline bool guard_is_bottom(const Guard& g) { return g.boxes.empty(); }

// The set of attribute values an atom admits.
inline std::vector<bool> atom_to_set(const Schema& schema, const Atom& atom) {
  auto ai = schema.find_attribute(atom.key);
  if (!ai) throw Error("unknown attribute '" + atom.key + "'");
  const Attribute& attr = schema.attribute(*ai);
  std::size_t n = attr.size();
  std::vector<bool> set(n, false);
  switch (atom.pred) {
    case AtomPred::Any:
      set.assign(n, true);
      break;
    case AtomPred::None:
      break;
    case AtomPred::InSet:
      for (const auto& v : atom.values) {
        auto idx = attr.find_value(v);
        if (!idx)
          throw Error("value '" + v + "' is outside the domain of '" +
                      atom.key + "'");
        set[*idx] = true;
      }
      break;
    case AtomPred::Eq:
    case AtomPred::Neq: {
      auto idx = attr.find_value(atom.value);
      if (!idx)
        throw Error("value '" + atom.value + "' is outside the domain of '" +
                    atom.key + "'");
      if (atom.pred == AtomPred::Eq) {
        set[*idx] = true;
      } else {
        set.assign(n, true);
        set[*idx] = false;
      }
      break;
    }
    case AtomPred::Lt:
    case AtomPred::Le:
    case AtomPred::Gt:
    case AtomPred::Ge: {
      if (attr.kind != AttrKind::Int)
        throw Error("ordered comparison on enum attribute '" + atom.key + "'");
      long bound;
      if (!detail::parse_long(atom.value, bound))
        throw Error("comparison value '" + atom.value + "' is not an integer");
      for (std::size_t i = 0; i < n; ++i) {
        long v = attr.lo + static_cast<long>(i);
        bool in = atom.pred == AtomPred::Lt   ? v < bound
                  : atom.pred == AtomPred::Le ? v <= bound
                  : atom.pred == AtomPred::Gt ? v > bound
                                              : v >= bound;
        set[i] = in;
      }
      break;
    }
    case AtomPred::Regex: {
      try {
        std::regex re(atom.value, std::regex::extended);
        for (std::size_t i = 0; i < n; ++i)
          set[i] = std::regex_match(attr.value_name(i), re);
      } catch (const std::regex_error&) {
        throw Error("invalid regular expression '" + atom.value + "'");
      }
      break;
    }
  }
  return set;
}

// Truth of an atom at one request binding: unknown bindings match with
// Unknown unless the admitted set is the full domain (True) or empty (False).
inline Tri atom_eval(const Schema& schema, const Atom& atom,
                     const std::optional<std::uint32_t>& binding) {
  std::vector<bool> set = atom_to_set(schema, atom);
  if (binding) return set[*binding] ? Tri::T : Tri::F;
  bool any = false, all = true;
  for (bool b : set) {
    any = any || b;
    all = all && b;
  }
  if (all) return Tri::T;
  if (!any) return Tri::F;
  return Tri::U;
}

inline Tri guard_eval(const Schema& schema, const Guard& g, const Request& req) {
  Tri result = Tri::F;
  for (const Box& box : g.boxes) {
    Tri box_val = Tri::T;
    for (const Atom& atom : box.atoms) {
      auto ai = schema.find_attribute(atom.key);
      if (!ai) throw Error("unknown attribute '" + atom.key + "'");
      box_val = tri_and(box_val, atom_eval(schema, atom, req.values[*ai]));
      if (box_val == Tri::F) break;
    }
    result = tri_or(result, box_val);
    if (result == Tri::T) break;
  }
  return result;
}

// The set of fully bound points a guard matches, indexed like Schema points.
inline std::vector<bool> guard_region(const Schema& schema, const Guard& g) {
  std::size_t n = schema.point_count();
  std::vector<bool> region(n, false);
  for (const Box& box : g.boxes) {
    struct Constraint {
      std::size_t stride, size;
      std::vector<bool> set;
    };
    std::vector<Constraint> constraints;
    constraints.reserve(box.atoms.size());
    for (const Atom& atom : box.atoms) {
      auto ai = schema.find_attribute(atom.key);
      if (!ai) throw Error("unknown attribute '" + atom.key + "'");
      constraints.push_back({schema.stride(*ai), schema.attribute(*ai).size(),
                             atom_to_set(schema, atom)});
    }
    for (std::size_t idx = 0; idx < n; ++idx) {
      if (region[idx]) continue;
      bool ok = true;
      for (const auto& c : constraints) {
        if (!c.set[(idx / c.stride) % c.size]) {
          ok = false;
          break;
        }
      }
      if (ok) region[idx] = true;
    }
  }
  return region;
}

namespace detail {

struct SetAtom {
  enum Kind { Empty, Full, Some } kind;
  Atom atom;
};

// Render a value set back to an atom over the given attribute (domain order).
inline SetAtom atom_from_set(const Schema& schema, std::size_t attr_index,
                             const std::vector<bool>& set) {
  const Attribute& attr = schema.attribute(attr_index);
  bool any = false, all = true;
  for (bool b : set) {
    any = any || b;
    all = all && b;
  }
  if (!any) return {SetAtom::Empty, {}};
  if (all) return {SetAtom::Full, {}};
  Atom atom;
  atom.pred = AtomPred::InSet;
  atom.key = attr.name;
  for (std::size_t i = 0; i < set.size(); ++i)
    if (set[i]) atom.values.push_back(attr.value_name(i));
  return {SetAtom::Some, std::move(atom)};
}

inline void sort_box(const Schema& schema, Box& box) {
  std::stable_sort(box.atoms.begin(), box.atoms.end(),
                   [&](const Atom& a, const Atom& b) {
                     return *schema.find_attribute(a.key) <
                            *schema.find_attribute(b.key);
                   });
}

// Conjunction of two boxes; nullopt when the intersection is empty.
inline std::optional<Box> box_and(const Schema& schema, const Box& a,
                                  const Box& b) {
  Box out;
  std::vector<const Atom*> pending;
  for (const Atom& atom : a.atoms) pending.push_back(&atom);
  for (const Atom& atom : b.atoms) {
    auto ai = *schema.find_attribute(atom.key);
    const Atom* partner = nullptr;
    for (auto it = pending.begin(); it != pending.end(); ++it) {
      if (*schema.find_attribute((*it)->key) == ai) {
        partner = *it;
        pending.erase(it);
        break;
      }
    }
    if (!partner) {
      pending.push_back(&atom);
      continue;
    }
    std::vector<bool> s1 = atom_to_set(schema, *partner);
    std::vector<bool> s2 = atom_to_set(schema, atom);
    std::vector<bool> s(s1.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = s1[i] && s2[i];
    if (s == s1) {
      out.atoms.push_back(*partner);
      continue;
    }
    if (s == s2) {
      out.atoms.push_back(atom);
      continue;
    }
    SetAtom r = atom_from_set(schema, ai, s);
    if (r.kind == SetAtom::Empty) return std::nullopt;
    if (r.kind == SetAtom::Some) out.atoms.push_back(std::move(r.atom));
  }
  for (const Atom* atom : pending) out.atoms.push_back(*atom);
  sort_box(schema, out);
  return out;
}

}  // namespace detail

inline Guard guard_or(const Guard& a, const Guard& b) {
  Guard out = a;
  out.boxes.insert(out.boxes.end(), b.boxes.begin(), b.boxes.end());
  return out;
}

inline Guard guard_and(const Schema& schema, const Guard& a, const Guard& b,
                       const GuardLimits& limits = {}) {
  Guard out;
  for (const Box& ba : a.boxes) {
    for (const Box& bb : b.boxes) {
      auto merged = detail::box_and(schema, ba, bb);
      if (merged) out.boxes.push_back(std::move(*merged));
      if (out.boxes.size() > limits.max_boxes)
        throw Error("guard normalization exceeded the box cap of " +
                    std::to_string(limits.max_boxes));
    }
  }
  return out;
}

inline Guard guard_not(const Schema& schema, const Guard& g,
                       const GuardLimits& limits = {}) {
  Guard acc = guard_top();
  for (const Box& box : g.boxes) {
    // Complement of one box: disjunction of per-atom complements.
    Guard comp = guard_bottom();
    bool comp_is_top = false;
    for (const Atom& atom : box.atoms) {
      std::vector<bool> set = atom_to_set(schema, atom);
      set.flip();
      auto ai = *schema.find_attribute(atom.key);
      detail::SetAtom r = detail::atom_from_set(schema, ai, set);
      if (r.kind == detail::SetAtom::Full) {
        comp_is_top = true;
        break;
      }
      if (r.kind == detail::SetAtom::Some)
        comp.boxes.push_back(Box{{std::move(r.atom)}});
    }
    if (comp_is_top) continue;  // this conjunct is vacuous
    acc = guard_and(schema, acc, comp, limits);
  }
  return acc;
}

inline std::string print_atom(const Atom& atom) {
  switch (atom.pred) {
    case AtomPred::InSet: {
      std::string s = atom.key + " in {";
      for (std::size_t i = 0; i < atom.values.size(); ++i) {
        if (i) s += ", ";
        s += atom.values[i];
      }
      return s + "}";
    }
    case AtomPred::Eq: return atom.key + " = " + atom.value;
    case AtomPred::Neq: return atom.key + " != " + atom.value;
    case AtomPred::Lt: return atom.key + " < " + atom.value;
    case AtomPred::Le: return atom.key + " <= " + atom.value;
    case AtomPred::Gt: return atom.key + " > " + atom.value;
    case AtomPred::Ge: return atom.key + " >= " + atom.value;
    default:
      throw Error("atom kind has no concrete syntax");
  }
}

inline std::string print_guard(const Guard& g) {
  if (g.boxes.empty()) return "none";
  std::string s;
  for (std::size_t bi = 0; bi < g.boxes.size(); ++bi) {
    if (bi) s += " or ";
    s += "{";
    const Box& box = g.boxes[bi];
    for (std::size_t i = 0; i < box.atoms.size(); ++i) {
      if (i) s += ", ";
      s += print_atom(box.atoms[i]);
    }
    s += "}";
  }
  return s;
}

}  // namespace sepl

#endif  // SEPL_GUARD_HPP
