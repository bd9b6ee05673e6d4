#ifndef SEPL_SCHEMA_HPP
#define SEPL_SCHEMA_HPP

// Finite attribute schemas, the induced request-point space, and the
// line-oriented schema / request file formats.

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sepl/error.hpp"

namespace sepl {

enum class AttrKind { Enum, Int };

struct Attribute {
  std::string name;
  AttrKind kind = AttrKind::Enum;
  std::vector<std::string> labels;  // Enum: domain values in declaration order.
  long lo = 0, hi = -1;             // Int: inclusive range.

  std::size_t size() const {
    return kind == AttrKind::Enum ? labels.size()
                                  : static_cast<std::size_t>(hi - lo + 1);
  }

  std::string value_name(std::size_t i) const {
    return kind == AttrKind::Enum ? labels[i]
                                  : std::to_string(lo + static_cast<long>(i));
  }

  std::optional<std::uint32_t> find_value(const std::string& text) const {
    if (kind == AttrKind::Enum) {
      for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == text) return static_cast<std::uint32_t>(i);
      return std::nullopt;
    }
    errno = 0;
    char* end = nullptr;
    long v = std::strtol(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0' || errno != 0) return std::nullopt;
    if (v < lo || v > hi) return std::nullopt;
    return static_cast<std::uint32_t>(v - lo);
  }
};

// Upper bound on enumerable domain points; overridable per process.
inline std::size_t point_cap() {
  if (const char* env = std::getenv("SEPL_POINT_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1000000;
}

class Schema {
 public:
  void add_attribute(Attribute attr) {
    if (attr.name.empty()) throw Error("attribute name is empty");
    if (index_.count(attr.name))
      throw Error("duplicate attribute '" + attr.name + "'");
    if (attr.kind == AttrKind::Enum) {
      if (attr.labels.empty())
        throw Error("attribute '" + attr.name + "' has an empty domain");
      std::unordered_map<std::string, int> seen;
      for (const auto& l : attr.labels)
        if (++seen[l] > 1)
          throw Error("attribute '" + attr.name + "' repeats value '" + l + "'");
    } else if (attr.lo > attr.hi) {
      throw Error("attribute '" + attr.name + "' has an empty range");
    }
    std::size_t cap = point_cap();
    std::size_t sz = attr.size();
    if (sz == 0 || point_count_ > cap / sz)
      throw Error("schema domain exceeds the point cap of " +
                  std::to_string(cap) +
                  " (set SEPL_POINT_CAP to raise the limit)");
    index_[attr.name] = attrs_.size();
    attrs_.push_back(std::move(attr));
    point_count_ *= sz;
    recompute();
  }

  std::size_t attribute_count() const { return attrs_.size(); }
  const Attribute& attribute(std::size_t i) const { return attrs_[i]; }

  std::optional<std::size_t> find_attribute(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // Number of fully bound request points (product of domain sizes).
  std::size_t point_count() const { return point_count_; }

  // Stride of attribute i in the point index (first attribute varies slowest).
  std::size_t stride(std::size_t i) const { return strides_[i]; }

  std::size_t index_of(const std::vector<std::uint32_t>& values) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < attrs_.size(); ++i)
      idx += values[i] * strides_[i];
    return idx;
  }

  std::vector<std::uint32_t> point_of(std::size_t idx) const {
    std::vector<std::uint32_t> values(attrs_.size());
    for (std::size_t i = 0; i < attrs_.size(); ++i) {
      values[i] = static_cast<std::uint32_t>((idx / strides_[i]) % attrs_[i].size());
    }
    return values;
  }

  std::string point_text(std::size_t idx) const {
    auto values = point_of(idx);
    std::string out;
    for (std::size_t i = 0; i < attrs_.size(); ++i) {
      if (i) out += ",";
      out += attrs_[i].value_name(values[i]);
    }
    return out;
  }

 private:
  void recompute() {
    strides_.assign(attrs_.size(), 1);
    std::size_t count = 1;
    for (std::size_t i = attrs_.size(); i-- > 0;) {
      strides_[i] = count;
      count *= attrs_[i].size();
    }
  }

  std::vector<Attribute> attrs_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> strides_;
  std::size_t point_count_ = 1;
};

// A request binds each schema attribute to a value or leaves it unknown.
struct Request {
  std::vector<std::optional<std::uint32_t>> values;

  bool fully_bound() const {
    for (const auto& v : values)
      if (!v) return false;
    return true;
  }
};

struct RequestParse {
  Request request;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

inline std::string strip_comment(const std::string& line) {
  std::size_t h = line.find('#');
  return h == std::string::npos ? line : line.substr(0, h);
}

inline std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t c = s.find(sep, start);
    if (c == std::string::npos) {
      parts.push_back(strip(s.substr(start)));
      break;
    }
    parts.push_back(strip(s.substr(start, c - start)));
    start = c + 1;
  }
  return parts;
}

inline bool parse_long(const std::string& s, long& out) {
  errno = 0;
  char* end = nullptr;
  long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0' || errno != 0) return false;
  out = v;
  return true;
}

}  // namespace detail

// Schema files: one declaration per line, '#' comments.
//   attribute <name> : enum { v1, v2, ... }
//   attribute <name> : int [lo, hi]
inline Schema parse_schema(const std::string& text,
                           const std::string& filename = "<schema>") {
  Schema schema;
  auto lines = detail::split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    int line_no = static_cast<int>(ln + 1);
    std::string line = detail::strip(detail::strip_comment(lines[ln]));
    if (line.empty()) continue;
    const std::string kw = "attribute";
    if (line.compare(0, kw.size(), kw) != 0 ||
        (line.size() > kw.size() && line[kw.size()] != ' ' &&
         line[kw.size()] != '\t'))
      throw Error(filename, line_no, 1, "expected 'attribute <name> : ...'");
    std::string rest = detail::strip(line.substr(kw.size()));
    std::size_t colon = rest.find(':');
    if (colon == std::string::npos)
      throw Error(filename, line_no, 1, "expected ':' after attribute name");
    std::string name = detail::strip(rest.substr(0, colon));
    std::string decl = detail::strip(rest.substr(colon + 1));
    if (name.empty())
      throw Error(filename, line_no, 1, "attribute name is empty");
    try {
      Attribute attr;
      attr.name = name;
      if (decl.compare(0, 4, "enum") == 0) {
        attr.kind = AttrKind::Enum;
        std::size_t lb = decl.find('{'), rb = decl.rfind('}');
        if (lb == std::string::npos || rb == std::string::npos || rb < lb)
          throw Error("expected 'enum { v1, v2, ... }'");
        for (auto& v : detail::split_list(decl.substr(lb + 1, rb - lb - 1), ',')) {
          if (v.empty()) throw Error("empty value in enum domain");
          attr.labels.push_back(v);
        }
      } else if (decl.compare(0, 3, "int") == 0) {
        attr.kind = AttrKind::Int;
        std::size_t lb = decl.find('['), rb = decl.rfind(']');
        if (lb == std::string::npos || rb == std::string::npos || rb < lb)
          throw Error("expected 'int [lo, hi]'");
        auto bounds = detail::split_list(decl.substr(lb + 1, rb - lb - 1), ',');
        if (bounds.size() != 2 || !detail::parse_long(bounds[0], attr.lo) ||
            !detail::parse_long(bounds[1], attr.hi))
          throw Error("expected 'int [lo, hi]' with integer bounds");
      } else {
        throw Error("attribute type must be 'enum' or 'int'");
      }
      schema.add_attribute(std::move(attr));
    } catch (const Error& e) {
      if (e.has_position()) throw;
      throw Error(filename, line_no, 1, e.message());
    }
  }
  return schema;
}

// Request files: one binding per line, '#' comments.
//   <name> = <value>     bind to a domain value
//   <name> = ?           explicitly unknown
// Attributes not mentioned are unknown; each produces a warning.
inline RequestParse parse_request(const Schema& schema, const std::string& text,
                                  const std::string& filename = "<request>") {
  RequestParse out;
  out.request.values.assign(schema.attribute_count(), std::nullopt);
  std::vector<bool> mentioned(schema.attribute_count(), false);
  auto lines = detail::split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    int line_no = static_cast<int>(ln + 1);
    std::string line = detail::strip(detail::strip_comment(lines[ln]));
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(filename, line_no, 1, "expected '<attribute> = <value>'");
    std::string name = detail::strip(line.substr(0, eq));
    std::string value = detail::strip(line.substr(eq + 1));
    auto ai = schema.find_attribute(name);
    if (!ai)
      throw Error(filename, line_no, 1, "unknown attribute '" + name + "'");
    if (mentioned[*ai])
      throw Error(filename, line_no, 1, "attribute '" + name + "' bound twice");
    mentioned[*ai] = true;
    if (value == "?") continue;
    auto v = schema.attribute(*ai).find_value(value);
    if (!v)
      throw Error(filename, line_no, 1,
                  "value '" + value + "' is outside the domain of '" + name + "'");
    out.request.values[*ai] = *v;
  }
  for (std::size_t i = 0; i < schema.attribute_count(); ++i)
    if (!mentioned[i])
      out.warnings.push_back("attribute '" + schema.attribute(i).name +
                             "' is not bound; treating it as unknown");
  return out;
}

}  // namespace sepl

#endif  // SEPL_SCHEMA_HPP
