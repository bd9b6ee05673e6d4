// sepl — command-line front end for the policy algebra library.
//
// Subcommands: translate, eval, analyze, compare, distance, laws.
// Exit codes: 0 success; 1 input error (parse/schema/translation, with
// file:line:col on stderr where available); 2 usage error; 3 analysis found
// issues or the law verdicts deviate from the shipped profile.

#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sepl/sepl.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sepl::Error(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with_ci(const std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size()) return false;
  for (std::size_t i = 0; i < suffix.size(); ++i) {
    char a = static_cast<char>(
        std::tolower(static_cast<unsigned char>(s[s.size() - suffix.size() + i])));
    if (a != suffix[i]) return false;
  }
  return true;
}

bool looks_like_xacml(const std::string& path) {
  return ends_with_ci(path, ".xml") || ends_with_ci(path, ".xacml");
}

std::string replace_extension(const std::string& path, const std::string& ext) {
  std::size_t slash = path.find_last_of("/\\");
  std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + ext;
  return path.substr(0, dot) + ext;
}

// "role=r1,object=o2,action=a1" for domain point idx.
std::string point_label(const sepl::Schema& schema, std::size_t idx) {
  std::vector<std::uint32_t> values = schema.point_of(idx);
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += schema.attribute(i).name + "=" + schema.attribute(i).value_name(values[i]);
  }
  return out;
}

sepl::Schema load_schema(const std::string& path) {
  return sepl::parse_schema(read_file(path), path);
}

// Loads either a .sepl policy or an XACML document (by extension).
sepl::PolicyPtr load_policy(const sepl::Schema& schema, const std::string& path) {
  std::string text = read_file(path);
  if (looks_like_xacml(path)) {
    sepl::XacmlDoc doc = sepl::parse_xacml(text, path);
    return sepl::translate(schema, doc);
  }
  return sepl::parse_policy(text, schema, path);
}

struct TranslateOpts {
  std::string input, schema, output;
};

int cmd_translate(const TranslateOpts& opt) {
  sepl::Schema schema = load_schema(opt.schema);
  sepl::XacmlDoc doc = sepl::parse_xacml(read_file(opt.input), opt.input);
  sepl::PolicyPtr policy = sepl::translate(schema, doc);
  std::string out_path =
      opt.output.empty() ? replace_extension(opt.input, ".sepl") : opt.output;
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw sepl::Error(out_path + ": cannot open file for writing");
  out << "# id: " << doc.root.id << "\n";
  out << "# version: " << doc.root.version << "\n";
  out << sepl::print_policy(policy) << "\n";
  if (!out.flush()) throw sepl::Error(out_path + ": write failed");
  std::cout << "id: " << doc.root.id << "\n";
  std::cout << "version: " << doc.root.version << "\n";
  std::cout << "output: " << out_path << "\n";
  return 0;
}

struct EvalOpts {
  std::string policy, schema, request, format = "text";
};

int cmd_eval(const EvalOpts& opt) {
  sepl::Schema schema = load_schema(opt.schema);
  sepl::PolicyPtr policy = load_policy(schema, opt.policy);
  sepl::RequestParse parsed =
      sepl::parse_request(schema, read_file(opt.request), opt.request);
  for (const std::string& w : parsed.warnings) std::cerr << "warning: " << w << "\n";
  sepl::DecisionPair pair = sepl::eval_rel(schema, policy, parsed.request);
  sepl::Decision decision = sepl::classify(pair);
  if (opt.format == "structured") {
    std::cout << "sepl-report 1\n";
    std::cout << "kind=eval\n";
    std::cout << "policy=" << opt.policy << "\n";
    std::cout << "decision=" << sepl::decision_token(decision) << "\n";
    std::cout << "accept=" << sepl::tri_char(pair.accept) << "\n";
    std::cout << "deny=" << sepl::tri_char(pair.deny) << "\n";
  } else {
    std::cout << sepl::decision_token(decision) << "\n";
  }
  return 0;
}

struct AnalyzeOpts {
  std::string policy, schema, format = "text";
};

int cmd_analyze(const AnalyzeOpts& opt) {
  sepl::Schema schema = load_schema(opt.schema);
  sepl::PolicyPtr policy = load_policy(schema, opt.policy);
  sepl::AnalysisReport rep = sepl::incompleteness(schema, policy);
  auto samples_text = [&](const sepl::RegionSummary& s) {
    std::string out;
    for (std::size_t i = 0; i < s.samples.size(); ++i) {
      if (i) out += "; ";
      out += point_label(schema, s.samples[i]);
    }
    return out;
  };
  if (opt.format == "structured") {
    std::cout << "sepl-report 1\n";
    std::cout << "kind=analyze\n";
    std::cout << "policy=" << opt.policy << "\n";
    std::cout << "domain_size=" << rep.domain_size << "\n";
    std::cout << "not_applicable_count=" << rep.not_applicable.count << "\n";
    for (std::size_t i : rep.not_applicable.samples)
      std::cout << "not_applicable_sample=" << point_label(schema, i) << "\n";
    std::cout << "indeterminate_count=" << rep.indeterminate.count << "\n";
    for (std::size_t i : rep.indeterminate.samples)
      std::cout << "indeterminate_sample=" << point_label(schema, i) << "\n";
    std::cout << "conflict_count=" << rep.conflict.count << "\n";
    for (std::size_t i : rep.conflict.samples)
      std::cout << "conflict_sample=" << point_label(schema, i) << "\n";
    std::cout << "complete=" << (rep.complete() ? "true" : "false") << "\n";
    std::cout << "conflict_free=" << (rep.conflict_free() ? "true" : "false") << "\n";
  } else {
    std::cout << "domain size: " << rep.domain_size << "\n";
    std::cout << "not applicable: " << rep.not_applicable.count;
    if (rep.not_applicable.count)
      std::cout << " (samples: " << samples_text(rep.not_applicable) << ")";
    std::cout << "\n";
    std::cout << "indeterminate: " << rep.indeterminate.count;
    if (rep.indeterminate.count)
      std::cout << " (samples: " << samples_text(rep.indeterminate) << ")";
    std::cout << "\n";
    std::cout << "conflict: " << rep.conflict.count;
    if (rep.conflict.count)
      std::cout << " (samples: " << samples_text(rep.conflict) << ")";
    std::cout << "\n";
    std::cout << "complete: " << (rep.complete() ? "yes" : "no") << "\n";
    std::cout << "conflict free: " << (rep.conflict_free() ? "yes" : "no") << "\n";
  }
  return rep.complete() && rep.conflict_free() ? 0 : 3;
}

struct CompareOpts {
  std::string left, right, schema;
};

int cmd_compare(const CompareOpts& opt) {
  sepl::Schema schema = load_schema(opt.schema);
  sepl::PolicyPtr left = load_policy(schema, opt.left);
  sepl::PolicyPtr right = load_policy(schema, opt.right);
  sepl::CompareReport rep = sepl::compare(schema, left, right);
  std::cout << sepl::relation_token(rep.relation) << "\n";
  auto witnesses = [&](const char* label, const std::vector<std::size_t>& pts) {
    for (std::size_t i : pts)
      std::cout << label << " witness: " << point_label(schema, i) << "\n";
  };
  witnesses("accept left-only", rep.accept_left_not_right);
  witnesses("deny left-only", rep.deny_left_not_right);
  witnesses("accept right-only", rep.accept_right_not_left);
  witnesses("deny right-only", rep.deny_right_not_left);
  std::cout << "applicability disjoint: "
            << (rep.applicability_disjoint ? "yes" : "no") << "\n";
  return 0;
}

struct DistanceOpts {
  std::string left, right, schema, metric;
};

int cmd_distance(const DistanceOpts& opt) {
  sepl::Schema schema = load_schema(opt.schema);
  sepl::PolicyPtr left = load_policy(schema, opt.left);
  sepl::PolicyPtr right = load_policy(schema, opt.right);
  sepl::DistanceMetric metric = opt.metric == "hamming"
                                    ? sepl::DistanceMetric::Hamming
                                    : sepl::DistanceMetric::Jaccard;
  sepl::DistanceResult d = sepl::distance(schema, left, right, metric);
  std::cout << d.value() << " (" << d.numerator << "/" << d.denominator << ")\n";
  return 0;
}

struct LawsOpts {
  std::string schema;
  std::size_t samples = sepl::LawSampling{}.samples;
  std::uint64_t seed = sepl::LawSampling{}.seed;
};

int cmd_laws(const LawsOpts& opt) {
  sepl::Schema schema = load_schema(opt.schema);
  sepl::LawSampling sampling;
  sampling.samples = opt.samples;
  sampling.seed = opt.seed;
  std::size_t mismatches = 0;
  for (const sepl::LawSpec& law : sepl::law_catalog()) {
    sepl::LawVerdict v = sepl::check_law(schema, law, sampling);
    bool as_expected = v.pass == law.expected_pass;
    if (!as_expected) ++mismatches;
    std::cout << "law " << law.id << " (" << law.name << "): "
              << (v.pass ? "Pass" : "Counterexample") << " ("
              << v.instances_checked << " instantiations)";
    if (!as_expected)
      std::cout << " [expected " << (law.expected_pass ? "Pass" : "Counterexample")
                << "]";
    std::cout << "\n";
    if (!v.pass && v.counterexample) {
      const sepl::LawCounterexample& ce = *v.counterexample;
      for (std::size_t i = 0; i < ce.instantiation.size(); ++i)
        std::cout << "  P" << (i + 1) << " = "
                  << sepl::print_policy(ce.instantiation[i]) << "\n";
      std::cout << "  point: " << point_label(schema, ce.point) << "\n";
      std::cout << "  lhs = " << sepl::pair_text(ce.lhs)
                << ", rhs = " << sepl::pair_text(ce.rhs) << "\n";
    }
  }
  if (mismatches) {
    std::cerr << "laws: " << mismatches
              << " verdict(s) deviate from the shipped profile\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SePL policy algebra tool"};
  app.require_subcommand(1);

  TranslateOpts topt;
  CLI::App* t = app.add_subcommand("translate", "Translate XACML to a .sepl policy");
  t->add_option("input", topt.input, "XACML policy file")->required();
  t->add_option("--schema", topt.schema, "attribute schema file")->required();
  t->add_option("-o,--output", topt.output, "output .sepl path");

  EvalOpts eopt;
  CLI::App* e = app.add_subcommand("eval", "Evaluate a policy on one request");
  e->add_option("policy", eopt.policy, "policy file (.sepl or XACML)")->required();
  e->add_option("--schema", eopt.schema, "attribute schema file")->required();
  e->add_option("--request", eopt.request, "request file")->required();
  e->add_option("--format", eopt.format, "output format")
      ->check(CLI::IsMember({"text", "structured"}));

  AnalyzeOpts aopt;
  CLI::App* a = app.add_subcommand("analyze", "Report completeness and conflicts");
  a->add_option("policy", aopt.policy, "policy file (.sepl or XACML)")->required();
  a->add_option("--schema", aopt.schema, "attribute schema file")->required();
  a->add_option("--format", aopt.format, "output format")
      ->check(CLI::IsMember({"text", "structured"}));

  CompareOpts copt;
  CLI::App* c = app.add_subcommand("compare", "Compare two policies' regions");
  c->add_option("left", copt.left, "first policy file")->required();
  c->add_option("right", copt.right, "second policy file")->required();
  c->add_option("--schema", copt.schema, "attribute schema file")->required();

  DistanceOpts dopt;
  CLI::App* d = app.add_subcommand("distance", "Distance between two policies");
  d->add_option("left", dopt.left, "first policy file")->required();
  d->add_option("right", dopt.right, "second policy file")->required();
  d->add_option("--schema", dopt.schema, "attribute schema file")->required();
  d->add_option("--metric", dopt.metric, "distance metric")
      ->required()
      ->check(CLI::IsMember({"hamming", "jaccard"}));

  LawsOpts lopt;
  CLI::App* l = app.add_subcommand("laws", "Check the algebraic law catalog");
  l->add_option("--schema", lopt.schema, "attribute schema file")->required();
  l->add_option("--samples", lopt.samples, "instantiations per law");
  l->add_option("--seed", lopt.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& ex) {
    return app.exit(ex);
  } catch (const CLI::ParseError& ex) {
    app.exit(ex);
    return 2;
  }

  try {
    if (t->parsed()) return cmd_translate(topt);
    if (e->parsed()) return cmd_eval(eopt);
    if (a->parsed()) return cmd_analyze(aopt);
    if (c->parsed()) return cmd_compare(copt);
    if (d->parsed()) return cmd_distance(dopt);
    if (l->parsed()) return cmd_laws(lopt);
  } catch (const sepl::Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 2;
}
