#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <ostream>

#include "qibg/bigcell.hpp"
#include "qibg/decompose.hpp"
#include "qibg/harness.hpp"
#include "qibg/matrix_io.hpp"
#include "qibg/rootsys.hpp"
#include "qibg/rootsys_io.hpp"

namespace qibg::cli {

namespace {

namespace fs = std::filesystem;

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty())
    out << text;
  else
    write_file_atomic(path, text);
}

int cmd_decompose(const std::string& matrix_path, const std::string& strategy_name, std::uint64_t seed,
                  const std::string& out_path, std::ostream& out, std::ostream& err) {
  Strategy strategy;
  IntegerMatrix m;
  try {
    strategy = parse_strategy(strategy_name);
    m = integer_matrix_from_json(read_json_file(matrix_path));
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  std::optional<UnimodularMatrix> gamma;
  try {
    gamma.emplace(m);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }

  Factorization f = strategy == Strategy::ColumnMajor
                        ? decompose_column_major(*gamma)
                        : decompose_clockwise(*gamma, sample_type_a_ordering(gamma->n(), seed));
  VerificationReport v = verify(*gamma, f);
  // Without --out the JSON owns stdout and the summary moves to stderr.
  std::ostream& summary = out_path.empty() ? err : out;
  emit(out, out_path, to_json(f).dump(2) + "\n");
  summary << "factors: " << f.factors.size() << " (bound " << factor_bound(gamma->n()) << ")\n";
  summary << "max ratio: " << v.stats.max_ratio << '\n';
  return v.passed() ? kOk : kCheckFailed;
}

int cmd_verify(const std::string& matrix_path, const std::string& factors_path, std::ostream& out, std::ostream& err) {
  try {
    UnimodularMatrix gamma = unimodular_from_json(read_json_file(matrix_path));
    Factorization f = factorization_from_json(read_json_file(factors_path));
    VerificationReport r = verify(gamma, f);
    out << to_json(r).dump(2) << '\n';
    return r.passed() ? kOk : kCheckFailed;
  } catch (const NotUnimodular& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

int cmd_bigcell(const std::string& matrix_path, std::ostream& out, std::ostream& err) {
  RationalMatrix g;
  try {
    g = rational_matrix_from_json(read_json_file(matrix_path));
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  try {
    nlohmann::json doc;
    nlohmann::json minors = nlohmann::json::array();
    for (const auto& m : corner_minors(g)) minors.push_back(to_string(m));
    doc["corner_minors"] = minors;
    const bool member = in_big_cell(g);
    doc["in_big_cell"] = member;
    if (member) {
      UlFactorization f = ul_factorize(g);
      doc["u_plus"] = to_json(f.u_plus);
      doc["p_minus"] = to_json(f.p_minus);
      bool integral = true;
      for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j) integral = integral && g(i, j).get_den() == 1;
      if (integral && g.n() >= 2 && determinant(g) == 1)
        doc["bounds"] = to_json(denominator_and_norm_check(UnimodularMatrix(to_integer(g))));
    }
    out << doc.dump(2) << '\n';
    return member ? kOk : kCheckFailed;
  } catch (const SingularMatrix& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
}

int cmd_roots(const std::string& family_name, int rank, std::uint64_t seed, const std::string& svg_path,
              const std::string& json_path, std::ostream& out, std::ostream& err) {
  std::optional<RootSystem> rs;
  try {
    rs = RootSystem::build(parse_family(family_name), rank);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  Projection p;
  try {
    p = sample_projection(*rs, seed);
  } catch (const ProjectionSamplingError& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  ClassOrdering ordering = class_ordering(*rs, p);
  InvariantReport report = verify_notation_invariants(*rs, p);

  out << rs->name() << ": " << rs->size() << " roots, " << ordering.size() << " classes\n";
  for (std::size_t i = 0; i < ordering.size(); ++i) {
    out << "  " << i + 1 << "  angle " << ordering.angles[i] << "  ";
    for (std::size_t r : ordering.classes[i]) {
      out << '(';
      for (std::size_t j = 0; j < rs->ambient_dim(); ++j) out << (j ? "," : "") << to_string(rs->root(r)[j]);
      out << ") ";
    }
    out << '\n';
  }
  for (const auto& c : report.checks)
    out << (c.passed ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << '\n';

  if (!svg_path.empty()) write_file_atomic(svg_path, render_svg(*rs, ordering));
  if (!json_path.empty()) {
    nlohmann::json doc = to_json(*rs, ordering);
    doc["invariants"] = to_json(report);
    write_file_atomic(json_path, doc.dump(2) + "\n");
  }
  return report.all_passed() ? kOk : kCheckFailed;
}

int cmd_bench(const std::string& config_path, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  CampaignConfig config;
  std::string mode = "campaign";
  try {
    nlohmann::json doc = read_json_file(config_path);
    config = campaign_config_from_json(doc);
    if (doc.contains("mode")) mode = doc["mode"].get<std::string>();
    if (mode != "campaign" && mode != "compare") throw ParseError("mode must be \"campaign\" or \"compare\"");
    harness_threads();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  fs::create_directories(out_dir);
  try {
    if (mode == "compare") {
      ComparisonReport r = compare_strategies(config);
      write_file_atomic(fs::path(out_dir) / "compare.json", to_json(r).dump(2) + "\n");
      write_file_atomic(fs::path(out_dir) / "compare.csv", to_csv(r));
      out << "samples: " << r.records.size() << "  reannihilations: " << r.reannihilations
          << "  max factors column/clockwise: " << r.column_max_count << '/' << r.clockwise_max_count << '\n';
      return r.passed() ? kOk : kCheckFailed;
    }
    CampaignReport r = run_campaign(config);
    write_file_atomic(fs::path(out_dir) / "report.json", to_json(r).dump(2) + "\n");
    write_file_atomic(fs::path(out_dir) / "report.csv", to_csv(r));
    for (const auto& b : r.buckets)
      out << "length " << b.length << ": max ratio " << b.max_ratio << ", max factors " << b.max_factor_count << '\n';
    out << "bound violations: " << r.bound_violations << "  stability: " << (r.stability.passed ? "pass" : "FAIL")
        << '\n';
    return r.passed() ? kOk : kCheckFailed;
  } catch (const CampaignAbort& e) {
    write_file_atomic(fs::path(out_dir) / "abort.json", e.sample().dump(2) + "\n");
    err << "campaign aborted: " << e.what() << '\n';
    return kCheckFailed;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bounded-length block factorizations in SL(n, Z)", "qibg"};
  app.require_subcommand(1);

  std::string matrix_path, factors_path, strategy = "column", out_path, family, svg_path, json_path, config_path;
  std::uint64_t seed = 0;
  int rank = 0;

  auto* dec = app.add_subcommand("decompose", "Factor a matrix into 2x2 block factors");
  dec->add_option("matrix", matrix_path, "Matrix JSON file")->required();
  dec->add_option("--strategy", strategy, "column (default) or clockwise");
  dec->add_option("--seed", seed, "Projection seed for the clockwise ordering");
  dec->add_option("--out", out_path, "Write the factorization here instead of stdout");

  auto* ver = app.add_subcommand("verify", "Check a factorization against its matrix");
  ver->add_option("matrix", matrix_path, "Matrix JSON file")->required();
  ver->add_option("factorization", factors_path, "Factorization JSON file")->required();

  auto* big = app.add_subcommand("bigcell", "Corner minors, big-cell membership and UL factorization");
  big->add_option("matrix", matrix_path, "Rational matrix JSON file")->required();

  auto* roots = app.add_subcommand("roots", "Clockwise class ordering of a root system");
  roots->add_option("--family", family, "A, B, C, D, BC, E6, E7, E8, F4 or G2")->required();
  roots->add_option("--rank", rank, "Rank")->required();
  roots->add_option("--seed", seed, "Projection seed");
  roots->add_option("--svg", svg_path, "Write an SVG figure of the projected roots");
  roots->add_option("--json", json_path, "Write classes and invariant results as JSON");

  auto* bench = app.add_subcommand("bench", "Run a random-word campaign from a JSON config");
  bench->add_option("config", config_path, "Campaign config JSON file")->required();
  bench->add_option("--out", out_path, "Output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kInputError;
  }

  try {
    if (*dec) return cmd_decompose(matrix_path, strategy, seed, out_path, out, err);
    if (*ver) return cmd_verify(matrix_path, factors_path, out, err);
    if (*big) return cmd_bigcell(matrix_path, out, err);
    if (*roots) return cmd_roots(family, rank, seed, svg_path, json_path, out, err);
    if (*bench) return cmd_bench(config_path, out_path, out, err);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kInputError;
}

}  // namespace qibg::cli
