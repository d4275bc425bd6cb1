#include "disktau/cli.hpp"

#include "disktau/bracket.hpp"
#include "disktau/closed_theory.hpp"
#include "disktau/errors.hpp"
#include "disktau/identity_suite.hpp"
#include "disktau/open_theory.hpp"
#include "disktau/operators.hpp"
#include "disktau/stable_graphs.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace disktau {

namespace {

using nlohmann::json;

enum class Format { plain, json, csv };

struct CliConfig {
  Format format = Format::plain;
  // bracket
  std::string sector = "closed";
  int genus = 0;
  std::vector<int> a;
  int k = 0;
  // series
  std::string series = "Fc";
  std::string route = "virasoro";
  // caps; 0 means the subcommand default
  unsigned degree = 0;
  unsigned ncap = 0;
  // verify
  std::string identity;
  std::optional<int> n;
  std::optional<int> m;
  bool has_a = false;
  int max_A = 6;
  int max_l = 4;
  int max_n = 4;
  bool verbose = false;
  // graphs
  std::string graph_op;
  std::string input;
  std::string output;
  std::optional<int> gk;
  std::optional<int> gl;
  std::optional<int> codim;
  bool boundary_edge_only = false;
  int label = 0;
  std::vector<int> vertices;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

std::string ucoeffs_to_string(const UCoeffs& c) {
  if (c.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += " + ";
    s += "(" + to_string(c[i].c) + ")";
    if (c[i].u != 0) s += " u^" + std::to_string(c[i].u);
  }
  return s;
}

// ---- bracket ----

int cmd_bracket(const CliConfig& cfg, std::ostream& out) {
  Sector sector = cfg.sector == "open" ? Sector::open : Sector::closed;
  if (sector == Sector::closed && cfg.k != 0)
    throw PreconditionError("--k applies to the open sector only");
  Rational value = sector == Sector::closed ? closed_bracket(cfg.genus, cfg.a)
                                            : open_bracket(cfg.genus, cfg.a, cfg.k);
  std::string status = bracket_status(sector, cfg.genus, cfg.a, cfg.k);
  BracketKey key = sector == Sector::closed ? BracketKey::closed(cfg.genus, cfg.a)
                                            : BracketKey::open(cfg.genus, cfg.a, cfg.k);
  switch (cfg.format) {
    case Format::plain:
      out << to_string(value) << "\nstatus: " << status << "\n";
      break;
    case Format::json:
      out << json{{"key", key.to_string()},
                  {"sector", cfg.sector},
                  {"genus", cfg.genus},
                  {"a", sorted(cfg.a)},
                  {"k", cfg.k},
                  {"value", to_string(value)},
                  {"status", status}}
                 .dump()
          << "\n";
      break;
    case Format::csv:
      out << "sector,genus,a,k,value,status\n"
          << cfg.sector << ',' << cfg.genus << ',' << csv_field(join_ints(sorted(cfg.a))) << ','
          << cfg.k << ',' << to_string(value) << ',' << csv_field(status) << "\n";
      break;
  }
  return kExitOk;
}

// ---- series ----

int cmd_series(const CliConfig& cfg, std::ostream& out) {
  unsigned D = cfg.degree ? cfg.degree : 6;
  unsigned N = cfg.ncap ? cfg.ncap : 3;
  FormalSeries f(D, N);
  if (cfg.series == "Fc") {
    f = build_Fc(D, N);
  } else if (cfg.series == "Fo") {
    f = cfg.route == "kdv" ? build_Fo_via_kdv(D, N) : build_Fo(D, N);
  } else {
    f = build_Z(D, N);
  }
  switch (cfg.format) {
    case Format::plain:
      out << f.dump();
      break;
    case Format::json: {
      json terms = json::array();
      for (const auto& [mono, c] : f.sorted_terms())
        terms.push_back({{"monomial", mono.to_string()}, {"coefficient", to_string(c)}});
      out << json{{"series", cfg.series}, {"degree", D}, {"ncap", N}, {"terms", terms}}.dump()
          << "\n";
      break;
    }
    case Format::csv:
      out << "monomial,coefficient\n";
      for (const auto& [mono, c] : f.sorted_terms())
        out << csv_field(mono.to_string()) << ',' << to_string(c) << "\n";
      break;
  }
  return kExitOk;
}

// ---- verify ----

// A verify run yields coefficient-level reports, series-level checks, or both.
struct SeriesRow {
  std::string identity;
  std::string params;
  std::size_t checked = 0;
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
};

struct VerifyOutcome {
  std::vector<VerificationReport> reports;
  std::vector<SeriesRow> rows;
  bool pass() const {
    for (const auto& r : reports)
      if (!r.pass) return false;
    for (const auto& r : rows)
      if (!r.pass()) return false;
    return true;
  }
};

std::string caps_params(unsigned D, unsigned N) {
  return "D=" + std::to_string(D) + ";N=" + std::to_string(N);
}

SeriesRow row_of(const SeriesCheck& c, const std::string& identity, const std::string& params) {
  SeriesRow row{identity, params, c.monomials_checked, {}};
  for (const auto& f : c.failures)
    row.failures.push_back(f.at.to_string() + ": lhs " + ucoeffs_to_string(f.lhs) + ", rhs " +
                           ucoeffs_to_string(f.rhs));
  return row;
}

std::vector<int> n_range(const CliConfig& cfg, int lo, int hi) {
  if (cfg.n) return {*cfg.n};
  std::vector<int> ns;
  for (int n = lo; n <= hi; ++n) ns.push_back(n);
  return ns;
}

void append(VerifyOutcome& o, const SweepResult& s) {
  o.reports.insert(o.reports.end(), s.reports.begin(), s.reports.end());
}

VerifyOutcome run_verify(const CliConfig& cfg) {
  VerifyOutcome o;
  const std::string& id = cfg.identity;
  int sweep_degree = cfg.degree ? static_cast<int>(cfg.degree) : 10;
  unsigned D = cfg.degree ? cfg.degree : 8;
  unsigned N = cfg.ncap ? cfg.ncap : 4;

  if (id == "open-string" || id == "open-dilaton") {
    bool string = id == "open-string";
    if (cfg.has_a) {
      o.reports.push_back(string ? verify_open_string(cfg.a, cfg.k)
                                 : verify_open_dilaton(cfg.a, cfg.k));
    } else {
      append(o, string ? sweep_open_string(sweep_degree) : sweep_open_dilaton(sweep_degree));
    }
  } else if (id == "trr-1" || id == "trr-2") {
    TrrVariant v = id == "trr-1" ? TrrVariant::I : TrrVariant::II;
    if (cfg.has_a || cfg.n) {
      if (!cfg.n) throw PreconditionError("--n is required with --a");
      o.reports.push_back(verify_trr(v, *cfg.n, cfg.m, cfg.a, cfg.k));
    } else {
      append(o, sweep_trr(v, sweep_degree));
    }
  } else if (id == "open-kdv") {
    if (cfg.has_a || cfg.n) {
      if (!cfg.n) throw PreconditionError("--n is required with --a");
      o.reports.push_back(verify_open_kdv_coeff(*cfg.n, cfg.a));
    } else {
      append(o, sweep_open_kdv_coeff(sweep_degree));
    }
  } else if (auto b = parse_binomial_id(id)) {
    if (cfg.has_a) {
      o.reports.push_back(verify_binomial(*b, cfg.n.value_or(1), cfg.a));
    } else {
      append(o, sweep_binomial(*b, cfg.max_A, cfg.max_l, cfg.max_n));
    }
  } else if (id == "virasoro-genus0") {
    unsigned vd = cfg.degree ? cfg.degree : 10;
    unsigned vn = cfg.ncap ? cfg.ncap : vd;
    for (int n : n_range(cfg, -1, 4)) o.reports.push_back(verify_virasoro_genus0(n, vd, vn));
  } else if (id == "closed-kdv") {
    for (int n : n_range(cfg, 1, 4))
      o.rows.push_back(row_of(closed_kdv_report(n, D, N), id,
                              "n=" + std::to_string(n) + ";" + caps_params(D, N)));
  } else if (id == "closed-virasoro") {
    for (int n : n_range(cfg, -1, 3))
      o.rows.push_back(row_of(closed_virasoro_report(n, D, N), id,
                              "n=" + std::to_string(n) + ";" + caps_params(D, N)));
  } else if (id == "open-virasoro") {
    for (int n : n_range(cfg, -1, 3))
      o.rows.push_back(row_of(open_virasoro_report(n, D, N), id,
                              "n=" + std::to_string(n) + ";" + caps_params(D, N)));
  } else if (id == "open-string-series") {
    o.rows.push_back(row_of(open_string_report(D, N), id, caps_params(D, N)));
  } else if (id == "open-dilaton-series") {
    o.rows.push_back(row_of(open_dilaton_report(D, N), id, caps_params(D, N)));
  } else if (id == "commutator") {
    std::vector<int> ns = n_range(cfg, -1, 3);
    std::vector<int> ms = cfg.m ? std::vector<int>{*cfg.m} : std::vector<int>{-1, 0, 1, 2, 3};
    unsigned cn = cfg.ncap ? cfg.ncap : D;
    for (int n : ns)
      for (int m : ms) {
        CommutatorReport c = commutator_check(n, m, cn, D);
        o.rows.push_back({id,
                          "n=" + std::to_string(n) + ";m=" + std::to_string(m) + ";" +
                              caps_params(D, cn),
                          c.basis_checked, c.failures});
      }
  } else if (id == "fo-routes") {
    FormalSeries vir = build_Fo(D, N);
    FormalSeries kdv = build_Fo_via_kdv(D, N);
    SeriesRow row{id, caps_params(D, N), 0, {}};
    FormalSeries diff = vir - kdv;
    row.checked = vir.size();
    for (const auto& [mono, c] : diff.sorted_terms())
      row.failures.push_back(mono.to_string() + ": virasoro " + to_string(vir.coeff(mono)) +
                             ", kdv " + to_string(kdv.coeff(mono)));
    o.rows.push_back(std::move(row));
  } else {
    throw PreconditionError("unknown identity: " + id);
  }
  return o;
}

int cmd_verify(const CliConfig& cfg, std::ostream& out) {
  VerifyOutcome o = run_verify(cfg);
  bool pass = o.pass();
  switch (cfg.format) {
    case Format::plain:
      for (const auto& r : o.reports)
        if (cfg.verbose || !r.pass) out << to_text(r) << "\n";
      for (const auto& r : o.rows) {
        if (cfg.verbose || !r.pass())
          out << r.identity << " " << r.params << ": " << r.checked << " checked, "
              << r.failures.size() << " failures\n";
        for (const auto& f : r.failures) out << "  " << f << "\n";
      }
      out << (pass ? "PASS" : "FAIL") << "\n";
      break;
    case Format::json: {
      json reports = json::array();
      for (const auto& r : o.reports)
        reports.push_back({{"identity", r.identity},
                           {"params", r.params},
                           {"lhs", to_string(r.lhs)},
                           {"rhs", to_string(r.rhs)},
                           {"pass", r.pass},
                           {"detail", r.detail}});
      json rows = json::array();
      for (const auto& r : o.rows)
        rows.push_back({{"identity", r.identity},
                        {"params", r.params},
                        {"checked", r.checked},
                        {"failures", r.failures},
                        {"pass", r.pass()}});
      out << json{{"identity", cfg.identity}, {"pass", pass}, {"reports", reports},
                  {"series_checks", rows}}
                 .dump()
          << "\n";
      break;
    }
    case Format::csv:
      if (!o.reports.empty()) {
        out << report_csv_header() << "\n";
        for (const auto& r : o.reports) out << to_csv(r) << "\n";
      }
      if (!o.rows.empty()) {
        out << "identity,params,checked,failures,pass\n";
        for (const auto& r : o.rows)
          out << r.identity << ',' << csv_field(r.params) << ',' << r.checked << ','
              << r.failures.size() << ',' << (r.pass() ? "true" : "false") << "\n";
      }
      break;
  }
  return pass ? kExitOk : kExitFailure;
}

// ---- graphs ----

std::vector<StableGraph> read_graphs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return graphs_from_json(text);
}

void emit_graphs(const CliConfig& cfg, const std::vector<StableGraph>& gs, std::ostream& out) {
  if (!cfg.output.empty()) {
    std::ofstream f(cfg.output);
    if (!f) throw ParseError("cannot write " + cfg.output);
    f << graphs_to_json(gs) << "\n";
  }
  switch (cfg.format) {
    case Format::plain:
      if (cfg.output.empty()) {
        for (const auto& g : gs) out << to_string(g) << "\n";
      } else {
        out << gs.size() << " graphs written to " << cfg.output << "\n";
      }
      break;
    case Format::json:
      if (cfg.output.empty()) out << graphs_to_json(gs) << "\n";
      break;
    case Format::csv:
      out << "index,vertices,edges,graph\n";
      for (std::size_t i = 0; i < gs.size(); ++i)
        out << i << ',' << gs[i].vertices.size() << ',' << gs[i].edges.size() << ','
            << csv_field(to_string(gs[i])) << "\n";
      break;
  }
}

int cmd_graphs(const CliConfig& cfg, std::ostream& out) {
  const std::string& op = cfg.graph_op;
  std::vector<StableGraph> inputs;
  if (!cfg.input.empty()) {
    inputs = read_graphs(cfg.input);
  } else if (!(op == "boundary" && cfg.gk && cfg.gl)) {
    throw PreconditionError("--input is required");
  }

  if (op == "validate") {
    bool all = true;
    json results = json::array();
    if (cfg.format == Format::csv) out << "index,valid,diagnostics\n";
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      ValidationResult v = validate_graph(inputs[i]);
      all = all && v.ok;
      std::string diag;
      for (std::size_t j = 0; j < v.diagnostics.size(); ++j)
        diag += (j ? "; " : "") + v.diagnostics[j];
      switch (cfg.format) {
        case Format::plain:
          out << "graph " << i << ": " << (v.ok ? "valid" : "invalid: " + diag) << "\n";
          break;
        case Format::json:
          results.push_back({{"index", i}, {"valid", v.ok}, {"diagnostics", v.diagnostics}});
          break;
        case Format::csv:
          out << i << ',' << (v.ok ? "true" : "false") << ',' << csv_field(diag) << "\n";
          break;
      }
    }
    if (cfg.format == Format::json) out << json{{"valid", all}, {"graphs", results}}.dump() << "\n";
    return all ? kExitOk : kExitFailure;
  }

  auto require_valid = [](const StableGraph& g) {
    ValidationResult v = validate_graph(g);
    if (!v.ok) throw InvalidGraphError("invalid graph: " + v.diagnostics.front());
  };

  std::vector<StableGraph> result;
  if (op == "boundary") {
    if (inputs.empty()) {
      result = enumerate_boundary(*cfg.gk, *cfg.gl, cfg.codim, cfg.boundary_edge_only);
    } else {
      for (const auto& g : inputs) {
        require_valid(g);
        for (auto& d : degenerations(g, cfg.codim.value_or(1 << 20))) {
          if (cfg.codim && static_cast<int>(d.edges.size() - g.edges.size()) != *cfg.codim)
            continue;
          if (cfg.boundary_edge_only) {
            bool any = false;
            for (std::size_t e = 0; e < d.edges.size(); ++e)
              any = any || is_boundary_edge(d, static_cast<int>(e));
            if (!any) continue;
          }
          result.push_back(std::move(d));
        }
      }
    }
  } else if (op == "base") {
    for (const auto& g : inputs) {
      require_valid(g);
      result.push_back(base_graph(g));
    }
  } else if (op == "forget") {
    if (cfg.label < 1) throw PreconditionError("--label must name an interior label index >= 1");
    for (const auto& g : inputs) {
      require_valid(g);
      result.push_back(forget_interior(g, Label::interior(cfg.label)));
    }
  } else if (op == "span") {
    for (const auto& g : inputs) {
      require_valid(g);
      result.push_back(span_subgraph(g, cfg.vertices));
    }
  }
  emit_graphs(cfg, result, out);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Exact descendent integrals on disks and spheres", "disktau"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::string format = "plain";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"plain", "json", "csv"}))
      ->capture_default_str();

  auto* bracket = app.add_subcommand("bracket", "Evaluate one bracket");
  bracket->add_option("--sector", cfg.sector, "closed or open")
      ->check(CLI::IsMember({"closed", "open"}))
      ->capture_default_str();
  bracket->add_option("--genus", cfg.genus, "Genus")->check(CLI::NonNegativeNumber)->required();
  bracket->add_option("--a", cfg.a, "Descendent indices, comma separated")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber);
  bracket->add_option("--k", cfg.k, "Boundary insertions")->check(CLI::NonNegativeNumber);

  auto* series = app.add_subcommand("series", "Dump F^c, F^o or Z");
  series->add_option("which", cfg.series, "Fc, Fo or Z")
      ->check(CLI::IsMember({"Fc", "Fo", "Z"}))
      ->required();
  series->add_option("--degree", cfg.degree, "Total t/s degree cap (default 6)")
      ->check(CLI::PositiveNumber);
  series->add_option("--ncap", cfg.ncap, "Descendent index cap (default 3)")
      ->check(CLI::PositiveNumber);
  series->add_option("--route", cfg.route, "F^o determination: virasoro or kdv")
      ->check(CLI::IsMember({"virasoro", "kdv"}))
      ->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run an identity check");
  verify->add_option("identity", cfg.identity,
                     "open-string, open-dilaton, trr-1, trr-2, open-kdv, xxz, xxzz, vxxz2, xz2, "
                     "virasoro-genus0, closed-kdv, closed-virasoro, open-virasoro, "
                     "open-string-series, open-dilaton-series, commutator, fo-routes")
      ->required();
  verify->add_option("--n", cfg.n, "Operator or descendent index");
  verify->add_option("--m", cfg.m, "Second index");
  auto* va = verify->add_option("--a", cfg.a, "Descendent indices for a single check")
                 ->delimiter(',')
                 ->check(CLI::NonNegativeNumber);
  verify->add_option("--k", cfg.k, "Boundary insertions for a single check")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--degree", cfg.degree,
                     "Degree cap (default 10 for coefficient sweeps, 8 for series checks)")
      ->check(CLI::PositiveNumber);
  verify->add_option("--ncap", cfg.ncap,
                     "Descendent index cap (default: degree for virasoro-genus0 and commutator, else 4)")
      ->check(CLI::PositiveNumber);
  verify->add_option("--max-A", cfg.max_A, "Binomial sweeps: bound on sum a")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  verify->add_option("--max-l", cfg.max_l, "Binomial sweeps: bound on l")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  verify->add_option("--max-n", cfg.max_n, "Binomial sweeps: bound on n")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  verify->add_flag("--verbose", cfg.verbose, "Print passing checks too");

  auto* graphs = app.add_subcommand("graphs", "Stable graph operations on graph files");
  graphs->add_option("op", cfg.graph_op, "validate, boundary, base, forget or span")
      ->check(CLI::IsMember({"validate", "boundary", "base", "forget", "span"}))
      ->required();
  graphs->add_option("--input", cfg.input, "Graph file (one graph or an array)")
      ->check(CLI::ExistingFile);
  graphs->add_option("--output", cfg.output, "Write resulting graphs to this file");
  graphs->add_option("--k", cfg.gk, "boundary without --input: boundary labels of the disk")
      ->check(CLI::NonNegativeNumber);
  graphs->add_option("--l", cfg.gl, "boundary without --input: interior labels of the disk")
      ->check(CLI::NonNegativeNumber);
  graphs->add_option("--codim", cfg.codim, "boundary: exact number of new edges")
      ->check(CLI::PositiveNumber);
  graphs->add_flag("--boundary-edge-only", cfg.boundary_edge_only,
                   "boundary: keep graphs with a boundary edge");
  graphs->add_option("--label", cfg.label, "forget: interior label index");
  graphs->add_option("--vertices", cfg.vertices, "span: vertex indices, comma separated")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }
  cfg.format = format == "json" ? Format::json : format == "csv" ? Format::csv : Format::plain;
  cfg.has_a = va->count() > 0;

  try {
    if (bracket->parsed()) return cmd_bracket(cfg, out);
    if (series->parsed()) return cmd_series(cfg, out);
    if (verify->parsed()) return cmd_verify(cfg, out);
    return cmd_graphs(cfg, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"disktau"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace disktau
