// loopcorrect command-line front end.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "loopcorrect/loopcorrect.hpp"

namespace lc = loopcorrect;
using nlohmann::json;

namespace {

enum ExitCode : int { kOk = 0, kUsage = 1, kNotConverged = 2, kIdentity = 3 };

// Raised to leave with a given exit code after printing a diagnostic.
struct Exit {
  int code;
  std::string message;
};

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<json>> rows;
};

std::string format_cell(const json& v, bool full_precision) {
  if (v.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, full_precision ? "%.17g" : "%.12g", v.get<double>());
    return buf;
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void print_table(std::ostream& os, const Table& t) {
  std::vector<std::size_t> width(t.header.size());
  std::vector<std::vector<std::string>> cells;
  for (std::size_t c = 0; c < t.header.size(); ++c) width[c] = t.header[c].size();
  for (const auto& row : t.rows) {
    auto& out = cells.emplace_back();
    for (std::size_t c = 0; c < row.size(); ++c) {
      out.push_back(format_cell(row[c], false));
      width[c] = std::max(width[c], out.back().size());
    }
  }
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) os << "  ";
      os << r[c];
      if (c + 1 < r.size()) os << std::string(width[c] - r[c].size(), ' ');
    }
    os << '\n';
  };
  line(t.header);
  for (const auto& r : cells) line(r);
}

void print_csv(std::ostream& os, const Table& t) {
  for (std::size_t c = 0; c < t.header.size(); ++c) os << (c ? "," : "") << t.header[c];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_cell(row[c], true);
    os << '\n';
  }
}

json table_json(const Table& t) {
  json arr = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[t.header[c]] = row[c];
    arr.push_back(obj);
  }
  return arr;
}

void emit(const std::vector<Table>& tables, const std::string& format) {
  if (format == "json") {
    json out = json::object();
    for (const auto& t : tables) out[t.name] = table_json(t);
    std::cout << out.dump(2) << '\n';
    return;
  }
  for (std::size_t k = 0; k < tables.size(); ++k) {
    if (k) std::cout << '\n';
    if (format == "csv") print_csv(std::cout, tables[k]);
    else print_table(std::cout, tables[k]);
  }
}

/// Two-column table of named scalars.
Table summary(std::vector<std::pair<std::string, json>> items) {
  Table t{"summary", {"quantity", "value"}, {}};
  for (auto& [k, v] : items) t.rows.push_back({k, std::move(v)});
  return t;
}

lc::OracleOptions oracle_options() {
  lc::OracleOptions o;
  if (const char* env = std::getenv("LOOPCORRECT_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) o.threads = v;
  }
  return o;
}

struct Config {
  std::string model_path;
  std::string graph_path;
  std::string format = "table";
  lc::LbpOptions lbp;
  std::string schedule = "sync";
  std::optional<std::size_t> target;
  std::optional<std::size_t> max_size;
  bool terms = false;
  std::string method = "cd";
  bool check = false;
  std::uint64_t seed = 0;
  double coupling = 1.0;
  double field = 0.5;
  std::string out_path;
  std::string topology;
  std::vector<std::size_t> sizes;
};

lc::LbpOptions lbp_options(const Config& cfg) {
  lc::LbpOptions o = cfg.lbp;
  o.schedule = cfg.schedule == "seq" ? lc::Schedule::sequential : lc::Schedule::synchronous;
  return o;
}

lc::Multigraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Exit{kUsage, "cannot open graph file '" + path + "'"};
  return lc::parse_edge_list(in);
}

lc::AnyModel load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Exit{kUsage, "cannot open model file '" + path + "'"};
  std::stringstream ss;
  ss << in.rdbuf();
  return lc::parse_model(ss.str());
}

template <class Result>
void require_converged(const Result& r) {
  if (!r.converged)
    throw Exit{kNotConverged, "belief propagation did not converge: residual " + std::to_string(r.residual) +
                                  " after " + std::to_string(r.iterations) + " iterations"};
}

// Uniform access to pairwise and factor pipelines.
struct Pipeline {
  std::vector<lc::NodeTable> beliefs;
  double log_z_bethe = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double residual = 0.0;
  lc::SeriesReport series;
  std::function<lc::MarginalCorrection(lc::NodeId)> marginal;
  std::size_t variables = 0;
};

Pipeline run_pipeline(const lc::AnyModel& model, const lc::LbpOptions& opt, bool with_series) {
  Pipeline p;
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, lc::PairwiseModel>) {
          auto res = std::make_shared<lc::LbpResult>(lc::run_lbp(m, opt));
          p.beliefs = res->beliefs.node;
          p.log_z_bethe = res->log_z_bethe;
          p.iterations = res->iterations;
          p.converged = res->converged;
          p.residual = res->residual;
          p.variables = m.node_count();
          if (with_series && res->converged) {
            p.series = lc::loop_series_z(m, *res);
            p.marginal = [&m, res](lc::NodeId t) { return lc::loop_series_marginal(m, *res, t); };
          }
        } else {
          auto res = std::make_shared<lc::FactorLbpResult>(lc::run_lbp_factor(m, opt));
          p.beliefs = res->beliefs.node;
          p.log_z_bethe = res->log_z_bethe;
          p.iterations = res->iterations;
          p.converged = res->converged;
          p.residual = res->residual;
          p.variables = m.variable_count();
          if (with_series && res->converged) {
            p.series = lc::loop_series_z_factor(m, *res);
            p.marginal = [&m, res](lc::NodeId t) { return lc::loop_series_marginal_factor(m, *res, t); };
          }
        }
      },
      model);
  return p;
}

lc::ExactResult run_oracle(const lc::AnyModel& model) {
  return std::visit([](const auto& m) { return lc::brute_force(m, oracle_options()); }, model);
}

Table belief_table(const std::vector<lc::NodeTable>& b, const char* name = "beliefs") {
  Table t{name, {"node", "p(-1)", "p(+1)"}, {}};
  for (std::size_t i = 0; i < b.size(); ++i) t.rows.push_back({i, b[i][0], b[i][1]});
  return t;
}

int cmd_lbp(const Config& cfg) {
  const lc::AnyModel model = load(cfg.model_path);
  const Pipeline p = run_pipeline(model, lbp_options(cfg), false);
  emit({summary({{"log_Z_B", p.log_z_bethe},
                 {"iterations", p.iterations},
                 {"converged", p.converged},
                 {"residual", p.residual}}),
        belief_table(p.beliefs)},
       cfg.format);
  require_converged(p);
  return kOk;
}

int cmd_loopseries(const Config& cfg) {
  const lc::AnyModel model = load(cfg.model_path);
  const Pipeline p = run_pipeline(model, lbp_options(cfg), true);
  require_converged(p);
  const lc::SeriesReport& rep = p.series;

  Table terms{"terms", {"subset", "size", "r", "partial_sum"}, {}};
  double partial = 0.0;
  for (const auto& t : rep.terms) {
    if (cfg.max_size && t.subset.size() > *cfg.max_size) continue;
    partial += t.r;
    terms.rows.push_back({t.subset.mask(), t.subset.size(), t.r, partial});
  }
  if (cfg.terms && cfg.format == "csv") {
    emit({terms}, cfg.format);
    return kOk;
  }

  std::vector<std::pair<std::string, json>> items = {{"log_Z_B", rep.log_z_bethe},
                                                     {"series_total", rep.total},
                                                     {"log_Z_estimate", rep.log_z_estimate},
                                                     {"generalized_loops", rep.terms.size()}};
  if (cfg.max_size) {
    const auto tr = lc::truncated_series(rep, *cfg.max_size);
    items.emplace_back("max_size", *cfg.max_size);
    items.emplace_back("truncated_total", tr.value);
    items.emplace_back("log_Z_truncated", rep.log_z_bethe + std::log(tr.value));
  }
  std::vector<Table> out;
  if (cfg.target) {
    if (*cfg.target >= p.variables) throw Exit{kUsage, "target node out of range"};
    const auto mc = p.marginal(*cfg.target);
    items.emplace_back("target", *cfg.target);
    items.emplace_back("bias_series", mc.bias_series);
    items.emplace_back("belief(-1)", p.beliefs[*cfg.target][0]);
    items.emplace_back("belief(+1)", p.beliefs[*cfg.target][1]);
    items.emplace_back("corrected(-1)", mc.corrected[0]);
    items.emplace_back("corrected(+1)", mc.corrected[1]);
  }
  out.push_back(summary(std::move(items)));
  if (cfg.terms) out.push_back(terms);
  emit(out, cfg.format);
  return kOk;
}

int cmd_oracle(const Config& cfg) {
  const lc::AnyModel model = load(cfg.model_path);
  const lc::ExactResult ex = run_oracle(model);
  emit({summary({{"log_Z", ex.log_z}}), belief_table(ex.marginals, "marginals")}, cfg.format);
  return kOk;
}

int cmd_compare(const Config& cfg) {
  constexpr double kTol = 1e-8;
  const lc::AnyModel model = load(cfg.model_path);
  const lc::ExactResult ex = run_oracle(model);
  const Pipeline p = run_pipeline(model, lbp_options(cfg), true);
  require_converged(p);
  const lc::SeriesReport& rep = p.series;

  const double bethe_abs = std::abs(p.log_z_bethe - ex.log_z);
  const double corr_abs = std::abs(rep.log_z_estimate - ex.log_z);
  // relative error in Z itself: |Z_est / Z - 1|
  const double bethe_rel = std::abs(std::expm1(p.log_z_bethe - ex.log_z));
  const double corr_rel = std::abs(std::expm1(rep.log_z_estimate - ex.log_z));

  Table nodes{"marginals", {"node", "exact(+1)", "belief(+1)", "corrected(+1)", "err_before", "err_after"}, {}};
  double max_before = 0.0, max_after = 0.0;
  for (lc::NodeId i = 0; i < p.variables; ++i) {
    const auto mc = p.marginal(i);
    double before = 0.0, after = 0.0;
    for (std::size_t x = 0; x < 2; ++x) {
      before = std::max(before, std::abs(p.beliefs[i][x] - ex.marginals[i][x]));
      after = std::max(after, std::abs(mc.corrected[x] - ex.marginals[i][x]));
    }
    max_before = std::max(max_before, before);
    max_after = std::max(max_after, after);
    nodes.rows.push_back({i, ex.marginals[i][1], p.beliefs[i][1], mc.corrected[1], before, after});
  }
  Table row{"comparison",
            {"log_Z_exact", "log_Z_B", "series_total", "log(Z_B*total)", "abs_err_bethe", "rel_err_bethe",
             "abs_err_corrected", "rel_err_corrected", "max_marg_err_before", "max_marg_err_after"},
            {{ex.log_z, p.log_z_bethe, rep.total, rep.log_z_estimate, bethe_abs, bethe_rel, corr_abs, corr_rel,
              max_before, max_after}}};
  emit({row, nodes}, cfg.format);
  if (!(corr_rel < kTol) || !(max_after < kTol)) {
    std::cerr << "compare: corrected values miss the oracle by more than " << kTol << '\n';
    return kIdentity;
  }
  return kOk;
}

// Runs a named identity check; failures are collected rather than thrown.
struct CheckLog {
  Table table{"checks", {"check", "result", "detail"}, {}};
  bool failed = false;

  template <class F>
  void run(const std::string& name, F&& f) {
    try {
      const std::string detail = f();
      table.rows.push_back({name, "ok", detail});
    } catch (const lc::IdentityViolation& e) {
      failed = true;
      table.rows.push_back({name, "FAILED", e.what()});
    } catch (const lc::DivisibilityError& e) {
      failed = true;
      table.rows.push_back({name, "FAILED", e.what()});
    }
  }
  void skip(const std::string& name, const std::string& why) { table.rows.push_back({name, "skipped", why}); }
};

bool is_regular(const lc::Multigraph& g) {
  const auto d = g.degrees();
  return d.front() > 0 && std::all_of(d.begin(), d.end(), [&](std::size_t x) { return x == d.front(); });
}

lc::BiPoly theta_of(const lc::Multigraph& g, const std::string& method) {
  return method == "direct" ? lc::theta_direct(g).poly : lc::theta_contraction_deletion(g).poly;
}

int finish_polynomial(const std::string& name, const std::string& text, const Config& cfg, const CheckLog* log) {
  std::vector<Table> out{Table{"polynomial", {"polynomial", "value"}, {{name, text}}}};
  if (log) out.push_back(log->table);
  if (cfg.format == "table" && !log) std::cout << text << '\n';
  else emit(out, cfg.format);
  return log && log->failed ? kIdentity : kOk;
}

int cmd_theta(const Config& cfg) {
  const lc::Multigraph g = load_graph(cfg.graph_path);
  const lc::BiPoly theta = theta_of(g, cfg.method);
  if (!cfg.check) return finish_polynomial("theta", theta.render(), cfg, nullptr);
  CheckLog log;
  log.run("direct == contraction-deletion", [&] {
    const auto a = lc::theta_direct(g).poly, b = lc::theta_contraction_deletion(g).poly;
    if (!(a == b)) throw lc::IdentityViolation(a.render() + " != " + b.render());
    return std::string();
  });
  if (lc::is_connected(g).connected) {
    log.run("theta(1, g) binomial form", [&] {
      const auto t = lc::theta_at_beta1(g);
      if (!(t.substituted == t.binomial_form))
        throw lc::IdentityViolation(t.substituted.render("g") + " != " + t.binomial_form.render("g"));
      return t.substituted.render("g");
    });
  } else {
    log.skip("theta(1, g) binomial form", "graph is disconnected");
  }
  if (lc::is_connected(g).connected && g.is_simple()) {
    log.run("generalized loop bound", [&] {
      const auto b = lc::loop_count_bound(g);
      return "count " + std::to_string(b.count) + " bound " + b.theta_value.str() +
             (b.attained ? " attained" : " strict");
    });
  } else {
    log.skip("generalized loop bound", "graph must be simple and connected");
  }
  return finish_polynomial("theta", theta.render(), cfg, &log);
}

int cmd_omega(const Config& cfg) {
  const lc::Multigraph g = load_graph(cfg.graph_path);
  lc::OmegaPoly w;
  try {
    w = lc::omega(g);
  } catch (const lc::DivisibilityError& e) {
    throw Exit{kIdentity, e.what()};
  } catch (const lc::IdentityViolation& e) {
    throw Exit{kIdentity, e.what()};
  }
  if (!cfg.check) return finish_polynomial("omega", w.poly.render("b"), cfg, nullptr);
  CheckLog log;
  log.run("recurrence on every non-loop edge", [&] {
    std::size_t checked = 0;
    for (lc::EdgeId e = 0; e < g.edge_count(); ++e) {
      if (g.edge(e).is_loop()) continue;
      if (!lc::omega_recurrence_check(g, e))
        throw lc::IdentityViolation("recurrence fails on edge " + std::to_string(e));
      ++checked;
    }
    return std::to_string(checked) + " edges";
  });
  if (!g.has_self_loop()) {
    log.run("omega(1) counts injective assignments", [&] {
      const auto r = lc::omega_at_1_count(g);
      return r.value.str();
    });
  } else {
    log.skip("omega(1) counts injective assignments", "graph has a self-loop");
  }
  if (g.is_simple() && lc::is_connected(g).connected && g.node_count() <= lc::kDeterminantNodeCap) {
    log.run("determinant sum over cycle sets", [&] {
      lc::omega_determinant_form(g);
      return std::string();
    });
  } else {
    log.skip("determinant sum over cycle sets", "needs a simple connected graph with at most 16 nodes");
  }
  return finish_polynomial("omega", w.poly.render("b"), cfg, &log);
}

int cmd_matching(const Config& cfg) {
  const lc::Multigraph g = load_graph(cfg.graph_path);
  const lc::IntPoly alpha = lc::matching_polynomial(g);
  if (!cfg.check) return finish_polynomial("matching", alpha.render("x"), cfg, nullptr);
  CheckLog log;
  if (g.is_simple() && is_regular(g)) {
    log.run("regular graph matching form", [&] {
      const auto r = lc::regular_graph_matching_check(g);
      return "q = " + std::to_string(r.q);
    });
  } else {
    log.skip("regular graph matching form", "graph is not simple and regular");
  }
  return finish_polynomial("matching", alpha.render("x"), cfg, &log);
}

int cmd_gen(const Config& cfg) {
  lc::Rng rng(cfg.seed);
  const auto& t = cfg.topology;
  auto need = [&](std::size_t k) {
    if (cfg.sizes.size() != k)
      throw Exit{kUsage, "gen " + t + " expects " + std::to_string(k) + " size argument(s)"};
  };
  const lc::CouplingParams params{cfg.coupling, cfg.field};
  lc::AnyModel model = lc::PairwiseModel(lc::graphs::path(2), std::vector<lc::PairTable>(1, {{{1, 1}, {1, 1}}}));
  if (t == "factor") {
    need(1);
    lc::FactorGenParams fp;
    fp.variables = cfg.sizes[0];
    fp.strength = cfg.coupling;
    model = lc::random_factor_model(fp, rng);
  } else {
    lc::Multigraph g;
    if (t == "tree") {
      need(1);
      g = lc::topology::random_tree(cfg.sizes[0], rng);
    } else if (t == "cycle") {
      need(1);
      g = lc::graphs::cycle(cfg.sizes[0]);
    } else if (t == "grid") {
      need(2);
      g = lc::graphs::grid(cfg.sizes[0], cfg.sizes[1]);
    } else if (t == "example1") {
      need(0);
      g = lc::graphs::two_triangles();
    } else if (t == "random") {
      need(2);
      g = lc::topology::random_connected(cfg.sizes[0], cfg.sizes[1], rng);
    } else if (t == "unicyclic") {
      need(2);
      g = lc::topology::cycle_with_trees(cfg.sizes[0], cfg.sizes[1], rng);
    } else {
      throw Exit{kUsage, "unknown topology '" + t + "'"};
    }
    model = lc::ising_model(g, params, rng);
  }
  const std::string text = lc::render_model(model);
  if (cfg.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!(out << text)) throw Exit{kUsage, "cannot write '" + cfg.out_path + "'"};
  }
  return kOk;
}

void add_format(CLI::App* sub, Config& cfg) {
  sub->add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
}

void add_lbp_flags(CLI::App* sub, Config& cfg) {
  sub->add_option("--tol", cfg.lbp.tol, "Convergence tolerance on the max message change")->capture_default_str();
  sub->add_option("--damping", cfg.lbp.damping, "Damping d in m <- (1-d) new + d old")->capture_default_str();
  sub->add_option("--max-iters", cfg.lbp.max_iters, "Sweep limit")->capture_default_str();
  sub->add_option("--schedule", cfg.schedule, "Message schedule: sync or seq")
      ->check(CLI::IsMember({"sync", "seq"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loop-series corrected belief propagation and graph polynomials"};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 success, 1 usage or IO error, 2 belief propagation did not converge,\n"
      "3 an identity or exactness check failed. LOOPCORRECT_THREADS sets the oracle thread count.");
  Config cfg;

  auto* lbp = app.add_subcommand("lbp", "Run belief propagation; print beliefs and log Z_B");
  lbp->add_option("--model", cfg.model_path, "Model JSON file")->required();
  add_lbp_flags(lbp, cfg);
  add_format(lbp, cfg);

  auto* ls = app.add_subcommand("loopseries", "Loop-series correction of the Bethe approximation");
  ls->add_option("--model", cfg.model_path, "Model JSON file")->required();
  ls->add_option("--target", cfg.target, "Node whose marginal is corrected");
  ls->add_option("--max-size", cfg.max_size, "Truncate the series to subsets with at most k edges");
  ls->add_flag("--terms", cfg.terms, "Dump the per-term table (subset mask, size, r, partial sum)");
  add_lbp_flags(ls, cfg);
  add_format(ls, cfg);

  auto* oracle = app.add_subcommand("oracle", "Exact log Z and marginals by enumeration");
  oracle->add_option("--model", cfg.model_path, "Model JSON file")->required();
  add_format(oracle, cfg);

  auto* cmp = app.add_subcommand("compare", "Oracle vs Bethe vs loop-series corrected values");
  cmp->add_option("--model", cfg.model_path, "Model JSON file")->required();
  add_lbp_flags(cmp, cfg);
  add_format(cmp, cfg);

  auto add_poly = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--graph", cfg.graph_path, "Edge-list file (\"N M\" then M lines \"a b\")")->required();
    sub->add_option("--method", cfg.method, "theta construction: direct or cd")
        ->check(CLI::IsMember({"direct", "cd"}))
        ->capture_default_str();
    sub->add_flag("--check", cfg.check, "Run the cross-identities for this polynomial");
    add_format(sub, cfg);
    return sub;
  };
  auto* theta = add_poly("theta", "Bivariate graph polynomial theta_G(b, g), g = xi - 1/xi");
  auto* omega = add_poly("omega", "Integer polynomial omega_G(b)");
  auto* matching = add_poly("matching", "Matching polynomial alpha_G(x)");

  auto* gen = app.add_subcommand("gen", "Generate a random model as JSON");
  gen->set_help_flag("--help", "Print this help message and exit");  // frees -h for the field strength
  gen->add_option("topology", cfg.topology,
                  "tree N | cycle N | grid R C | example1 | random N M | unicyclic C T | factor N")
      ->required();
  gen->add_option("sizes", cfg.sizes, "Size arguments for the topology");
  gen->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  gen->add_option("--J", cfg.coupling, "Couplings drawn from [-J, J]")->capture_default_str();
  gen->add_option("--h", cfg.field, "Fields drawn from [-h, h]")->capture_default_str();
  gen->add_option("--out", cfg.out_path, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*lbp) return cmd_lbp(cfg);
    if (*ls) return cmd_loopseries(cfg);
    if (*oracle) return cmd_oracle(cfg);
    if (*cmp) return cmd_compare(cfg);
    if (*theta) return cmd_theta(cfg);
    if (*omega) return cmd_omega(cfg);
    if (*matching) return cmd_matching(cfg);
    if (*gen) return cmd_gen(cfg);
  } catch (const Exit& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.code;
  } catch (const lc::StateError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNotConverged;
  } catch (const lc::IdentityViolation& e) {
    std::cerr << "identity check failed: " << e.what() << '\n';
    return kIdentity;
  } catch (const lc::DivisibilityError& e) {
    std::cerr << "identity check failed: " << e.what() << '\n';
    return kIdentity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
