// sharplab_cli: constants, functionals, sequences, sweeps, searches and the
// identity check, each run persisted as CSVs plus a JSON manifest.
//
// Exit status: 0 ok, 2 usage, 3 domain error, 4 computation or I/O failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "run_store.hpp"
#include "sharplab/errors.hpp"
#include "sharplab/extremal_search.hpp"
#include "sharplab/radial_core.hpp"
#include "sharplab/special_constants.hpp"
#include "sharplab/test_sequences.hpp"

#ifndef SHARPLAB_VERSION
#define SHARPLAB_VERSION "dev"
#endif

namespace fs = std::filesystem;
using namespace sharplab;
using cli::fmt;

namespace {

const std::string kCommands[] = {"constants", "eval",     "norms",    "sequence", "sweep-at",
                                 "sweep-ata", "search-mt", "search-a", "identity", "report"};

const char* kSweepHeader = "N,beta,a,b,alpha,alpha_ratio,estimate,factor,product,gap_x\n";

// What a subcommand hands back for persistence.
struct RunResult {
  std::vector<cli::OutputFile> outputs;
  std::map<std::string, std::string> summary;
  std::map<std::string, std::string> inputs;  // path -> sha256
};

struct Common {
  int dim = 2;
  double beta = 0.0;
  long budget = 400;
  std::uint64_t seed = 1;
  int grid_size = 16;
  double ceiling = 1e12;
  double tolerance = 1e-3;
};

void add_common(CLI::App* s, Common& c, bool search) {
  s->add_option("--dim", c.dim, "dimension N");
  s->add_option("--beta", c.beta, "weight exponent, 0 <= beta < N");
  if (!search) return;
  s->add_option("--budget", c.budget, "objective evaluations per search");
  s->add_option("--seed", c.seed, "random seed");
  s->add_option("--grid-size", c.grid_size, "nodes M of the free-node family");
  s->add_option("--ceiling", c.ceiling, "divergence threshold");
  s->add_option("--tolerance", c.tolerance, "relative tolerance of the one-sided identity check");
}

SearchConfig search_config(const Common& c, SearchFamily fam) {
  SearchConfig cfg;
  cfg.family = fam;
  cfg.budget = c.budget;
  cfg.seed = c.seed;
  cfg.grid_size = c.grid_size;
  cfg.ceiling = c.ceiling;
  cfg.tolerance = c.tolerance;
  return cfg;
}

std::string key_value_csv(const std::vector<std::pair<std::string, double>>& rows) {
  std::string out = "quantity,value\n";
  for (const auto& [k, v] : rows) out += k + "," + fmt(v) + "\n";
  return out;
}

void print_rows(const std::vector<std::pair<std::string, double>>& rows) {
  for (const auto& [k, v] : rows) std::cout << k << " = " << fmt(v) << "\n";
}

// Ratios q in (0, 1): linear in q, or geometric in the gap 1 - q.
std::vector<double> ratio_grid(int points, double q_min, double q_max, const std::string& spacing) {
  if (points < 1) throw DomainError("--points must be >= 1");
  if (!(q_min > 0.0) || !(q_max < 1.0) || !(q_min <= q_max)) {
    throw DomainError("ratio window must satisfy 0 < q-min <= q-max < 1");
  }
  std::vector<double> q;
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    if (spacing == "linear-in-ratio") {
      q.push_back(q_min + t * (q_max - q_min));
    } else {
      q.push_back(1.0 - (1.0 - q_min) * std::pow((1.0 - q_max) / (1.0 - q_min), t));
    }
  }
  return q;
}

RadialProfile load_profile(const std::string& path, RunResult& r) {
  const std::string bytes = cli::read_file(path);
  r.inputs[path] = cli::sha256_hex(bytes);
  std::istringstream is(bytes);
  return read_profile(is);
}

std::string profile_text(const RadialProfile& u) {
  std::ostringstream os;
  write_profile(os, u);
  return os.str();
}

std::string sweep_row(int N, double beta, const std::optional<NormBudget>& nb, double alpha, double ratio,
                      double estimate, double gap_x, double factor) {
  std::string row = std::to_string(N) + "," + fmt(beta) + ",";
  row += nb ? fmt(nb->a) + "," + fmt(nb->b) + "," : ",,";
  row += fmt(alpha) + "," + fmt(ratio) + "," + fmt(estimate) + ",";
  row += nb ? fmt(factor) + "," + fmt(factor * estimate) + "," : ",,";
  row += fmt(gap_x) + "\n";
  return row;
}

// ---- subcommands ------------------------------------------------------------

RunResult run_constants(const Common& c) {
  const int N = c.dim;
  if (N < 2 || N > 60) throw DomainError("constants: --dim must lie in [2, 60]");
  std::vector<std::pair<std::string, double>> rows{
      {"omega_" + std::to_string(N - 1), sphere_area(N)},
      {"alpha_" + std::to_string(N), alpha_moser(N)},
  };
  if (N >= 3) rows.push_back({"beta_" + std::to_string(N) + "_2", beta_adams(N, 2)});
  for (double g : {1.0, 2.0}) {
    if (g < N) rows.push_back({"beta0_fractional_" + fmt(g), beta0_fractional(N, g)});
  }
  std::cout << "N = " << N << "\n";
  print_rows(rows);
  RunResult r;
  for (const auto& [k, v] : rows) r.summary[k] = fmt(v);
  return r;
}

RunResult run_eval(const Common& c, const std::string& path, double alpha_ratio) {
  RunResult r;
  const RadialProfile u = load_profile(path, r);
  const int N = u.dimension();
  const double alpha = alpha_ratio * alpha_moser(N);
  const FunctionalParams fp{N, c.beta, alpha, Order::First};
  fp.validate();
  std::vector<std::pair<std::string, double>> rows{
      {"alpha", alpha},
      {"log_tm_functional", log_tm_functional(u, fp)},
      {"tm_functional", tm_functional(u, fp)},
  };
  if (gradient_norm_N(u) <= 1.0 + 1e-9 && alpha_ratio < 1.0) rows.push_back({"at_objective", at_objective(u, alpha, c.beta)});
  print_rows(rows);
  for (const auto& [k, v] : rows) r.summary[k] = fmt(v);
  r.outputs.push_back({"eval.csv", key_value_csv(rows)});
  return r;
}

RunResult run_norms(const std::string& path) {
  RunResult r;
  const RadialProfile u = load_profile(path, r);
  const int N = u.dimension();
  std::vector<std::pair<std::string, double>> rows{
      {"gradient_norm_N", gradient_norm_N(u)},
      {"lebesgue_norm_N", lebesgue_norm(u, N)},
      {"core_value", u.core_value()},
  };
  print_rows(rows);
  for (const auto& [k, v] : rows) r.summary[k] = fmt(v);
  r.outputs.push_back({"norms.csv", key_value_csv(rows)});
  return r;
}

struct SequenceOpts {
  std::string kind = "moser";
  double n = 100.0;
  double r = 0.01;
  double eps = 0.1;
  double log_k = 10.0;
  bool check_norms = false;
};

RunResult run_sequence(const Common& c, const SequenceOpts& o) {
  RunResult r;
  std::vector<std::pair<std::string, double>> rows;
  if (o.kind == "moser") {
    const RadialProfile u = moser_profile({o.n, c.dim, c.beta});
    rows.push_back({"plateau", u.core_value()});
    if (o.check_norms) {
      rows.push_back({"gradient_norm_N", gradient_norm_N(u)});
      rows.push_back({"lebesgue_norm_N", lebesgue_norm(u, c.dim)});
    }
    r.outputs.push_back({"profile.txt", profile_text(u)});
  } else {
    ParametricProfile u = o.kind == "psi"         ? adams_psi_profile({o.r, o.eps, c.dim})
                          : o.kind == "quadratic" ? adams_quadratic_profile({o.log_k, c.dim})
                                                  : adams_quadratic_c1_profile({o.log_k, c.dim});
    rows.push_back({"core_value", u.value(0.0)});
    if (o.check_norms) {
      rows.push_back({"laplacian_norm", laplacian_norm(u, 0.5 * c.dim)});
      rows.push_back({"lebesgue_norm", lebesgue_norm(u, 0.5 * c.dim)});
    }
  }
  print_rows(rows);
  for (const auto& [k, v] : rows) r.summary[k] = fmt(v);
  r.outputs.push_back({"sequence.csv", key_value_csv(rows)});
  return r;
}

struct SweepOpts {
  int points = 15;
  double q_min = 0.9;
  double q_max = 0.999;
  std::string spacing = "geometric-in-gap";
  std::string method = "search";
  std::vector<double> ab;
  bool fit = false;
  bool plot_data = false;
  bool warm = false;
};

// Shared by sweep-at and sweep-ata; `second` selects the Adams regime.
RunResult run_sweep(const Common& c, const SweepOpts& o, bool second) {
  const int N = c.dim;
  const double critical = second ? beta_adams(N, 2) : alpha_moser(N);
  const double expo = second ? 0.5 * (N - 2.0) : N - 1.0;
  std::optional<NormBudget> nb;
  if (!o.ab.empty()) nb = NormBudget{o.ab[0], o.ab[1]};
  if (nb) nb->validate();
  const auto q = ratio_grid(o.points, o.q_min, o.q_max, o.spacing);
  std::vector<double> alphas;
  for (double x : q) alphas.push_back(x * critical);
  std::vector<double> est;
  if (o.method == "bound") {
    for (double a : alphas) est.push_back(second ? ata_lower_bound(a, c.beta, N).bound : at_lower_bound(a, c.beta, N).bound);
  } else if (second) {
    const SearchConfig cfg = search_config(c, SearchFamily::AdamsFamily);
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      SearchConfig ci = cfg;
      ci.seed = stream_seed(cfg.seed, i);
      est.push_back(estimate_ata(alphas[i], c.beta, N, ci).value);
    }
  } else {
    for (const auto& e : sweep_at(c.beta, N, alphas, search_config(c, SearchFamily::GridFreeNodes), o.warm)) {
      est.push_back(e.value);
    }
  }
  RunResult r;
  std::string csv = kSweepHeader;
  std::vector<double> gap;
  for (std::size_t i = 0; i < q.size(); ++i) {
    gap.push_back(-std::expm1(expo * std::log(q[i])));
    const double f = !nb ? 0.0
                     : second ? adams_identity_factor(alphas[i], *nb, c.beta, N)
                              : tm_identity_factor(alphas[i], *nb, c.beta, N);
    csv += sweep_row(N, c.beta, nb, alphas[i], q[i], est[i], gap[i], f);
    std::cout << "q = " << fmt(q[i]) << "  estimate = " << fmt(est[i]) << "\n";
  }
  r.outputs.push_back({"sweep.csv", csv});
  r.summary["points"] = std::to_string(q.size());
  if (o.fit) {
    const RateFit fit = rate_fit(gap, est);
    const double target_exp = -(N - c.beta) / N;  // same form in both regimes
    std::cout << "fitted slope = " << fmt(fit.slope) << "  (asymptotic " << fmt(target_exp) << ")  r2 = " << fmt(fit.r2)
              << "\n";
    r.summary["slope"] = fmt(fit.slope);
    r.summary["intercept"] = fmt(fit.intercept);
    r.summary["r2"] = fmt(fit.r2);
    r.summary["asymptotic_slope"] = fmt(target_exp);
    if (o.plot_data) {
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < q.size(); ++i) {
        const double lg = std::log(gap[i]);
        rows.push_back({lg, std::log(est[i]), fit.intercept + fit.slope * lg});
      }
      r.outputs.push_back({"ratefit_plot.csv",
                           cli::plot_csv({"log_gap", "log_estimate", "fitted_line"},
                                         {"log of the rate abscissa gap_x", "log of the estimate",
                                          "least-squares line intercept + slope * log_gap"},
                                         rows)});
    }
  }
  return r;
}

void estimate_rows(const SupremumEstimate& e, std::vector<std::pair<std::string, double>>& rows) {
  rows.push_back({"value", e.value});
  rows.push_back({"log_value", e.log_value});
  rows.push_back({"diverged", e.diverged ? 1.0 : 0.0});
  rows.push_back({"evaluations", static_cast<double>(e.evaluations)});
}

RunResult run_search(const Common& c, const std::vector<double>& ab, bool second) {
  const NormBudget nb{ab[0], ab[1]};
  const SupremumEstimate e = second ? estimate_a(nb, c.beta, c.dim, search_config(c, SearchFamily::AdamsFamily))
                                    : estimate_mt(nb, c.beta, c.dim, search_config(c, SearchFamily::GridFreeNodes));
  std::vector<std::pair<std::string, double>> rows;
  estimate_rows(e, rows);
  if (!e.parameters.empty() && (e.diverged || second)) {
    for (std::size_t i = 0; i < e.parameters.size(); ++i) rows.push_back({"parameter_" + std::to_string(i), e.parameters[i]});
  } else if (!e.parameters.empty()) {
    rows.push_back({"theta", e.parameters.back()});
  }
  print_rows(rows);
  if (!e.note.empty()) std::cout << e.note << "\n";
  RunResult r;
  for (const auto& [k, v] : rows) r.summary[k] = fmt(v);
  if (!e.note.empty()) r.summary["note"] = e.note;
  r.outputs.push_back({"summary.csv", key_value_csv(rows)});
  if (e.profile) r.outputs.push_back({"profile.txt", profile_text(*e.profile)});
  return r;
}

struct IdentityOpts {
  std::string regime = "tm";
  std::vector<double> ab{2.0, 2.0};
  int points = 20;
  double q_min = 0.05;
  double q_max = 0.98;
  std::string spacing = "linear-in-ratio";
  bool plot_data = false;
};

RunResult run_identity(const Common& c, const IdentityOpts& o) {
  const bool second = o.regime == "adams";
  const int N = c.dim;
  const NormBudget nb{o.ab[0], o.ab[1]};
  const double critical = second ? beta_adams(N, 2) : alpha_moser(N);
  std::vector<double> alphas;
  for (double q : ratio_grid(o.points, o.q_min, o.q_max, o.spacing)) alphas.push_back(q * critical);
  const IdentitySweep s = second
                              ? identity_sweep_adams(nb, c.beta, N, alphas, search_config(c, SearchFamily::AdamsFamily))
                              : identity_sweep_tm(nb, c.beta, N, alphas, search_config(c, SearchFamily::GridFreeNodes));
  RunResult r;
  std::string csv = kSweepHeader;
  for (const auto& rec : s.records) {
    csv += sweep_row(N, c.beta, nb, rec.alpha, rec.alpha_ratio, rec.estimate, rec.gap_x, rec.factor);
  }
  std::vector<std::pair<std::string, double>> rows{
      {"sup_product", s.sup_product},
      {"critical_estimate", s.mt_estimate},
      {"gap", s.gap},
      {"max_violation", s.max_violation},
      {"one_sided_ok", s.one_sided_ok ? 1.0 : 0.0},
      {"critical_diverged", s.critical.diverged ? 1.0 : 0.0},
  };
  print_rows(rows);
  for (const auto& [k, v] : rows) r.summary[k] = fmt(v);
  r.outputs.push_back({"sweep.csv", csv});
  r.outputs.push_back({"summary.csv", key_value_csv(rows)});
  if (o.plot_data) {
    std::vector<std::vector<double>> pr;
    for (const auto& rec : s.records) pr.push_back({rec.alpha_ratio, rec.product, s.mt_estimate});
    r.outputs.push_back({"identity_plot.csv",
                         cli::plot_csv({"alpha_ratio", "product", "mt_line"},
                                       {"alpha over the critical exponent", "factor times subcritical estimate",
                                        "critical estimate (constant)"},
                                       pr)});
  }
  return r;
}

RunResult run_report(const std::string& dir) {
  const fs::path root = dir.empty() ? cli::results_root() : fs::path(dir);
  if (!fs::is_directory(root)) throw DomainError("report: no directory " + root.string());
  std::vector<fs::path> manifests;
  for (const auto& ent : fs::directory_iterator(root)) {
    const fs::path m = ent.path() / "manifest.json";
    if (ent.is_directory() && fs::exists(m)) manifests.push_back(m);
  }
  std::sort(manifests.begin(), manifests.end());
  std::string csv = "run,command,timestamp,version,outputs,summary\n";
  for (const auto& p : manifests) {
    const cli::RunManifest m = cli::manifest_from_json(cli::read_file(p));
    std::string outs, sum;
    for (const auto& o : m.outputs) outs += (outs.empty() ? "" : ";") + o;
    for (const auto& [k, v] : m.summary) {
      std::string val = v;
      std::replace(val.begin(), val.end(), ',', ' ');
      sum += (sum.empty() ? "" : ";") + k + "=" + val;
    }
    csv += p.parent_path().filename().string() + "," + m.command + "," + m.timestamp + "," + m.version + "," + outs +
           "," + sum + "\n";
    std::cout << p.parent_path().filename().string() << "  " << m.command << "  " << sum << "\n";
  }
  RunResult r;
  r.summary["runs"] = std::to_string(manifests.size());
  r.outputs.push_back({"report.csv", csv});
  return r;
}

// ---- config handling -----------------------------------------------------------

// Flags win over the config file: a key=value line becomes "--key=value" only
// when argv does not already set that option.
std::vector<std::string> merge_config(const std::vector<std::string>& args,
                                      const std::map<std::string, std::string>& config) {
  std::vector<std::string> out(args.begin(), args.end());
  auto it = std::find_if(out.begin() + 1, out.end(), [](const std::string& a) {
    return std::find(std::begin(kCommands), std::end(kCommands), a) != std::end(kCommands);
  });
  if (it == out.end()) return out;  // the parser reports the missing subcommand
  const std::size_t pos = static_cast<std::size_t>(it - out.begin()) + 1;
  for (const auto& [k, v] : config) {
    if (k == "config" || k == "out") continue;
    const std::string flag = "--" + k;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (!given) out.insert(out.begin() + static_cast<long>(pos), flag + "=" + v);
  }
  return out;
}

std::optional<std::string> find_config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

std::map<std::string, std::string> resolved_config(const CLI::App* sub) {
  std::map<std::string, std::string> out;
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string name = opt->get_lnames().front();
    if (name == "help") continue;
    std::string v;
    if (opt->count() > 0) {
      for (const auto& s : opt->results()) v += (v.empty() ? "" : " ") + s;
    } else {
      v = opt->get_default_str();
    }
    out[name] = v;
  }
  return out;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::map<std::string, std::string> config;
  std::map<std::string, std::string> config_hash;
  if (const auto cp = find_config_path(args)) {
    std::string text;
    try {
      text = cli::read_file(*cp);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    try {
      config = cli::parse_config(text);
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << *cp << ": " << e.what() << "\n";
      return 2;
    }
    config_hash[*cp] = cli::sha256_hex(text);
    args = merge_config(args, config);
  }

  CLI::App app{"Numerical laboratory for sharp Trudinger-Moser and Adams inequalities"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  std::string out_dir, config_path;
  app.add_option("--out", out_dir, "run directory (default <results root>/<timestamp>-<command>)");
  app.add_option("--config", config_path, "flat key=value file; flags take precedence");
  app.set_version_flag("--version", SHARPLAB_VERSION);

  std::function<RunResult()> action;

  Common c_const;
  auto* s_const = app.add_subcommand("constants", "special constants for dimension N");
  add_common(s_const, c_const, false);
  s_const->callback([&] { action = [&] { return run_constants(c_const); }; });

  std::string profile_path;
  double alpha_ratio = 0.5;
  Common c_eval;
  auto* s_eval = app.add_subcommand("eval", "functional and objective of a radial-profile v1 file");
  s_eval->add_option("--profile", profile_path, "radial-profile v1 input")->required();
  s_eval->add_option("--alpha-ratio", alpha_ratio, "alpha / alpha_N");
  s_eval->add_option("--beta", c_eval.beta, "weight exponent");
  s_eval->callback([&] { action = [&] { return run_eval(c_eval, profile_path, alpha_ratio); }; });

  auto* s_norms = app.add_subcommand("norms", "norms of a radial-profile v1 file");
  s_norms->add_option("--profile", profile_path, "radial-profile v1 input")->required();
  s_norms->callback([&] { action = [&] { return run_norms(profile_path); }; });

  SequenceOpts seq;
  Common c_seq;
  auto* s_seq = app.add_subcommand("sequence", "members of the concentrating sequences");
  s_seq->add_option("kind", seq.kind, "moser, psi, quadratic or quadratic-c1")
      ->check(CLI::IsMember({"moser", "psi", "quadratic", "quadratic-c1"}));
  add_common(s_seq, c_seq, false);
  s_seq->add_option("--n", seq.n, "Moser index");
  s_seq->add_option("--r", seq.r, "psi inner radius");
  s_seq->add_option("--eps", seq.eps, "psi smoothing width");
  s_seq->add_option("--log-k", seq.log_k, "log k of the quadratic-cap sequence");
  s_seq->add_flag("--check-norms", seq.check_norms, "report the norms");
  s_seq->callback([&] { action = [&] { return run_sequence(c_seq, seq); }; });

  SweepOpts sw_at, sw_ata;
  Common c_at, c_ata;
  c_ata.dim = 4;
  auto add_sweep = [&](const char* name, const char* help, Common& common, SweepOpts& sw, bool second) {
    auto* s = app.add_subcommand(name, help);
    add_common(s, common, true);
    s->add_option("--points", sw.points, "grid points");
    s->add_option("--q-min", sw.q_min, "smallest alpha ratio");
    s->add_option("--q-max", sw.q_max, "largest alpha ratio");
    s->add_option("--spacing", sw.spacing, "geometric-in-gap or linear-in-ratio")
        ->check(CLI::IsMember({"geometric-in-gap", "linear-in-ratio"}));
    s->add_option("--method", sw.method, "search or bound (explicit sequence only)")
        ->check(CLI::IsMember({"search", "bound"}));
    s->add_option("--ab", sw.ab, "exponents a b for the identity factor columns")->expected(2);
    s->add_flag("--fit", sw.fit, "log-log rate fit on gap_x");
    s->add_flag("--plot-data", sw.plot_data, "write the rate-fit figure data (needs --fit)");
    if (!second) s->add_flag("--warm", sw.warm, "seed each point with the previous argmax");
    s->callback([&, second] { action = [&, second] { return run_sweep(common, sw, second); }; });
  };
  add_sweep("sweep-at", "first-order subcritical sweep", c_at, sw_at, false);
  add_sweep("sweep-ata", "second-order subcritical sweep", c_ata, sw_ata, true);

  std::vector<double> ab_mt{2.0, 2.0}, ab_a{2.0, 2.0};
  Common c_mt, c_a;
  c_a.dim = 4;
  auto add_search = [&](const char* name, const char* help, Common& common, std::vector<double>& ab, bool second) {
    auto* s = app.add_subcommand(name, help);
    add_common(s, common, true);
    s->add_option("--ab", ab, "constraint exponents a b")->expected(2);
    s->callback([&, second] { action = [&, second] { return run_search(common, ab, second); }; });
  };
  add_search("search-mt", "critical first-order supremum under ||grad u||^a + ||u||^b <= 1", c_mt, ab_mt, false);
  add_search("search-a", "critical second-order supremum under ||Delta u||^a + ||u||^b <= 1", c_a, ab_a, true);

  IdentityOpts id;
  Common c_id;
  auto* s_id = app.add_subcommand("identity", "weighted subcritical sweep against the critical search");
  add_common(s_id, c_id, true);
  s_id->add_option("--regime", id.regime, "tm or adams")->check(CLI::IsMember({"tm", "adams"}));
  s_id->add_option("--ab", id.ab, "constraint exponents a b")->expected(2);
  s_id->add_option("--points", id.points, "grid points");
  s_id->add_option("--q-min", id.q_min, "smallest alpha ratio");
  s_id->add_option("--q-max", id.q_max, "largest alpha ratio");
  s_id->add_option("--spacing", id.spacing, "geometric-in-gap or linear-in-ratio")
      ->check(CLI::IsMember({"geometric-in-gap", "linear-in-ratio"}));
  s_id->add_flag("--plot-data", id.plot_data, "write the identity figure data");
  s_id->callback([&] { action = [&] { return run_identity(c_id, id); }; });

  std::string report_dir;
  auto* s_rep = app.add_subcommand("report", "summary table of the manifests under a directory");
  s_rep->add_option("--dir", report_dir, "directory holding run directories (default results root)");
  s_rep->callback([&] { action = [&] { return run_report(report_dir); }; });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  try {
    RunResult res = action();
    cli::RunManifest m;
    m.command = command;
    m.config = resolved_config(sub);
    if (!config_path.empty()) m.config["config"] = config_path;
    m.version = SHARPLAB_VERSION;
    m.timestamp = cli::utc_timestamp();
    m.input_hashes = res.inputs;
    m.input_hashes.insert(config_hash.begin(), config_hash.end());
    m.summary = res.summary;
    const fs::path dir = out_dir.empty() ? cli::default_run_dir(command, m.timestamp) : fs::path(out_dir);
    cli::persist_run(dir, std::move(m), res.outputs);
    std::cout << "results: " << dir.string() << "\n";
    return 0;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "computation error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
