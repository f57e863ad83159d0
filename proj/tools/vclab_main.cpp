// vclab: config-driven experiments on classifiers over finite domains.
//
// Subcommands: growth, vc-dim, approx-concentration, uniform-convergence,
// bd-check, bounds-table. Each reads a TOML or JSON config (or a previous
// run's manifest.json), writes report.json / curves.csv / manifest.json into
// --out, and exits 0 on success, 2 on config errors, 3 when a bound-violation
// flag was raised (violations are findings, not crashes).

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vclab/concentration.hpp"
#include "vclab/config.hpp"
#include "vclab/experiments.hpp"
#include "vclab/hypothesis.hpp"
#include "vclab/report_io.hpp"
#include "vclab/sha256.hpp"
#include "vclab/vcdim.hpp"
#include "vclab/version.hpp"

namespace {

using vclab::ordered_json;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string out = ".";
  std::string format = "both";
};

struct CommandOutput {
  ordered_json report;
  std::string csv;
  bool violation_flagged = false;
};

nlohmann::json load_config(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  nlohmann::json cfg;
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".toml") {
    cfg = vclab::toml::parse_file(path);
  } else {
    cfg = nlohmann::json::parse(vclab::read_text_file(path));
  }
  // a manifest from a previous run re-runs its resolved config
  if (cfg.is_object() && cfg.contains("resolved_config")) return cfg["resolved_config"];
  return cfg;
}

std::string csv_cell(const std::optional<vclab::BigInt>& v) {
  return v ? v->str() : std::string();
}

CommandOutput run_growth(const ordered_json& r, int threads) {
  const auto ps = vclab::config::build_point_set(r);
  const auto H = vclab::config::build_hypothesis(r, ps.domain);
  const auto& g = r.at("growth");
  vclab::GrowthOptions opt;
  opt.cap = g.value("cap", 20);
  opt.num_samples = g.value("num_samples", 10000LL);
  opt.use_cover_formula = g.value("use_cover_formula", false);
  opt.sample_range = g.value("sample_range", 1.0);
  opt.threads = threads;
  opt.seed = vclab::config::hypothesis_seed(r.at("seed").get<std::uint64_t>());
  if (g.contains("dv")) opt.dv = g.at("dv").get<int>();
  const auto rec = vclab::growth_record(H, ps, opt);

  CommandOutput out;
  out.report["command"] = "growth";
  out.report["seed"] = r.at("seed");
  out.report["general_position"] = ps.general_position;
  out.report["record"] = vclab::to_json(rec);
  out.csv = "m,cardinality,is_lower_bound,method,vc_poly,sauer_shelah_sum,sauer_shelah_env,bartlett_log\n";
  out.csv += std::to_string(rec.m) + "," + rec.value().str() + "," +
             (rec.lower_bound ? "1" : "0") + "," + rec.method + "," +
             csv_cell(rec.bounds.vc_poly) + "," + csv_cell(rec.bounds.sauer_sum) + ",";
  out.csv += rec.bounds.sauer_env ? vclab::format_double(*rec.bounds.sauer_env) : std::string();
  out.csv += ",";
  out.csv += rec.bounds.bartlett_log ? vclab::format_double(*rec.bounds.bartlett_log) : std::string();
  out.csv += "\n";
  return out;
}

CommandOutput run_vcdim(const ordered_json& r, int /*threads*/) {
  const auto ps = vclab::config::build_point_set(r);
  const auto H = vclab::config::build_hypothesis(r, ps.domain);
  const auto& v = r.at("vcdim");
  const int k_max = v.value("k_max", 5);

  vclab::RealizabilityOracle oracle;
  if (std::holds_alternative<vclab::AffineHalfspace>(H)) {
    oracle = vclab::halfspace_oracle(ps.domain.points());
  } else if (const auto* list = std::get_if<vclab::ExplicitList>(&H)) {
    oracle = vclab::explicit_list_oracle(list->members);
  } else {
    const auto& net = std::get<vclab::ReluNetwork>(H);
    oracle = vclab::relu_sampling_oracle(
        ps.domain.points(), net.arch, v.value("num_samples", 20000LL),
        vclab::config::hypothesis_seed(r.at("seed").get<std::uint64_t>()));
  }
  const int vc = vclab::vc_dimension_search(oracle, ps.size(), k_max);

  CommandOutput out;
  out.report["command"] = "vc-dim";
  out.report["seed"] = r.at("seed");
  out.report["pool_size"] = ps.size();
  out.report["k_max"] = k_max;
  out.report["vc_dimension"] = vc;
  out.csv = "pool_size,k_max,vc_dimension\n" + std::to_string(ps.size()) + "," +
            std::to_string(k_max) + "," + std::to_string(vc) + "\n";
  return out;
}

CommandOutput run_approx(const ordered_json& r, int threads) {
  const auto ps = vclab::config::build_point_set(r);
  const auto Hclass = vclab::config::build_hypothesis(r, ps.domain);
  const auto H = vclab::config::as_classifier_list(Hclass, ps, r, threads);
  vclab::require(!H.empty(), "hypothesis class empty");
  const auto P = vclab::config::build_distribution(r, ps.domain);
  const auto& e = r.at("experiment");
  std::vector<double> grid = e.at("lambda_grid").get<std::vector<double>>();
  if (e.value("include_corollary_lambda", true))
    grid.push_back(std::pow(static_cast<double>(ps.size()), -0.25));
  const long long trials = r.at("trials").get<long long>();
  const std::uint64_t seed = r.at("seed").get<std::uint64_t>();

  const auto res =
      vclab::approx_concentration_experiment(ps.domain, H, P, grid, trials, seed, threads);

  std::vector<double> sorted;
  sorted.reserve(res.min_hamming.size());
  for (long long t = 0; t < trials; ++t) sorted.push_back(res.dist_sq(t));
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    const std::size_t idx = std::min(sorted.size() - 1,
                                     static_cast<std::size_t>(q * static_cast<double>(sorted.size())));
    return sorted[idx];
  };

  CommandOutput out;
  out.report["command"] = "approx-concentration";
  out.report["seed"] = r.at("seed");
  out.report["mu"] = res.mu;
  out.report["mu_index"] = static_cast<long long>(res.mu_index);
  out.report["mean_dist_sq"] = res.mean_dist_sq;
  out.report["dist_sq_quantiles"] =
      ordered_json{{"q01", quantile(0.01)}, {"q05", quantile(0.05)}, {"q50", quantile(0.50)},
                   {"q95", quantile(0.95)}, {"q99", quantile(0.99)}};
  out.report["reports"] = ordered_json::array({vclab::to_json(res.lower), vclab::to_json(res.upper)});
  out.csv = "event,lambda,empirical_freq,bound_printed,bound_derived,violated\n";
  for (const auto* rep : {&res.lower, &res.upper}) {
    for (std::size_t k = 0; k < rep->lambda_grid.size(); ++k) {
      out.csv += rep->kind + "," + vclab::format_double(rep->lambda_grid[k]) + "," +
                 vclab::format_double(rep->empirical_freq[k]) + "," +
                 vclab::format_double(rep->bound_printed[k]) + "," +
                 vclab::format_double(rep->bound_derived[k]) + (rep->violated[k] ? ",1\n" : ",0\n");
    }
  }
  out.violation_flagged = res.any_violation();
  return out;
}

CommandOutput run_uniform(const ordered_json& r, int threads) {
  const auto ps = vclab::config::build_point_set(r);
  const auto Hclass = vclab::config::build_hypothesis(r, ps.domain);
  const auto H = vclab::config::as_classifier_list(Hclass, ps, r, threads);
  vclab::require(!H.empty(), "hypothesis class empty");
  const auto D = vclab::config::build_sampling(r, ps.domain);
  const auto loss = vclab::config::build_loss(r);
  const auto& e = r.at("experiment");
  const auto grid = e.at("lambda_grid").get<std::vector<double>>();
  const auto n_grid = e.at("n_grid").get<std::vector<int>>();
  const long long trials = r.at("trials").get<long long>();
  const std::uint64_t seed = r.at("seed").get<std::uint64_t>();

  const auto res =
      vclab::uniform_convergence_experiment(H, D, loss, n_grid, grid, trials, seed, threads);

  CommandOutput out;
  out.report["command"] = "uniform-convergence";
  out.report["seed"] = r.at("seed");
  out.report["n_grid"] = res.n_grid;
  out.report["median_sup_deviation"] = res.median_sup;
  ordered_json reps = ordered_json::array();
  for (const auto& rep : res.reports) reps.push_back(vclab::to_json(rep));
  out.report["reports"] = std::move(reps);
  out.csv = "n,lambda,empirical_freq,bound_printed,bound_derived,violated,median_sup\n";
  for (std::size_t k = 0; k < res.reports.size(); ++k) {
    const auto& rep = res.reports[k];
    for (std::size_t j = 0; j < rep.lambda_grid.size(); ++j) {
      out.csv += std::to_string(rep.params.n) + "," + vclab::format_double(rep.lambda_grid[j]) +
                 "," + vclab::format_double(rep.empirical_freq[j]) + "," +
                 vclab::format_double(rep.bound_printed[j]) + "," +
                 vclab::format_double(rep.bound_derived[j]) + (rep.violated[j] ? ",1," : ",0,") +
                 vclab::format_double(res.median_sup[k]) + "\n";
    }
  }
  out.violation_flagged = res.any_violation();
  return out;
}

CommandOutput run_bd(const ordered_json& r, int /*threads*/) {
  const auto ps = vclab::config::build_point_set(r);
  const auto Hclass = vclab::config::build_hypothesis(r, ps.domain);
  const auto H = vclab::config::as_classifier_list(Hclass, ps, r, 1);
  vclab::require(!H.empty(), "hypothesis class empty");
  const vclab::Classifier& h = H.front();
  const auto& bd = r.at("bd");
  const bool exhaustive = bd.value("exhaustive", false);
  const std::string functional = bd.at("functional").get<std::string>();
  const std::uint64_t seed = r.at("seed").get<std::uint64_t>();
  const long long trials = r.at("trials").get<long long>();

  CommandOutput out;
  out.report["command"] = "bd-check";
  out.report["seed"] = r.at("seed");
  if (functional == "eta") {
    const auto rep = exhaustive ? vclab::bd_flip_check_eta_exhaustive(h)
                                : vclab::bd_flip_check_eta(h, trials, seed);
    out.report["report"] = vclab::to_json(rep);
    out.violation_flagged = !rep.exact_equality;
    out.csv = "coordinate,claimed,observed_max,slack\n";
    for (std::size_t i = 0; i < rep.claimed.size(); ++i)
      out.csv += std::to_string(i) + "," + vclab::format_double(rep.claimed[i]) + "," +
                 vclab::format_double(rep.observed_max[i]) + "," +
                 vclab::format_double(rep.slack[i]) + "\n";
  } else {
    const auto D = vclab::config::build_sampling(r, ps.domain);
    const auto loss = vclab::config::build_loss(r);
    const int n = bd.value("n", 3);
    if (exhaustive) {
      const auto chk = vclab::bd_flip_check_empirical_exhaustive(h, loss, n);
      out.report["report"] = ordered_json{{"functional", "empirical-error"},
                                          {"exhaustive", true},
                                          {"n", n},
                                          {"max_difference", chk.max_difference},
                                          {"claimed", chk.claimed},
                                          {"cases", chk.cases}};
      out.violation_flagged = chk.max_difference > chk.claimed;
      out.csv = "n,claimed,max_difference\n" + std::to_string(n) + "," +
                vclab::format_double(chk.claimed) + "," + vclab::format_double(chk.max_difference) +
                "\n";
    } else {
      const auto rep = vclab::bd_flip_check_empirical(h, D, loss, n, trials, seed);
      out.report["report"] = vclab::to_json(rep);
      out.violation_flagged = !rep.exact_equality;
      out.csv = "coordinate,claimed,observed_max,slack\n";
      for (std::size_t i = 0; i < rep.claimed.size(); ++i)
        out.csv += std::to_string(i) + "," + vclab::format_double(rep.claimed[i]) + "," +
                   vclab::format_double(rep.observed_max[i]) + "," +
                   vclab::format_double(rep.slack[i]) + "\n";
    }
  }
  return out;
}

CommandOutput run_bounds_table(const ordered_json& r, int /*threads*/) {
  const auto& t = r.at("table");
  const int dv = t.at("dv").get<int>();
  const long long L = t.value("L", 1LL);
  const long long W = t.value("W", 1LL);

  CommandOutput out;
  out.report["command"] = "bounds-table";
  out.report["seed"] = r.at("seed");
  ordered_json rows = ordered_json::array();
  out.csv = "m,dv,vc_poly,sauer_shelah_sum,sauer_shelah_env,L,W,bartlett_log\n";
  for (const auto& mv : t.at("m_values")) {
    const int m = mv.get<int>();
    ordered_json row;
    row["m"] = m;
    row["dv"] = dv;
    std::string vc_cell, sum_cell, env_cell;
    if (m > dv) {
      const auto vc = vclab::vc_polynomial_bound(m, dv);
      const auto ss = vclab::sauer_shelah_bound(m, dv);
      row["vc_poly"] = vclab::bigint_json(vc);
      row["sauer_shelah_sum"] = vclab::bigint_json(ss.sum);
      row["sauer_shelah_env"] = ss.envelope;
      vc_cell = vc.str();
      sum_cell = ss.sum.str();
      env_cell = vclab::format_double(ss.envelope);
    }
    const auto bart = vclab::bartlett_bound(m, L, W);
    row["L"] = L;
    row["W"] = W;
    row["bartlett_log"] = bart.log_value;
    rows.push_back(std::move(row));
    out.csv += std::to_string(m) + "," + std::to_string(dv) + "," + vc_cell + "," + sum_cell +
               "," + env_cell + "," + std::to_string(L) + "," + std::to_string(W) + "," +
               vclab::format_double(bart.log_value) + "\n";
  }
  out.report["rows"] = std::move(rows);
  return out;
}

int run_command(const std::string& command, const CommonFlags& flags) {
  nlohmann::json cfg;
  try {
    cfg = load_config(flags.config_path);
  } catch (const std::exception& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return 2;
  }

  const auto diagnostics = vclab::config::validate(cfg, command);
  if (!diagnostics.empty()) {
    for (const auto& d : diagnostics) std::cerr << "config error: " << d << "\n";
    return 2;
  }
  const ordered_json resolved = vclab::config::resolve(cfg, command, flags.seed);

  const auto t0 = std::chrono::steady_clock::now();
  CommandOutput result;
  try {
    if (command == "growth") result = run_growth(resolved, flags.threads);
    else if (command == "vc-dim") result = run_vcdim(resolved, flags.threads);
    else if (command == "approx-concentration") result = run_approx(resolved, flags.threads);
    else if (command == "uniform-convergence") result = run_uniform(resolved, flags.threads);
    else if (command == "bd-check") result = run_bd(resolved, flags.threads);
    else result = run_bounds_table(resolved, flags.threads);
  } catch (const std::exception& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return 2;
  }
  const double duration =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(flags.out, ec);

  ordered_json manifest;
  manifest["tool"] = vclab::kToolName;
  manifest["version"] = vclab::kVersion;
  manifest["command"] = command;
  manifest["resolved_config"] = resolved;
  manifest["duration_seconds"] = duration;
  ordered_json digests = ordered_json::object();

  const std::string report_text = result.report.dump(2) + "\n";
  if (flags.format == "json" || flags.format == "both") {
    vclab::write_text_file(flags.out + "/report.json", report_text);
    digests["report.json"] = "sha256:" + vclab::Sha256::hash_hex(report_text);
  }
  if (flags.format == "csv" || flags.format == "both") {
    vclab::write_text_file(flags.out + "/curves.csv", result.csv);
    digests["curves.csv"] = "sha256:" + vclab::Sha256::hash_hex(result.csv);
  }
  manifest["outputs"] = std::move(digests);
  vclab::write_text_file(flags.out + "/manifest.json", manifest.dump(2) + "\n");

  if (result.violation_flagged) {
    std::cerr << "bound violation flagged; see report\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"experiments on classifiers over finite domains: growth functions, "
               "VC dimension, and concentration of approximation/empirical errors"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string chosen;
  for (const auto& name : vclab::config::commands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", flags.config_path, "TOML or JSON config, or a manifest.json");
    sub->add_option("--seed", [&flags](const std::vector<std::string>& vals) {
      flags.seed = std::stoull(vals.front());
      return true;
    }, "override the experiment seed (u64)");
    sub->add_option("--threads", flags.threads, "worker threads (never changes output bytes)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", flags.out, "output directory");
    sub->add_option("--format", flags.format, "json|csv|both")
        ->check(CLI::IsMember({"json", "csv", "both"}));
    sub->callback([&chosen, name] { chosen = name; });
  }

  CLI11_PARSE(app, argc, argv);
  return run_command(chosen, flags);
}
