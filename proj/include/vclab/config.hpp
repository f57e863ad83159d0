#pragma once

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "vclab/domain.hpp"
#include "vclab/hamming.hpp"
#include "vclab/hypothesis.hpp"
#include "vclab/pointset.hpp"
#include "vclab/report_io.hpp"
#include "vclab/toml.hpp"

namespace vclab::config {

using nlohmann::json;

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"growth",        "vc-dim",
                                          "approx-concentration", "uniform-convergence",
                                          "bd-check",      "bounds-table"};
  return c;
}

// ---------------------------------------------------------------------------
// validation: every violation reported, unknown keys are errors
// ---------------------------------------------------------------------------

namespace detail {

inline const std::map<std::string, std::set<std::string>>& section_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"domain", {"source", "m", "d", "points", "path"}},
      {"hypothesis", {"kind", "count", "classifiers", "path", "widths"}},
      {"distribution", {"kind", "probs", "center", "epsilon"}},
      {"sampling", {"x_weights", "p0"}},
      {"loss", {"kind", "table"}},
      {"experiment", {"lambda_grid", "n_grid", "include_corollary_lambda"}},
      {"growth", {"cap", "num_samples", "use_cover_formula", "dv", "sample_range"}},
      {"vcdim", {"k_max", "num_samples"}},
      {"bd", {"functional", "exhaustive", "n"}},
      {"table", {"m_values", "dv", "L", "W"}},
  };
  return keys;
}

inline std::set<std::string> allowed_top_keys(const std::string& command) {
  std::set<std::string> keys{"command", "seed"};
  if (command == "growth") keys.insert({"domain", "hypothesis", "growth"});
  if (command == "vc-dim") keys.insert({"domain", "hypothesis", "vcdim"});
  if (command == "approx-concentration")
    keys.insert({"trials", "domain", "hypothesis", "distribution", "experiment"});
  if (command == "uniform-convergence")
    keys.insert({"trials", "domain", "hypothesis", "sampling", "loss", "experiment"});
  if (command == "bd-check")
    keys.insert({"trials", "domain", "hypothesis", "bd", "sampling", "loss"});
  if (command == "bounds-table") keys.insert("table");
  return keys;
}

inline bool is_u64(const json& v) { return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0); }

inline void check_positive_grid(const json& grid, const std::string& where,
                                std::vector<std::string>& out) {
  if (!grid.is_array()) {
    out.push_back(where + " must be an array of numbers");
    return;
  }
  for (const auto& v : grid) {
    if (!v.is_number() || v.get<double>() <= 0.0) {
      out.push_back(where + " entries must be positive numbers");
      return;
    }
  }
}

}  // namespace detail

/// Structural + value validation; returns all diagnostics at once.
inline std::vector<std::string> validate(const json& cfg, const std::string& command) {
  std::vector<std::string> out;
  if (!cfg.is_object()) return {"config must be an object"};

  bool known_command = false;
  for (const auto& c : commands()) known_command = known_command || c == command;
  if (!known_command) out.push_back("unknown command: " + command);

  const auto allowed = detail::allowed_top_keys(command);
  for (const auto& [key, value] : cfg.items()) {
    if (!allowed.count(key)) {
      out.push_back("unknown key for " + command + ": " + key);
      continue;
    }
    const auto sec = detail::section_keys().find(key);
    if (sec != detail::section_keys().end()) {
      if (!value.is_object()) {
        out.push_back("[" + key + "] must be a table");
        continue;
      }
      for (const auto& [k2, v2] : value.items())
        if (!sec->second.count(k2)) out.push_back("[" + key + "] unknown key: " + k2);
    }
  }

  if (cfg.contains("command") && cfg["command"].is_string() &&
      cfg["command"].get<std::string>() != command)
    out.push_back("config command '" + cfg["command"].get<std::string>() +
                  "' does not match invoked command '" + command + "'");
  if (cfg.contains("seed") && !detail::is_u64(cfg["seed"]))
    out.push_back("seed must be a nonnegative integer");
  if (cfg.contains("trials") &&
      (!cfg["trials"].is_number_integer() || cfg["trials"].get<long long>() < 1))
    out.push_back("trials must be a positive integer");

  auto need = [&](const char* section) {
    if (!cfg.contains(section) || !cfg[section].is_object())
      out.push_back(std::string("missing required section [") + section + "]");
  };

  // domain
  if (cfg.contains("domain") && cfg["domain"].is_object()) {
    const auto& d = cfg["domain"];
    const std::string source = d.value("source", "random");
    if (source == "random") {
      if (!d.contains("m") || !d["m"].is_number_integer() || d["m"].get<long long>() < 1)
        out.push_back("[domain] random source needs positive integer m");
      if (!d.contains("d") || !d["d"].is_number_integer() || d["d"].get<long long>() < 1)
        out.push_back("[domain] random source needs positive integer d");
    } else if (source == "inline") {
      if (!d.contains("points") || !d["points"].is_array() || d["points"].empty())
        out.push_back("[domain] inline source needs a nonempty points array");
    } else if (source == "csv") {
      if (!d.contains("path") || !d["path"].is_string())
        out.push_back("[domain] csv source needs a path");
    } else {
      out.push_back("[domain] source must be random | inline | csv");
    }
  }

  // hypothesis
  if (cfg.contains("hypothesis") && cfg["hypothesis"].is_object()) {
    const auto& h = cfg["hypothesis"];
    const std::string kind = h.value("kind", "");
    if (kind == "random") {
      if (!h.contains("count") || !h["count"].is_number_integer() ||
          h["count"].get<long long>() < 1)
        out.push_back("[hypothesis] random kind needs positive integer count ('hypothesis class empty' when 0)");
    } else if (kind == "explicit") {
      const bool inline_ok = h.contains("classifiers") && h["classifiers"].is_array() &&
                             !h["classifiers"].empty();
      const bool file_ok = h.contains("path") && h["path"].is_string();
      if (!inline_ok && !file_ok)
        out.push_back("[hypothesis] explicit kind needs classifiers or path; hypothesis class empty otherwise");
    } else if (kind == "halfspace") {
      // dimension comes from the domain
    } else if (kind == "relu") {
      if (!h.contains("widths") || !h["widths"].is_array() || h["widths"].empty())
        out.push_back("[hypothesis] relu kind needs nonempty widths array");
      else
        for (const auto& w : h["widths"])
          if (!w.is_number_integer() || w.get<long long>() < 1)
            out.push_back("[hypothesis] relu widths must be positive integers");
    } else {
      out.push_back("[hypothesis] kind must be random | explicit | halfspace | relu");
    }
  }

  // distribution
  if (cfg.contains("distribution") && cfg["distribution"].is_object()) {
    const auto& p = cfg["distribution"];
    const std::string kind = p.value("kind", "uniform");
    if (kind == "probs") {
      if (!p.contains("probs") || !p["probs"].is_array() || p["probs"].empty())
        out.push_back("[distribution] probs kind needs a probs array");
      else
        for (const auto& v : p["probs"])
          if (!v.is_number() || v.get<double>() < 0.0 || v.get<double>() > 1.0)
            out.push_back("[distribution] probs entries must lie in [0,1]");
    } else if (kind == "concentrated") {
      if (!p.contains("epsilon") || !p["epsilon"].is_number() ||
          p["epsilon"].get<double>() < 0.0 || p["epsilon"].get<double>() > 1.0)
        out.push_back("[distribution] concentrated kind needs epsilon in [0,1]");
    } else if (kind != "uniform") {
      out.push_back("[distribution] kind must be uniform | probs | concentrated");
    }
  }

  // sampling
  if (cfg.contains("sampling") && cfg["sampling"].is_object()) {
    const auto& s = cfg["sampling"];
    if (s.contains("p0")) {
      const auto check_p = [&](const json& v) {
        if (!v.is_number() || v.get<double>() < 0.0 || v.get<double>() > 1.0)
          out.push_back("[sampling] p0 must lie in [0,1]");
      };
      if (s["p0"].is_array())
        for (const auto& v : s["p0"]) check_p(v);
      else
        check_p(s["p0"]);
    }
    if (s.contains("x_weights") && !s["x_weights"].is_array() &&
        !(s["x_weights"].is_string() && s["x_weights"] == "uniform"))
      out.push_back("[sampling] x_weights must be \"uniform\" or an array");
  }

  // loss
  if (cfg.contains("loss") && cfg["loss"].is_object()) {
    const auto& l = cfg["loss"];
    const std::string kind = l.value("kind", "zero-one");
    if (kind == "table") {
      if (!l.contains("table") || !l["table"].is_array() || l["table"].size() != 2 ||
          !l["table"][0].is_array() || l["table"][0].size() != 2 || !l["table"][1].is_array() ||
          l["table"][1].size() != 2)
        out.push_back("[loss] table must be a 2x2 array [[l(-,-), l(-,+)], [l(+,-), l(+,+)]]");
    } else if (kind != "zero-one") {
      out.push_back("[loss] kind must be zero-one | table");
    }
  }

  // experiment grids
  if (cfg.contains("experiment") && cfg["experiment"].is_object()) {
    const auto& e = cfg["experiment"];
    if (e.contains("lambda_grid"))
      detail::check_positive_grid(e["lambda_grid"], "[experiment] lambda_grid", out);
    if (e.contains("n_grid")) {
      if (!e["n_grid"].is_array() || e["n_grid"].empty())
        out.push_back("[experiment] n_grid must be a nonempty array");
      else
        for (const auto& v : e["n_grid"])
          if (!v.is_number_integer() || v.get<long long>() < 1)
            out.push_back("[experiment] n_grid entries must be positive integers");
    }
  }

  // bd
  if (cfg.contains("bd") && cfg["bd"].is_object()) {
    const auto& b = cfg["bd"];
    const std::string fn = b.value("functional", "");
    if (fn != "eta" && fn != "empirical")
      out.push_back("[bd] functional must be eta | empirical");
    if (b.contains("n") && (!b["n"].is_number_integer() || b["n"].get<long long>() < 1))
      out.push_back("[bd] n must be a positive integer");
  }

  // table
  if (cfg.contains("table") && cfg["table"].is_object()) {
    const auto& t = cfg["table"];
    if (!t.contains("m_values") || !t["m_values"].is_array() || t["m_values"].empty())
      out.push_back("[table] needs a nonempty m_values array");
    if (!t.contains("dv") || !t["dv"].is_number_integer() || t["dv"].get<long long>() < 1)
      out.push_back("[table] needs a positive integer dv");
  }

  // per-command required sections
  if (command == "growth" || command == "vc-dim") {
    need("domain");
    need("hypothesis");
  } else if (command == "approx-concentration") {
    need("domain");
    need("hypothesis");
  } else if (command == "uniform-convergence") {
    need("domain");
    need("hypothesis");
    need("sampling");
  } else if (command == "bd-check") {
    need("domain");
    need("hypothesis");
    need("bd");
    if (cfg.contains("bd") && cfg["bd"].is_object() &&
        cfg["bd"].value("functional", "") == "empirical" && !cfg.contains("sampling"))
      out.push_back("missing required section [sampling] (bd empirical check)");
  } else if (command == "bounds-table") {
    need("table");
  }

  return out;
}

// ---------------------------------------------------------------------------
// resolution: defaults filled in and echoed, seed always explicit
// ---------------------------------------------------------------------------

inline ordered_json resolve(const json& cfg, const std::string& command,
                            std::optional<std::uint64_t> seed_override) {
  ordered_json r;
  r["command"] = command;
  std::uint64_t seed;
  if (seed_override) {
    seed = *seed_override;
  } else if (cfg.contains("seed")) {
    seed = cfg["seed"].get<std::uint64_t>();
  } else {
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  r["seed"] = seed;
  if (command == "approx-concentration" || command == "uniform-convergence" ||
      command == "bd-check")
    r["trials"] = cfg.value("trials", 10000LL);

  auto copy_section = [&](const char* name, ordered_json defaults) {
    if (!cfg.contains(name) && defaults.empty()) return;
    ordered_json sec = std::move(defaults);
    if (cfg.contains(name))
      for (const auto& [k, v] : cfg[name].items()) sec[k] = v;
    r[name] = std::move(sec);
  };

  if (command != "bounds-table") {
    copy_section("domain", ordered_json{{"source", "random"}});
    copy_section("hypothesis", ordered_json::object());
  }
  if (command == "approx-concentration")
    copy_section("distribution", ordered_json{{"kind", "uniform"}});
  if (command == "uniform-convergence" ||
      (command == "bd-check" && cfg.contains("sampling")))
    copy_section("sampling", ordered_json{{"x_weights", "uniform"}, {"p0", 0.5}});
  if (command == "uniform-convergence" || command == "bd-check")
    copy_section("loss", ordered_json{{"kind", "zero-one"}});
  if (command == "approx-concentration" || command == "uniform-convergence") {
    ordered_json defaults{{"lambda_grid", {0.05, 0.1, 0.2, 0.4, 0.8}},
                          {"include_corollary_lambda", true}};
    if (command == "uniform-convergence") defaults["n_grid"] = {16, 64, 256, 1024};
    copy_section("experiment", std::move(defaults));
  }
  if (command == "growth")
    copy_section("growth", ordered_json{{"cap", 20},
                                        {"num_samples", 10000},
                                        {"use_cover_formula", false},
                                        {"sample_range", 1.0}});
  if (command == "vc-dim") copy_section("vcdim", ordered_json{{"k_max", 5}, {"num_samples", 20000}});
  if (command == "bd-check") copy_section("bd", ordered_json{{"exhaustive", false}, {"n", 3}});
  if (command == "bounds-table") copy_section("table", ordered_json{{"L", 1}, {"W", 1}});
  return r;
}

// ---------------------------------------------------------------------------
// builders from a resolved config
// ---------------------------------------------------------------------------

// fixed seed roles so reruns reproduce every derived stream
inline std::uint64_t domain_seed(std::uint64_t seed) { return mix_seed(seed, 101); }
inline std::uint64_t hypothesis_seed(std::uint64_t seed) { return mix_seed(seed, 202); }
inline std::uint64_t distribution_seed(std::uint64_t seed) { return mix_seed(seed, 303); }

inline PointSet build_point_set(const ordered_json& r) {
  const auto& d = r.at("domain");
  const std::string source = d.value("source", "random");
  if (source == "random")
    return random_point_set(d.at("m").get<int>(), d.at("d").get<int>(),
                            domain_seed(r.at("seed").get<std::uint64_t>()));
  if (source == "inline") {
    std::vector<std::vector<double>> pts;
    for (const auto& row : d.at("points")) pts.push_back(row.get<std::vector<double>>());
    return make_point_set(Domain(std::move(pts)));
  }
  return make_point_set(domain_from_csv(d.at("path").get<std::string>()));
}

inline HypothesisClass build_hypothesis(const ordered_json& r, const Domain& dom) {
  const auto& h = r.at("hypothesis");
  const std::string kind = h.at("kind").get<std::string>();
  if (kind == "halfspace") return AffineHalfspace{dom.dim()};
  if (kind == "relu") {
    ReluArch arch;
    arch.input_dim = dom.dim();
    for (const auto& w : h.at("widths")) arch.hidden.push_back(w.get<int>());
    return ReluNetwork{arch};
  }
  if (kind == "random") {
    return ExplicitList{random_classifiers(dom, h.at("count").get<int>(),
                                           hypothesis_seed(r.at("seed").get<std::uint64_t>()))};
  }
  // explicit
  std::vector<std::string> strings;
  if (h.contains("classifiers")) {
    for (const auto& s : h.at("classifiers")) strings.push_back(s.get<std::string>());
  } else {
    const auto file = nlohmann::json::parse(read_text_file(h.at("path").get<std::string>()));
    require(file.contains("classifiers") && file["classifiers"].is_array(),
            "hypothesis file must contain a classifiers array");
    for (const auto& s : file["classifiers"]) strings.push_back(s.get<std::string>());
  }
  require(!strings.empty(), "hypothesis class empty");
  ExplicitList list;
  for (const auto& s : strings) list.members.push_back(Classifier::from_string(dom, s));
  return list;
}

/// The experiments need classifier lists; halfspace classes are expanded by
/// enumeration, ReLU ones by sampled labelings.
inline std::vector<Classifier> as_classifier_list(const HypothesisClass& H, const PointSet& ps,
                                                  const ordered_json& r, int threads) {
  if (const auto* list = std::get_if<ExplicitList>(&H)) return list->members;
  if (std::holds_alternative<AffineHalfspace>(H)) {
    EnumerationOptions opt;
    opt.threads = threads;
    return enumerate_halfspace_dichotomies(ps, opt).classifiers(ps.domain);
  }
  const auto& net = std::get<ReluNetwork>(H);
  const auto seed = hypothesis_seed(r.at("seed").get<std::uint64_t>());
  long long budget = 10000;
  if (r.contains("hypothesis") && r["hypothesis"].contains("num_samples"))
    budget = r["hypothesis"]["num_samples"].get<long long>();
  std::vector<Classifier> out;
  std::unordered_set<std::uint64_t> seen;
  for (long long s = 0; s < budget; ++s) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
    const auto params = sample_relu_params(net.arch, rng);
    std::uint64_t mask = 0;
    for (int i = 0; i < ps.size(); ++i)
      if (relu_forward(params, ps.domain.point(i)) == 1) mask |= 1ULL << i;
    if (seen.insert(mask).second) out.push_back(Classifier::from_mask(ps.domain, mask));
  }
  return out;
}

inline ProductDistribution build_distribution(const ordered_json& r, const Domain& dom) {
  if (!r.contains("distribution")) return ProductDistribution::uniform(dom.size());
  const auto& p = r.at("distribution");
  const std::string kind = p.value("kind", "uniform");
  if (kind == "uniform") return ProductDistribution::uniform(dom.size());
  if (kind == "probs") {
    auto probs = p.at("probs").get<std::vector<double>>();
    require(static_cast<int>(probs.size()) == dom.size(),
            "[distribution] probs length must equal m");
    return ProductDistribution(std::move(probs));
  }
  // concentrated near a center classifier
  const double eps = p.at("epsilon").get<double>();
  Classifier center = p.contains("center") && p.at("center").is_string() &&
                              p.at("center").get<std::string>() != "random"
                          ? Classifier::from_string(dom, p.at("center").get<std::string>())
                          : Classifier::sample(dom, ProductDistribution::uniform(dom.size()).probs(),
                                               distribution_seed(r.at("seed").get<std::uint64_t>()));
  return ProductDistribution::concentrated_near(center, eps);
}

inline SamplingDistribution build_sampling(const ordered_json& r, const Domain& dom) {
  const auto& s = r.at("sampling");
  std::vector<double> weights;
  if (s.contains("x_weights") && s.at("x_weights").is_array()) {
    weights = s.at("x_weights").get<std::vector<double>>();
    require(static_cast<int>(weights.size()) == dom.size(),
            "[sampling] x_weights length must equal m");
  } else {
    weights.assign(static_cast<std::size_t>(dom.size()), 1.0 / dom.size());
  }
  std::vector<double> p0;
  if (s.contains("p0") && s.at("p0").is_array()) {
    p0 = s.at("p0").get<std::vector<double>>();
    require(p0.size() == 1 || static_cast<int>(p0.size()) == dom.size(),
            "[sampling] p0 must be scalar or one value per point");
  } else {
    p0 = {s.value("p0", 0.5)};
  }
  return SamplingDistribution(std::move(weights), std::move(p0));
}

inline LossFunction build_loss(const ordered_json& r) {
  if (!r.contains("loss")) return LossFunction::zero_one();
  const auto& l = r.at("loss");
  if (l.value("kind", "zero-one") == "zero-one") return LossFunction::zero_one();
  const auto& t = l.at("table");
  return LossFunction(t[0][0].get<double>(), t[0][1].get<double>(), t[1][0].get<double>(),
                      t[1][1].get<double>());
}

}  // namespace vclab::config
