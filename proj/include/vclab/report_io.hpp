#pragma once

#include <charconv>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vclab/concentration.hpp"
#include "vclab/experiments.hpp"
#include "vclab/growth.hpp"

namespace vclab {

using ordered_json = nlohmann::ordered_json;

/// Shortest decimal string that round-trips the double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general);
  return std::string(buf, res.ptr);
}

inline ordered_json bigint_json(const BigInt& v) {
  if (v <= BigInt(std::uint64_t(1) << 53) && v >= 0) return static_cast<std::uint64_t>(v);
  return v.str();  // decimal string once past exact double-free integer range
}

// Domains and product distributions interchange as {"points": [[...]]} and
// {"probs": [...]}; both fields may live in one object.
inline ordered_json to_json(const Domain& dom) {
  ordered_json j;
  j["points"] = dom.points();
  return j;
}

inline ordered_json to_json(const ProductDistribution& P) {
  ordered_json j;
  j["probs"] = P.probs();
  return j;
}

inline Domain domain_from_json(const nlohmann::json& j) {
  require(j.contains("points") && j["points"].is_array(), "expected a points array");
  std::vector<std::vector<double>> pts;
  for (const auto& row : j["points"]) pts.push_back(row.get<std::vector<double>>());
  return Domain(std::move(pts));
}

inline ProductDistribution product_distribution_from_json(const nlohmann::json& j) {
  require(j.contains("probs") && j["probs"].is_array(), "expected a probs array");
  return ProductDistribution(j["probs"].get<std::vector<double>>());
}

inline ordered_json to_json(const GrowthRecord& rec) {
  ordered_json j;
  j["m"] = rec.m;
  if (rec.count) j["count"] = bigint_json(*rec.count);
  if (rec.lower_bound) j["lower_bound"] = bigint_json(*rec.lower_bound);
  j["method"] = rec.method;
  ordered_json b = ordered_json::object();
  if (rec.bounds.vc_poly) b["vc_poly"] = bigint_json(*rec.bounds.vc_poly);
  if (rec.bounds.sauer_sum) b["sauer_shelah_sum"] = bigint_json(*rec.bounds.sauer_sum);
  if (rec.bounds.sauer_env) b["sauer_shelah_env"] = *rec.bounds.sauer_env;
  if (rec.bounds.bartlett_log) b["bartlett_log"] = *rec.bounds.bartlett_log;
  j["bounds"] = std::move(b);
  j["single_configuration_lower_bound"] = true;
  if (!rec.warnings.empty()) j["warnings"] = rec.warnings;
  return j;
}

inline ordered_json to_json(const ConcentrationReport& rep) {
  ordered_json p = ordered_json::object();
  p["m"] = rep.params.m;
  if (rep.params.n > 0) p["n"] = rep.params.n;
  if (rep.params.b > 0) p["b"] = rep.params.b;
  p["growth"] = rep.params.growth;
  p["hypothesis_count"] = rep.params.hypothesis_count;
  if (rep.kind != "thm3") p["mu"] = rep.params.mu;

  ordered_json j;
  j["kind"] = rep.kind;
  j["parameters"] = std::move(p);
  j["lambda_grid"] = rep.lambda_grid;
  j["empirical_freq"] = rep.empirical_freq;
  j["bound_printed"] = rep.bound_printed;
  j["bound_derived"] = rep.bound_derived;
  j["log_tail_printed"] = rep.log_tail_printed;
  j["log_tail_derived"] = rep.log_tail_derived;
  j["violated"] = rep.violated;
  j["seed"] = rep.seed;
  j["trials"] = rep.trials;
  return j;
}

inline ordered_json to_json(const BDReport& rep) {
  ordered_json j;
  j["functional"] = rep.functional;
  j["claimed"] = rep.claimed;
  j["observed_max"] = rep.observed_max;
  j["slack"] = rep.slack;
  j["exact_equality"] = rep.exact_equality;
  j["trials"] = rep.trials;
  j["seed"] = rep.seed;
  return j;
}

/// CSV rows for one concentration report; `n` column included when set.
inline void append_concentration_csv(std::string& csv, const ConcentrationReport& rep) {
  for (std::size_t k = 0; k < rep.lambda_grid.size(); ++k) {
    if (rep.params.n > 0) csv += std::to_string(rep.params.n) + ",";
    csv += format_double(rep.lambda_grid[k]);
    csv += "," + format_double(rep.empirical_freq[k]);
    csv += "," + format_double(rep.bound_printed[k]);
    csv += "," + format_double(rep.bound_derived[k]);
    csv += rep.violated[k] ? ",1" : ",0";
    csv += "\n";
  }
}

inline std::string concentration_csv_header(bool with_n) {
  return std::string(with_n ? "n," : "") +
         "lambda,empirical_freq,bound_printed,bound_derived,violated\n";
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot open output file");
  out << content;
  require(out.good(), "failed writing output file");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open input file");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return data;
}

}  // namespace vclab
