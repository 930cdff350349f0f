#include "punctlab/report.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "punctlab/errors.hpp"

namespace punctlab {
namespace {

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw InvalidArgument("not a number: '" + s + "'");
  return v;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

json points(const std::vector<cplx>& zs) {
  json a = json::array();
  for (const cplx& z : zs) a.push_back(to_json(z));
  return a;
}

json numbers(const std::vector<double>& xs) {
  json a = json::array();
  for (double x : xs) a.push_back(finite_or_null(x));
  return a;
}

}  // namespace

std::vector<double> parse_radii(std::string_view text) {
  const std::string s = trim(text);
  std::vector<double> radii;
  if (const auto colon = s.find(':'); colon != std::string::npos) {
    const double start = parse_double(trim(s.substr(0, colon)));
    const double end = parse_double(trim(s.substr(colon + 1)));
    if (!(start > 0.0 && end > 0.0 && end <= start)) throw InvalidArgument("radius range needs 0 < end <= start");
    const int steps = static_cast<int>(std::lround(std::log10(start / end)));
    if (std::abs(start / std::pow(10.0, steps) - end) > 1e-9 * end) {
      throw InvalidArgument("radius range must span whole decades");
    }
    for (int j = 0; j <= steps; ++j) radii.push_back(j == 0 ? start : start / std::pow(10.0, j));
  } else {
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) radii.push_back(parse_double(trim(item)));
  }
  if (radii.empty()) throw InvalidArgument("empty radius list");
  require_radii(radii);
  return radii;
}

cplx parse_complex(std::string_view text) {
  const HoloExpr e = HoloExpr::parse(text);
  if (e.uses_parameter()) throw InvalidArgument("complex constant may not use k");
  const SpherePoint p = e.eval(0.0);
  if (p.is_infinite()) throw InvalidArgument("complex constant is infinite");
  return p.value();
}

std::uint64_t default_seed() {
  const char* env = std::getenv("PUNCTLAB_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used == std::string(env).size()) return v;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("PUNCTLAB_SEED is not an unsigned integer");
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json to_json(cplx z) { return json::array({finite_or_null(z.real()), finite_or_null(z.imag())}); }

json to_json(const SpherePoint& p) { return p.is_infinite() ? json("inf") : to_json(p.value()); }

json to_json(const LipEstimate& e) {
  return {{"value", e.value},
          {"witness", json::array({to_json(e.w1), to_json(e.w2)})},
          {"witness_ratio", e.witness_ratio},
          {"density_value", e.density_value},
          {"pair_value", e.pair_value},
          {"samples_used", e.samples_used},
          {"refined", e.refined},
          {"seed", e.seed}};
}

json to_json(const InvarianceResult& r) {
  return {{"discrepancy", r.discrepancy}, {"original", to_json(r.original)}, {"pulled", to_json(r.pulled)}};
}

json to_json(const Verdict& v) {
  json trace = json::array();
  for (const auto& [k, l] : v.trace) trace.push_back(json::array({k, finite_or_null(l)}));
  return {{"label", to_string(v.label)},
          {"threshold", v.threshold},
          {"tail", v.tail},
          {"divergence_rate", v.divergence_rate},
          {"trace", trace}};
}

json to_json(const RescalingResult& r) {
  json levels = json::array();
  for (const RescalingLevel& l : r.levels) {
    levels.push_back({{"k", l.k},
                      {"M", l.M},
                      {"z", to_json(l.z)},
                      {"w", to_json(l.w)},
                      {"rho", l.rho},
                      {"R", l.R},
                      {"ratio", l.ratio},
                      {"anchored", l.anchored}});
  }
  json samples = json::array();
  for (const auto& [v, p] : r.limit_samples) samples.push_back({{"v", to_json(v)}, {"value", to_json(p)}});
  return {{"case_tag", to_string(r.case_tag)},
          {"centers", points(r.centers)},
          {"scales", numbers(r.scales)},
          {"k_indices", r.k_indices},
          {"residual", finite_or_null(r.residual)},
          {"normalization_ratios", numbers(r.normalization_ratios)},
          {"spread", r.spread},
          {"stride", r.stride},
          {"note", r.note},
          {"levels", levels},
          {"limit_samples", samples}};
}

json to_json(const LVResult& r) {
  const LVWitness& w = r.witness;
  return {{"found", r.found},
          {"note", r.note},
          {"cluster_value", to_json(w.cluster_value)},
          {"cluster_hits", w.cluster_hits},
          {"centers", points(w.centers)},
          {"diameters", numbers(w.diameters)},
          {"escaped", w.escaped},
          {"escape_radii", numbers(w.escape_radii)},
          {"second_centers", points(w.second_centers)},
          {"escape_diameters", numbers(w.escape_diameters)},
          {"diam_floor", finite_or_null(w.diam_floor)}};
}

json to_json(const JuliaProfile& p) {
  json entries = json::array();
  for (const JuliaEntry& e : p.entries) entries.push_back({{"r", e.r}, {"value", e.value}, {"theta", e.theta}});
  return {{"verdict", to_string(p.verdict)}, {"entries", entries}};
}

json to_json(const DiameterProfile& p) {
  json entries = json::array();
  for (const DiameterEntry& e : p.entries) {
    entries.push_back({{"radius", e.radius}, {"diameter", e.diameter}, {"theta1", e.theta1}, {"theta2", e.theta2}});
  }
  return {{"metric", p.metric}, {"samples", p.samples}, {"entries", entries}};
}

json to_json(const PrincipleResult& p) {
  json trace = json::array();
  for (const HalfDiskEntry& e : p.trace) trace.push_back({{"r", e.r}, {"value", e.value}, {"y", to_json(e.y)}});
  json out = {{"branch", p.branch},
              {"case_tag", to_string(p.rescaling.case_tag)},
              {"diameters", numbers(p.diameters)},
              {"halfdisk_trace", trace},
              {"rescaling", to_json(p.rescaling)}};
  if (p.lv) out["lv"] = to_json(*p.lv);
  return out;
}

json make_report(const std::string& command, const std::string& fn, json params, json result, json provenance) {
  return {{"version", PUNCTLAB_VERSION},
          {"command", command},
          {"fn", fn.empty() ? json(nullptr) : json(fn)},
          {"params", std::move(params)},
          {"result", std::move(result)},
          {"provenance", std::move(provenance)}};
}

json strip_timing(json report) {
  if (report.contains("provenance")) report["provenance"].erase("timing_ms");
  return report;
}

}  // namespace punctlab
