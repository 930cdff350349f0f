// punctlab: command-line front end. Each subcommand writes one JSON report
// (stdout or --out) and optional CSV plot data (--csv).
//
// Exit codes: 0 success, 2 inconclusive result, 1 error.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "punctlab/errors.hpp"
#include "punctlab/lipschitz.hpp"
#include "punctlab/metrics.hpp"
#include "punctlab/report.hpp"
#include "punctlab/singularity.hpp"
#include "punctlab/zalcman.hpp"

using namespace punctlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;

struct Common {
  std::string fn;
  std::string out;
  std::string csv;
  std::uint64_t seed = 0;
  bool serial = false;

  Exec exec() const { return serial ? Exec::Serial : Exec::Parallel; }
};

struct Outcome {
  json params = json::object();
  json result = json::object();
  json provenance = json::object();
  bool inconclusive = false;
  std::function<void(std::ostream&)> csv;
};

void add_common(CLI::App* cmd, Common& c, bool needs_fn, const std::string& fn_help = "function of z") {
  if (needs_fn) cmd->add_option("--fn", c.fn, fn_help)->required();
  cmd->add_option("--out", c.out, "JSON report path (default: stdout)");
  cmd->add_option("--csv", c.csv, "CSV plot data path");
  cmd->add_option("--seed", c.seed, "RNG seed (default: PUNCTLAB_SEED or 0)");
  cmd->add_flag("--serial", c.serial, "use the serial reference kernels");
}

json radii_json(const std::vector<double>& r) { return json(r); }

int emit(const std::string& command, const Common& c, Outcome o, double ms) {
  o.provenance["seed"] = c.seed;
  o.provenance["exec"] = c.serial ? "serial" : "parallel";
  o.provenance["timing_ms"] = ms;
  const json report = make_report(command, c.fn, std::move(o.params), std::move(o.result), std::move(o.provenance));
  if (c.out.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    std::ofstream f(c.out);
    if (!f) throw InvalidArgument("cannot write " + c.out);
    f << report.dump(2) << '\n';
  }
  if (!c.csv.empty()) {
    if (!o.csv) throw InvalidArgument("--csv is not supported by " + command);
    std::ofstream f(c.csv);
    if (!f) throw InvalidArgument("cannot write " + c.csv);
    f.precision(17);
    o.csv(f);
  }
  return o.inconclusive ? kExitInconclusive : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for meromorphic maps near isolated singularities"};
  app.set_version_flag("--version", std::string(PUNCTLAB_VERSION));
  app.require_subcommand(1);

  Common c;
  std::function<Outcome()> run;
  std::string command;

  // metrics
  std::vector<std::string> chordal_pts, poincare_pts, punct_pts;
  std::string center = "0";
  double radius = 1.0;
  std::vector<double> punct_lengths;
  auto* metrics = app.add_subcommand("metrics", "distances and circle lengths");
  add_common(metrics, c, false);
  metrics->add_option("--chordal", chordal_pts, "two points: chordal distance")->expected(2);
  metrics->add_option("--poincare", poincare_pts, "two points: distance in D(center, radius)")->expected(2);
  metrics->add_option("--punctured-distance", punct_pts, "two points: punctured-disk distance")->expected(2);
  metrics->add_option("--punctured-length", punct_lengths, "radii: length of |z| = r in the punctured disk");
  metrics->add_option("--center", center, "disk center for --poincare");
  metrics->add_option("--radius", radius, "disk radius for --poincare");
  metrics->callback([&] {
    command = "metrics";
    run = [&] {
      Outcome o;
      o.params = {{"center", to_json(parse_complex(center))}, {"radius", radius}};
      if (chordal_pts.size() == 2) {
        const cplx z = parse_complex(chordal_pts[0]);
        const cplx w = parse_complex(chordal_pts[1]);
        o.params["chordal"] = json::array({to_json(z), to_json(w)});
        o.result["chordal"] = chordal(z, w);
      }
      if (poincare_pts.size() == 2) {
        const cplx z = parse_complex(poincare_pts[0]);
        const cplx w = parse_complex(poincare_pts[1]);
        o.params["poincare"] = json::array({to_json(z), to_json(w)});
        o.result["poincare"] = poincare_distance(Disk(parse_complex(center), radius), z, w);
      }
      if (punct_pts.size() == 2) {
        const cplx z = parse_complex(punct_pts[0]);
        const cplx w = parse_complex(punct_pts[1]);
        o.params["punctured_distance"] = json::array({to_json(z), to_json(w)});
        o.result["punctured_distance"] = punctured_distance(z, w);
      }
      if (!punct_lengths.empty()) {
        o.params["punctured_length"] = punct_lengths;
        json lengths = json::array();
        for (double r : punct_lengths) lengths.push_back(punctured_circle_length(r));
        o.result["punctured_length"] = lengths;
      }
      if (o.result.empty()) throw InvalidArgument("metrics needs at least one quantity");
      return o;
    };
  });

  // diam
  std::string radii_text = "1e-1:1e-6";
  std::size_t diam_samples = 1024;
  auto* diam = app.add_subcommand("diam", "chordal diameters of circle images");
  add_common(diam, c, true);
  diam->add_option("--radii", radii_text, "start:end (decades) or comma list")->capture_default_str();
  diam->add_option("--samples", diam_samples, "samples per circle")->capture_default_str();
  diam->callback([&] {
    command = "diam";
    run = [&] {
      Outcome o;
      const std::vector<double> radii = parse_radii(radii_text);
      DiameterOptions opt;
      opt.samples = diam_samples;
      opt.exec = c.exec();
      const DiameterProfile p = diameter_profile(HoloExpr::parse(c.fn), radii, opt);
      o.params = {{"radii", radii_json(radii)}, {"samples", diam_samples}};
      o.result = to_json(p);
      o.provenance["refinement_rounds"] = opt.refinement_rounds;
      o.csv = [p](std::ostream& f) { write_csv(f, p); };
      return o;
    };
  });

  // lip
  std::size_t budget = 2000;
  std::string from_center;
  double from_radius = 0.0;
  double theta = 0.0;
  std::string alpha = "0";
  auto* lip = app.add_subcommand("lip", "Lipschitz-on-disks estimate and invariance check");
  add_common(lip, c, true);
  lip->add_option("--center", center, "disk center")->capture_default_str();
  lip->add_option("--radius", radius, "disk radius")->capture_default_str();
  lip->add_option("--budget", budget, "sample budget (>= 100)")->capture_default_str();
  auto* from_opt = lip->add_option("--from-center", from_center, "invariance: center of the source disk");
  lip->add_option("--from-radius", from_radius, "invariance: radius of the source disk")->needs(from_opt);
  lip->add_option("--theta", theta, "invariance: rotation angle")->needs(from_opt);
  lip->add_option("--alpha", alpha, "invariance: automorphism parameter, |alpha| < 1")->needs(from_opt);
  lip->callback([&] {
    command = "lip";
    run = [&] {
      Outcome o;
      LipOptions opt;
      opt.budget = budget;
      opt.seed = c.seed;
      opt.ascent.exec = c.exec();
      const Disk d(parse_complex(center), radius);
      o.params = {{"center", to_json(d.center)}, {"radius", radius}, {"budget", budget}};
      o.provenance["ascent"] = {{"starts", opt.ascent.starts}, {"iterations", opt.ascent.iterations}};
      const HoloExpr f = HoloExpr::parse(c.fn);
      if (from_center.empty()) {
        o.result = to_json(lipschitz_estimate(f, d, opt));
      } else {
        const Disk d2(parse_complex(from_center), from_radius);
        const cplx a = parse_complex(alpha);
        o.params["from_center"] = to_json(d2.center);
        o.params["from_radius"] = from_radius;
        o.params["theta"] = theta;
        o.params["alpha"] = to_json(a);
        o.result = to_json(invariance_check(f, d, d2, Mobius::disk_map(d2, d, theta, a), opt));
      }
      return o;
    };
  });

  // marty
  int k_max = 12;
  MartyOptions marty_opt;
  auto* marty = app.add_subcommand("marty", "Marty-type normality test over k = 2^1 .. 2^k_max");
  add_common(marty, c, true, "family of z and k");
  marty->add_option("--center", center, "disk center")->capture_default_str();
  marty->add_option("--radius", radius, "disk radius")->capture_default_str();
  marty->add_option("--k-max", k_max, "largest exponent j in k = 2^j")->capture_default_str();
  marty->add_option("--budget", budget, "sample budget per estimate")->capture_default_str();
  marty->add_option("--threshold", marty_opt.threshold, "divergence threshold")->capture_default_str();
  marty->add_option("--tail", marty_opt.tail, "tail length")->capture_default_str();
  marty->callback([&] {
    command = "marty";
    run = [&] {
      Outcome o;
      if (k_max < 1 || k_max > 62) throw InvalidArgument("--k-max must be in [1, 62]");
      std::vector<long> ks;
      for (int j = 1; j <= k_max; ++j) ks.push_back(1L << j);
      marty_opt.lip.budget = budget;
      marty_opt.lip.seed = c.seed;
      marty_opt.lip.ascent.exec = c.exec();
      const Verdict v = marty_test(HoloExpr::parse(c.fn), parse_complex(center), radius, ks, marty_opt);
      o.params = {{"center", to_json(parse_complex(center))},
                  {"radius", radius},
                  {"k", ks},
                  {"budget", budget},
                  {"threshold", marty_opt.threshold},
                  {"tail", marty_opt.tail}};
      o.result = to_json(v);
      o.csv = [v](std::ostream& f) {
        f << "k,L\n";
        for (const auto& [k, l] : v.trace) f << k << ',' << l << '\n';
      };
      return o;
    };
  });

  // zalcman
  ZalcmanOptions z_opt;
  int zk_max = 20;
  std::string zoom_text;
  std::string anchor;
  double z_radius = 0.5;
  auto* zal = app.add_subcommand("zalcman", "rescaling extraction for a family f_k");
  add_common(zal, c, true, "family of z and k");
  zal->add_option("--radius", z_radius, "disk radius r")->capture_default_str();
  zal->add_option("--k-max", zk_max, "largest exponent j in k = 2^j")->capture_default_str();
  zal->add_option("--center", center, "zoom center a (with --zoom-radii)")->capture_default_str();
  zal->add_option("--zoom-radii", zoom_text, "double rescaling: outer radii, start:end or comma list");
  zal->add_option("--budget", z_opt.budget, "samples per sup search")->capture_default_str();
  zal->add_option("--tol", z_opt.tol, "convergence tolerance")->capture_default_str();
  zal->add_option("--r-test", z_opt.r_test, "test disk radius")->capture_default_str();
  zal->add_option("--grid", z_opt.grid, "grid points per axis")->capture_default_str();
  zal->add_option("--c0", z_opt.c0, "non-constancy certificate")->capture_default_str();
  zal->add_option("--m-threshold", z_opt.m_threshold, "minimum M_k for a limit")->capture_default_str();
  zal->add_option("--anchor", anchor, "anchor value for the centers");
  zal->callback([&] {
    command = "zalcman";
    run = [&] {
      Outcome o;
      if (zk_max < 1 || zk_max > 62) throw InvalidArgument("--k-max must be in [1, 62]");
      std::vector<long> ks;
      for (int j = 1; j <= zk_max; ++j) ks.push_back(1L << j);
      z_opt.seed = c.seed;
      z_opt.ascent.exec = c.exec();
      if (!anchor.empty()) z_opt.anchor = parse_complex(anchor);
      const HoloExpr fam = HoloExpr::parse(c.fn);
      o.params = {{"k", ks}, {"budget", z_opt.budget}, {"tol", z_opt.tol}, {"r_test", z_opt.r_test},
                  {"grid", z_opt.grid}, {"c0", z_opt.c0}, {"m_threshold", z_opt.m_threshold}};
      if (z_opt.anchor) o.params["anchor"] = to_json(*z_opt.anchor);
      RescalingResult r;
      if (zoom_text.empty()) {
        o.params["radius"] = z_radius;
        r = extract_rescaling(fam, z_radius, ks, z_opt);
      } else {
        const std::vector<double> zoom = parse_radii(zoom_text);
        o.params["center"] = to_json(parse_complex(center));
        o.params["zoom_radii"] = zoom;
        r = double_rescale(fam, parse_complex(center), zoom, ks, z_opt);
      }
      o.result = to_json(r);
      o.inconclusive = r.case_tag == CaseTag::Inconclusive;
      o.csv = [r](std::ostream& f) {
        f << "k,M,rho,R,ratio,z_re,z_im\n";
        for (const RescalingLevel& l : r.levels) {
          f << l.k << ',' << l.M << ',' << l.rho << ',' << l.R << ',' << l.ratio << ',' << l.z.real() << ','
            << l.z.imag() << '\n';
        }
      };
      return o;
    };
  });

  // rescale
  auto* rescale = app.add_subcommand("rescale", "rescaling principle at the singularity 0");
  add_common(rescale, c, true);
  rescale->add_option("--radii", radii_text, "start:end (decades) or comma list")->capture_default_str();
  rescale->add_option("--budget", budget, "Lipschitz budget of the half-disk trace");
  rescale->callback([&] {
    command = "rescale";
    run = [&] {
      Outcome o;
      PrincipleOptions opt;
      opt.radii = parse_radii(radii_text);
      if (rescale->count("--budget") > 0) opt.trace.lip.budget = budget;
      opt.trace.lip.seed = c.seed;
      opt.zalcman.seed = c.seed;
      opt.trace.exec = opt.trace.lip.ascent.exec = opt.zalcman.ascent.exec = opt.lv.exec = opt.punct.exec = c.exec();
      const PrincipleResult p = rescaling_principle(HoloExpr::parse(c.fn), opt);
      o.params = {{"radii", opt.radii},
                  {"collapse_tol", opt.collapse_tol},
                  {"tail", opt.tail},
                  {"trace_threshold", opt.trace.threshold},
                  {"budget", opt.trace.lip.budget},
                  {"zalcman_tol", opt.zalcman.tol},
                  {"punctured_tol", opt.punct.tol}};
      o.result = to_json(p);
      o.inconclusive = p.rescaling.case_tag == CaseTag::Inconclusive;
      o.csv = [p](std::ostream& f) {
        f << "v_re,v_im,value_re,value_im,infinite\n";
        for (const auto& [v, w] : p.rescaling.limit_samples) {
          const cplx x = w.is_infinite() ? cplx{} : w.value();
          f << v.real() << ',' << v.imag() << ',' << x.real() << ',' << x.imag() << ',' << (w.is_infinite() ? 1 : 0)
            << '\n';
        }
      };
      return o;
    };
  });

  // lv
  LVOptions lv_opt;
  auto* lv = app.add_subcommand("lv", "circle-diameter witness search");
  add_common(lv, c, true);
  lv->add_option("--radii", radii_text, "start:end (decades) or comma list")->capture_default_str();
  lv->add_option("--diam-threshold", lv_opt.diam_threshold, "diameter threshold")->capture_default_str();
  lv->callback([&] {
    command = "lv";
    run = [&] {
      Outcome o;
      const std::vector<double> radii = parse_radii(radii_text);
      lv_opt.exec = c.exec();
      const LVResult r = lv_witness(HoloExpr::parse(c.fn), radii, lv_opt);
      o.params = {{"radii", radii},
                  {"diam_threshold", lv_opt.diam_threshold},
                  {"cluster_radius", lv_opt.cluster_radius},
                  {"escape_radius", lv_opt.escape_radius}};
      o.result = to_json(r);
      o.csv = [r, radii](std::ostream& f) {
        f << "radius,diameter\n";
        for (std::size_t i = 0; i < radii.size(); ++i) f << radii[i] << ',' << r.witness.diameters[i] << '\n';
      };
      return o;
    };
  });

  // julia
  TraceOptions j_opt;
  auto* julia = app.add_subcommand("julia", "sup of |z| f#(z) on circles");
  add_common(julia, c, true);
  julia->add_option("--radii", radii_text, "start:end (decades) or comma list")->capture_default_str();
  julia->add_option("--threshold", j_opt.threshold, "divergence threshold")->capture_default_str();
  julia->callback([&] {
    command = "julia";
    run = [&] {
      Outcome o;
      const std::vector<double> radii = parse_radii(radii_text);
      j_opt.exec = c.exec();
      const JuliaProfile p = julia_indicator(HoloExpr::parse(c.fn), radii, j_opt);
      o.params = {{"radii", radii}, {"threshold", j_opt.threshold}, {"tail", j_opt.tail},
                  {"samples", j_opt.circle_samples}};
      o.result = to_json(p);
      o.csv = [p](std::ostream& f) {
        f << "radius,value,theta\n";
        for (const JuliaEntry& e : p.entries) f << e.r << ',' << e.value << ',' << e.theta << '\n';
      };
      return o;
    };
  });

  try {
    c.seed = default_seed();
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = run();
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return emit(command, c, std::move(o), ms);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
