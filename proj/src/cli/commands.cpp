#include "krpac/cli/commands.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <boost/version.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "krpac/bad_set/bad_set.hpp"
#include "krpac/certificate/certificate.hpp"
#include "krpac/certificate/hypothesis.hpp"
#include "krpac/concentration/mgf.hpp"
#include "krpac/config.hpp"
#include "krpac/dependency/dependency_matrix.hpp"
#include "krpac/dependency/lipschitz.hpp"
#include "krpac/errors.hpp"
#include "krpac/io.hpp"
#include "krpac/parallel.hpp"
#include "krpac/toy/toy.hpp"
#include "krpac/transport/good_set.hpp"
#include "krpac/transport/map_io.hpp"
#include "krpac/transport/sampling.hpp"

namespace krpac::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::size_t threads = 0;
};

struct Context {
  std::string command;
  CommonOptions opts;
  json config = json::object();
  fs::path config_dir = ".";
  std::string config_hash = "none";
  std::uint64_t seed = 0;
  fs::path out_dir;
  std::vector<std::string> outputs;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  template <class T>
  T get(const char* key, T fallback) const {
    if (!config.contains(key)) return fallback;
    try {
      return config.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(fmt::format("config key '{}': {}", key, e.what()));
    }
  }

  fs::path resolve(const std::string& p) const {
    const fs::path path(p);
    return path.is_absolute() ? path : config_dir / path;
  }

  void write(const std::string& name, const std::string& content) {
    write_text_file(out_dir / name, content);
    outputs.push_back(name);
  }
};

void load(Context& ctx, bool required) {
  if (ctx.opts.config.empty()) {
    if (required) throw ConfigError(fmt::format("{} needs --config", ctx.command));
  } else {
    const fs::path path(ctx.opts.config);
    ctx.config = load_config(path);
    ctx.config_dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    ctx.config_hash = fmt::format("{:016x}", fnv1a(read_text_file(path)));
  }
  ctx.seed = ctx.opts.seed ? *ctx.opts.seed : ctx.get<std::uint64_t>("seed", 0);
  ctx.out_dir = ctx.opts.out;
}

void write_run_manifest(Context& ctx) {
  json versions = {
      {"krpac", KRPAC_VERSION},
      {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
      {"fmt", fmt::format("{}.{}.{}", FMT_VERSION / 10000, FMT_VERSION / 100 % 100, FMT_VERSION % 100)},
      {"boost", fmt::format("{}.{}.{}", BOOST_VERSION / 100000, BOOST_VERSION / 100 % 1000, BOOST_VERSION % 100)},
      {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR,
                                    NLOHMANN_JSON_VERSION_PATCH)},
      {"cli11", CLI11_VERSION},
      {"tomlplusplus", toml_library_version()}};
  std::vector<std::string> outputs = ctx.outputs;
  std::sort(outputs.begin(), outputs.end());
  const json manifest = {{"command", ctx.command},
                         {"config_hash", ctx.config_hash},
                         {"seed", ctx.seed},
                         {"outputs", outputs},
                         {"versions", versions}};
  write_text_file(ctx.out_dir / "run_manifest.json", manifest.dump(2) + "\n");
}

transport::ReferenceMeasure reference_from(const Context& ctx, std::size_t dim) {
  return {transport::parse_reference_kind(ctx.get<std::string>("reference", "uniform")), dim};
}

dependency::Metric metric_from(const json& j) {
  const std::string kind = j.value("kind", std::string("absolute"));
  if (kind == "absolute") return dependency::Metric::absolute(j.value("diameter", 1.0));
  if (kind == "discrete") return dependency::Metric::discrete();
  if (kind == "component_sum") {
    return dependency::Metric::component_sum(j.value("diameters", std::vector<double>{1.0, 1.0}));
  }
  throw ConfigError(fmt::format("unknown metric kind '{}'", kind));
}

dependency::Metric metric_from(const Context& ctx, const dependency::Metric& fallback) {
  return ctx.config.contains("metric") ? metric_from(ctx.config["metric"]) : fallback;
}

std::optional<transport::GoodSetSpec> good_set_from(const Context& ctx) {
  if (!ctx.config.contains("good_set")) return std::nullopt;
  std::vector<transport::Box> boxes;
  for (const auto& box : ctx.config["good_set"].at("boxes")) {
    transport::Box b;
    for (const auto& side : box) b.sides.push_back({side.at(0).get<double>(), side.at(1).get<double>()});
    boxes.push_back(std::move(b));
  }
  return transport::GoodSetSpec::from_boxes(std::move(boxes));
}

transport::MapPtr map_from(const Context& ctx) {
  if (!ctx.config.contains("map")) throw ConfigError(fmt::format("{} config needs 'map'", ctx.command));
  return transport::load_map(ctx.resolve(ctx.config["map"].get<std::string>()));
}

std::vector<Interval> site_range_from(const Context& ctx, std::size_t block) {
  std::vector<Interval> range;
  if (ctx.config.contains("site_range")) {
    for (const auto& side : ctx.config["site_range"]) range.push_back({side.at(0).get<double>(), side.at(1).get<double>()});
  } else {
    range.assign(block, kUnitInterval);
  }
  if (range.size() != block) throw ConfigError("site_range needs one interval per block scalar");
  return range;
}

std::vector<bad_set::BadSetCandidate> candidates_from(const Context& ctx, const json& spec, std::size_t sites,
                                                      double epsilon) {
  if (spec.is_string()) return bad_set::candidates_from_json(read_json_file(ctx.resolve(spec.get<std::string>())), sites);
  if (spec.is_object() && spec.contains("band")) {
    const auto caps = spec["band"].at("caps").get<std::vector<double>>();
    const auto widths = spec["band"].at("widths").get<std::vector<std::size_t>>();
    return bad_set::banded_candidates(sites, caps, widths, epsilon);
  }
  return bad_set::candidates_from_json(spec, sites);
}

// toy ------------------------------------------------------------------------------------------

int run_toy(Context& ctx, std::optional<std::size_t> grid, std::optional<std::size_t> mc) {
  load(ctx, false);
  toy::ToyRunConfig rc;
  rc.grid = ctx.get<std::size_t>("grid", rc.grid);
  rc.n_mc = ctx.get<std::size_t>("n_mc", rc.n_mc);
  rc.n_tradeoff = ctx.get<std::size_t>("n_tradeoff", rc.n_tradeoff);
  rc.n_scatter = ctx.get<std::size_t>("n_scatter", rc.n_scatter);
  rc.caps = ctx.get<std::vector<double>>("caps", rc.caps);
  if (ctx.config.contains("coefficients")) rc.coefficients = toy::toy_config_from_json(ctx.config["coefficients"]);
  if (ctx.config.contains("improvement")) {
    const json& j = ctx.config["improvement"];
    auto& imp = rc.improvement;
    imp.m = j.value("m", imp.m);
    imp.diameter = j.value("diameter", imp.diameter);
    imp.oscillation = j.value("oscillation", imp.oscillation);
    imp.kl = j.value("kl", imp.kl);
    imp.delta = j.value("delta", imp.delta);
    imp.epsilon = j.value("epsilon", imp.epsilon);
    imp.mode = dependency::parse_scale_mode(j.value("mode", std::string("paper")));
  }
  if (grid) rc.grid = *grid;
  if (mc) rc.n_mc = *mc;
  rc.seed = ctx.seed;

  const toy::ToyResults results = toy::run_toy(rc);
  const auto warnings = toy::emit_figures(results, ctx.out_dir);
  for (const auto& w : warnings) *ctx.err << "warning: " << w << "\n";
  for (const char* f : {"landscape.csv", "tradeoff.csv", "pushforward.csv", "manifest.json"}) {
    if (fs::exists(ctx.out_dir / f)) ctx.outputs.emplace_back(f);
  }
  const auto& imp = results.improvement;
  *ctx.out << fmt::format("L12 max {:.4f}; no-exclusion gap {:.5f}; best cap {} gives gap {:.5f} + xi {:.5f} = {:.5f}\n",
                          results.landscape.global_max(), imp.baseline_gap, imp.best_cap, imp.best_gap,
                          imp.best_xi, imp.best_total);
  return kExitOk;
}

// certify --------------------------------------------------------------------------------------

int run_certify(Context& ctx) {
  load(ctx, true);
  const transport::MapPtr map = map_from(ctx);
  const transport::ReferenceMeasure ref = reference_from(ctx, map->dimension());
  const dependency::Metric metric = metric_from(ctx, dependency::Metric::component_sum({1.0, 1.0}));
  const std::size_t bs = metric.block_size();
  if (map->dimension() % bs != 0) throw ConfigError("map dimension must be a multiple of the metric block size");
  const std::size_t sites = map->dimension() / bs;

  const certificate::HypothesisClassSpec cls = certificate::class_from_json(ctx.config.value("class", json::object()));
  if (!ctx.config.contains("prior") || !ctx.config.contains("posterior")) {
    throw ConfigError("certify config needs 'prior' and 'posterior'");
  }
  const auto prior = certificate::gaussian_from_json(ctx.config["prior"]);
  const auto posterior = certificate::gaussian_from_json(ctx.config["posterior"]);
  const auto m = ctx.get<std::size_t>("m", 1000);
  const auto n_theta = ctx.get<std::size_t>("n_theta", 1000);
  const auto mode = dependency::parse_scale_mode(ctx.get<std::string>("mode", "paper"));

  // The good set restricts the reference; training data come from mu conditioned
  // on it, drawn by rejection.
  const auto good = good_set_from(ctx);
  transport::MapPtr restricted = map;
  double xi = ctx.get<double>("xi", 0.0);
  SampleMatrix data;
  if (good) {
    restricted = transport::compose(map, transport::restrict_reference(ref, *good));
    if (!ctx.config.contains("xi")) xi = 1.0 - good->reference_mass(ref);
    data = transport::rejection_sample(*map, ref, *good, m, mix_seed(ctx.seed, 1));
  } else {
    data = transport::pushforward_sample(*map, ref, m, mix_seed(ctx.seed, 1));
  }

  json report;
  Eigen::MatrixXd lipschitz;
  if (ctx.config.contains("candidates")) {
    const double eps = ctx.get<double>("epsilon", 0.05);
    auto cands = candidates_from(ctx, ctx.config["candidates"], sites, eps);
    bad_set::MembershipContext mctx;
    mctx.map = map;
    mctx.ref = ref;
    mctx.metric = metric;
    mctx.probes = dependency::grid_levels(site_range_from(ctx, bs), ctx.get<std::size_t>("probe_levels", 5));
    mctx.n_mc = ctx.get<std::size_t>("n_mc", 256);
    mctx.seed = mix_seed(ctx.seed, 2);
    const SampleMatrix sample = transport::pushforward_sample(*map, ref, ctx.get<std::size_t>("n_badset", 2000),
                                                              mix_seed(ctx.seed, 3));
    bad_set::CertificateContext cc;
    cc.m = m;
    cc.diameter = metric.diameter();
    cc.oscillation = certificate::oscillation_vector(cls, sites, metric);
    cc.kl = certificate::kl_gaussian(posterior, prior);
    cc.delta = ctx.get<double>("delta", 0.05);
    cc.mode = mode;
    const auto selection = bad_set::select_candidate(cands, sample, mctx, cc, eps);
    lipschitz = cands[selection.chosen].lipschitz;
    xi = *cands[selection.chosen].xi;
    report["bad_set"] = bad_set::to_json(selection);
  } else if (ctx.config.contains("L")) {
    lipschitz = dependency::matrix_from_json(ctx.config["L"]);
  } else {
    const json dep = ctx.config.value("dependency", json::object());
    lipschitz = dependency::estimate_dependency(*restricted, ref, metric, site_range_from(ctx, bs),
                                                dep.value("levels", std::size_t{8}),
                                                dep.value("n_mc", std::size_t{512}), mix_seed(ctx.seed, 4));
  }

  certificate::CertificateInput in;
  in.m = m;
  in.d = sites;
  in.diameter = metric.diameter();
  in.D = dependency::build_D(lipschitz);
  in.oscillation = certificate::oscillation_vector(cls, sites, metric);
  in.kl = certificate::kl_gaussian(posterior, prior);
  in.delta = ctx.get<double>("delta", 0.05);
  in.xi = xi;
  in.empirical_risk = certificate::empirical_risk(posterior, data, cls, n_theta, mix_seed(ctx.seed, 5));
  const auto cert = certificate::certify(in, mode);

  const double outside = certificate::posterior_mass_outside_bound(posterior, cls.weight_bound);
  report["certificate"] = certificate::to_json(cert);
  report["inputs"] = {{"m", in.m},
                      {"d", in.d},
                      {"diameter", in.diameter},
                      {"L", dependency::matrix_to_json(lipschitz)},
                      {"D", dependency::matrix_to_json(in.D)},
                      {"oscillation", in.oscillation.values()},
                      {"kl", in.kl},
                      {"delta", in.delta},
                      {"xi", in.xi},
                      {"empirical_risk", in.empirical_risk}};
  report["posterior_mass_outside_weight_bound"] = outside;
  report["posterior_outside_weight_bound"] = outside > 1e-6;
  ctx.write("report.json", report.dump(2) + "\n");
  *ctx.out << fmt::format("risk <= {:.6f} (R_m {:.6f} + gap {:.6f} + xi {:.6f}){}\n", cert.total, cert.empirical_risk,
                          cert.gap, cert.xi, cert.vacuous ? " [vacuous]" : "");
  if (outside > 1e-6) *ctx.err << fmt::format("warning: posterior mass {:.3g} outside |w| <= W\n", outside);
  return kExitOk;
}

// mgf-check ------------------------------------------------------------------------------------

int run_mgf_check(Context& ctx) {
  load(ctx, false);
  const auto dims = ctx.get<std::vector<std::size_t>>("dimensions", {2, 4, 8});
  const auto n = ctx.get<std::size_t>("n", 100000);
  const auto lambdas = ctx.get<std::vector<double>>("lambdas", concentration::default_lambda_grid());
  const double diameter = ctx.get<double>("diameter", 1.0);

  json report = json::array();
  for (std::size_t d : dims) {
    const transport::ReferenceMeasure ref = reference_from(ctx, d);
    concentration::Sampler sampler = [&](std::size_t count, std::uint64_t seed) {
      return transport::sample_reference(ref, count, seed);
    };
    const dependency::ScalarFunction mean = [](std::span<const double> z) {
      double s = 0.0;
      for (double v : z) s += v;
      return s / static_cast<double>(z.size());
    };
    const auto points = concentration::empirical_mgf(mean, sampler, lambdas, n, mix_seed(ctx.seed, d));
    const dependency::OscillationVector osc(std::vector<double>(d, 1.0 / static_cast<double>(d)));
    const Eigen::MatrixXd D = Eigen::MatrixXd::Identity(d, d);
    const auto paper = dependency::build_gamma(D, diameter, d, dependency::ScaleMode::paper);
    const auto conservative = dependency::build_gamma(D, diameter, d, dependency::ScaleMode::conservative);
    const auto rows = concentration::compare_with_bounds(points, concentration::gamma_delta_norm_sq(paper, osc),
                                                         concentration::gamma_delta_norm_sq(conservative, osc));
    ctx.write(fmt::format("mgf_d{}.csv", d), concentration::mgf_csv(rows));
    std::size_t paper_violations = 0;
    std::size_t conservative_violations = 0;
    json per_lambda = json::array();
    for (const auto& r : rows) {
      paper_violations += r.paper_holds ? 0 : 1;
      conservative_violations += r.conservative_holds ? 0 : 1;
      per_lambda.push_back({{"lambda", r.point.lambda},
                            {"empirical", r.point.estimate},
                            {"std_error", r.point.std_error},
                            {"jackknife_bias", r.point.jackknife_bias},
                            {"bound_paper_mode", r.bound_paper},
                            {"bound_conservative_mode", r.bound_conservative},
                            {"paper_holds", r.paper_holds},
                            {"conservative_holds", r.conservative_holds}});
    }
    report.push_back({{"d", d},
                      {"n", n},
                      {"paper_violations", paper_violations},
                      {"conservative_violations", conservative_violations},
                      {"rows", per_lambda}});
    *ctx.out << fmt::format("d={}: conservative bound violated at {} of {} lambdas, paper bound at {}\n", d,
                            conservative_violations, rows.size(), paper_violations);
  }
  ctx.write("report.json", json{{"statistic", "coordinate_mean"}, {"results", report}}.dump(2) + "\n");
  return kExitOk;
}

// deps -----------------------------------------------------------------------------------------

int run_deps(Context& ctx) {
  load(ctx, true);
  const transport::MapPtr map = map_from(ctx);
  const transport::ReferenceMeasure ref = reference_from(ctx, map->dimension());
  const dependency::Metric metric = metric_from(ctx, dependency::Metric::absolute());
  const std::size_t bs = metric.block_size();
  if (map->dimension() % bs != 0) throw ConfigError("map dimension must be a multiple of the metric block size");
  const std::size_t sites = map->dimension() / bs;
  const auto range = site_range_from(ctx, bs);
  const auto levels = ctx.get<std::size_t>("levels", 16);
  const auto n_mc = ctx.get<std::size_t>("n_mc", 1024);

  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(sites, sites);
  json profiles = json::array();
  for (std::size_t i = 0; i + 1 < sites; ++i) {
    dependency::ProfileDesign design;
    for (std::size_t s = 0; s < i; ++s) {
      for (const Interval& side : range) design.prefix.push_back(0.5 * (side.lower + side.upper));
    }
    design.levels = dependency::grid_levels(range, levels);
    for (std::size_t j = i + 1; j < sites; ++j) {
      const auto p = dependency::lipschitz_profile(*map, ref, i, j, metric, design, n_mc,
                                                   mix_seed(ctx.seed, i * sites + j));
      l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p.estimate;
      const std::string name = fmt::format("profile_{}_{}.csv", i + 1, j + 1);
      ctx.write(name, dependency::profile_csv(p, design));
      profiles.push_back({{"i", i + 1}, {"j", j + 1}, {"estimate", p.estimate},
                          {"std_error", p.estimate_std_error}, {"file", name}});
    }
  }
  const auto mode = dependency::parse_scale_mode(ctx.get<std::string>("mode", "paper"));
  const auto dm = dependency::build_gamma(dependency::build_D(l), metric, sites, mode);
  json report = dependency::to_json(dm);
  report["profiles"] = profiles;
  report["estimates_are_lower_bounds"] = true;
  ctx.write("dependency.json", report.dump(2) + "\n");
  *ctx.out << fmt::format("estimated {} Lipschitz constants; max {:.5f}\n", profiles.size(), l.maxCoeff());
  return kExitOk;
}

// badset ---------------------------------------------------------------------------------------

int run_badset(Context& ctx) {
  load(ctx, true);
  const transport::MapPtr map = map_from(ctx);
  const transport::ReferenceMeasure ref = reference_from(ctx, map->dimension());
  const dependency::Metric metric = metric_from(ctx, dependency::Metric::absolute());
  const std::size_t bs = metric.block_size();
  if (map->dimension() % bs != 0) throw ConfigError("map dimension must be a multiple of the metric block size");
  const std::size_t sites = map->dimension() / bs;
  const double eps = ctx.get<double>("epsilon", 0.05);
  if (!ctx.config.contains("candidates")) throw ConfigError("badset config needs 'candidates'");
  auto cands = candidates_from(ctx, ctx.config["candidates"], sites, eps);

  bad_set::MembershipContext mctx;
  mctx.map = map;
  mctx.ref = ref;
  mctx.metric = metric;
  mctx.probes = dependency::grid_levels(site_range_from(ctx, bs), ctx.get<std::size_t>("probe_levels", 5));
  mctx.n_mc = ctx.get<std::size_t>("n_mc", 256);
  mctx.seed = mix_seed(ctx.seed, 1);
  const SampleMatrix sample = transport::pushforward_sample(*map, ref, ctx.get<std::size_t>("n", 2000),
                                                            mix_seed(ctx.seed, 2));

  const json cj = ctx.config.value("certificate", json::object());
  bad_set::CertificateContext cc;
  cc.m = cj.value("m", std::size_t{100});
  cc.diameter = metric.diameter();
  cc.oscillation = dependency::OscillationVector(
      cj.value("oscillation", std::vector<double>(sites, 1.0 / static_cast<double>(sites))));
  cc.kl = cj.value("kl", 0.0);
  cc.delta = cj.value("delta", 0.05);
  cc.empirical_risk = cj.value("empirical_risk", 0.0);
  cc.mode = dependency::parse_scale_mode(cj.value("mode", std::string("paper")));

  const auto selection = bad_set::select_candidate(cands, sample, mctx, cc, eps);
  json report = bad_set::to_json(selection);
  report["rule"] = "bad iff ratio - 2 std_error > L_ij for some i < j and probe";
  for (std::size_t k = 0; k < cands.size(); ++k) {
    report["candidates"][k]["label"] = cands[k].label;
    report["candidates"][k]["epsilon"] = cands[k].epsilon;
  }

  // Probe sensitivity: the same sample against a nested grid of 2L - 1 levels.
  const auto levels = ctx.get<std::size_t>("probe_levels", 5);
  bad_set::MembershipContext fine = mctx;
  fine.probes = dependency::grid_levels(site_range_from(ctx, bs), 2 * levels - 1);
  auto refined = cands;
  const auto refined_sel = bad_set::select_candidate(refined, sample, fine, cc, eps);
  json sens = json::array();
  for (std::size_t k = 0; k < cands.size(); ++k) {
    sens.push_back({{"count", refined_sel.candidates[k].violations}, {"xi", refined_sel.candidates[k].xi}});
  }
  report["probe_sensitivity"] = {{"probe_levels", 2 * levels - 1}, {"chosen", refined_sel.chosen}, {"candidates", sens}};
  ctx.write("report.json", report.dump(2) + "\n");
  if (selection.degenerate_probes > 0) {
    *ctx.err << fmt::format("warning: {} degenerate probes skipped\n", selection.degenerate_probes);
  }
  const auto& best = selection.candidates[selection.chosen];
  *ctx.out << fmt::format("chose candidate {} ({}): xi {:.5f}, gap {:.5f}, total {:.5f}\n", selection.chosen,
                          cands[selection.chosen].label, best.xi, best.gap, best.total);
  return kExitOk;
}

void add_common(CLI::App* sub, CommonOptions& opts, bool config_required) {
  auto* c = sub->add_option("--config", opts.config, "Config file (.toml or .json)");
  if (config_required) c->required();
  sub->add_option("--seed", opts.seed, "Random seed (overrides the config)");
  sub->add_option("--out", opts.out, "Output directory")->capture_default_str();
  sub->add_option("--threads", opts.threads, "Worker threads, 0 = all cores")->capture_default_str();
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Triangular-transport PAC-Bayes risk certificates", "krpac"};
  app.set_version_flag("--version", KRPAC_VERSION);
  app.require_subcommand(1);

  CommonOptions opts;
  std::optional<std::size_t> grid;
  std::optional<std::size_t> mc;
  auto* toy = app.add_subcommand("toy", "Two-dimensional toy experiment: landscape, trade-off, figures");
  add_common(toy, opts, false);
  toy->add_option("--grid", grid, "Landscape grid size G");
  toy->add_option("--mc", mc, "Monte Carlo draws per landscape cell");
  auto* certify = app.add_subcommand("certify", "Evaluate the PAC-Bayes risk certificate");
  add_common(certify, opts, true);
  auto* mgf = app.add_subcommand("mgf-check", "Compare empirical MGFs with the concentration bound");
  add_common(mgf, opts, false);
  auto* deps = app.add_subcommand("deps", "Estimate Lipschitz constants and the dependency matrix");
  add_common(deps, opts, true);
  auto* badset = app.add_subcommand("badset", "Estimate bad-set masses and select a candidate");
  add_common(badset, opts, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  set_thread_count(opts.threads);
  Context ctx;
  ctx.opts = opts;
  ctx.out = &out;
  ctx.err = &err;
  try {
    int code = kExitOk;
    if (*toy) {
      ctx.command = "toy";
      code = run_toy(ctx, grid, mc);
    } else if (*certify) {
      ctx.command = "certify";
      code = run_certify(ctx);
    } else if (*mgf) {
      ctx.command = "mgf-check";
      code = run_mgf_check(ctx);
    } else if (*deps) {
      ctx.command = "deps";
      code = run_deps(ctx);
    } else {
      ctx.command = "badset";
      code = run_badset(ctx);
    }
    write_run_manifest(ctx);
    return code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace krpac::cli
