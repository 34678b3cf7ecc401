#include "hypstab/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>

#include <json.hpp>

#include "hypstab/boundary.hpp"
#include "hypstab/circle.hpp"
#include "hypstab/errors.hpp"
#include "hypstab/geodesic_recognition.hpp"
#include "hypstab/hyperbolicity.hpp"
#include "hypstab/triple_space.hpp"

namespace hypstab {

namespace {

using Json = nlohmann::ordered_json;

// Typed field access; every mistake in the document is InvalidInput.
template <class T>
T field(const Json& obj, const char* key, std::optional<T> fallback = std::nullopt) {
  if (!obj.contains(key) || obj[key].is_null()) {
    if (fallback) return *fallback;
    throw InvalidInput(std::string("missing field '") + key + "'");
  }
  try {
    return obj[key].get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidInput(std::string("field '") + key + "' has the wrong type");
  }
}

HalfInt half_field(const Json& obj, const char* key, std::optional<HalfInt> fallback = std::nullopt) {
  if (!obj.contains(key) || obj[key].is_null()) {
    if (fallback) return *fallback;
    throw InvalidInput(std::string("missing field '") + key + "'");
  }
  double v = 0;
  if (obj[key].is_number()) {
    v = obj[key].get<double>();
  } else if (obj[key].is_string()) {
    try {
      v = std::stod(obj[key].get<std::string>());
    } catch (const std::exception&) {
      throw InvalidInput(std::string("field '") + key + "' is not a number");
    }
  } else {
    throw InvalidInput(std::string("field '") + key + "' is not a number");
  }
  const double twice = 2 * v;
  if (!(std::abs(twice - std::round(twice)) < 1e-9) || std::abs(twice) > 1e9) {
    throw InvalidInput(std::string("field '") + key + "' must be a multiple of 1/2");
  }
  return HalfInt::from_twice(static_cast<std::int64_t>(std::round(twice)));
}

int bounded_int(const Json& obj, const char* key, int lo, int hi, std::optional<int> fallback = std::nullopt) {
  const int v = field<int>(obj, key, fallback);
  if (v < lo || v > hi) {
    throw InvalidInput(std::string("field '") + key + "' must lie in [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }
  return v;
}

std::uint64_t seed_of(const Json& check, const Json& doc) {
  if (check.contains("seed")) return field<std::uint64_t>(check, "seed");
  if (doc.contains("seed")) return field<std::uint64_t>(doc, "seed");
  throw InvalidInput("check '" + check.value("type", std::string("?")) + "' samples and needs a seed");
}

Json half(HalfInt h) { return h.to_double(); }

Json bound(const char* name, Json value) { return Json{{"name", name}, {"value", std::move(value)}}; }

struct Context {
  GroupModel model;
  const Json& doc;
  std::string csv;
};

// Each check fills `out` and returns pass/fail.
using CheckFn = std::function<bool(const Json&, Context&, Json&)>;

bool check_ball(const Json& c, Context& ctx, Json& out) {
  const int radius = bounded_int(c, "radius", 0, 40);
  const Ball ball = build_ball(ctx.model, radius);
  out["measured"] = {{"vertices", ball.size()}, {"sphere_sizes", ball.sphere_sizes()}};
  return true;
}

bool check_delta(const Json& c, Context& ctx, Json& out) {
  const int radius = bounded_int(c, "radius", 2, 12);
  const int inner = bounded_int(c, "inner", 1, radius, radius / 2);
  SampleSpec sample;
  sample.samples = field<std::size_t>(c, "samples", sample.samples);
  sample.seed = seed_of(c, ctx.doc);
  sample.validate();
  const Ball ball = build_ball(ctx.model, radius);
  const HalfInt nu = thin_constant(ball, inner, sample);
  const HalfInt four = four_point_delta(ball, inner, sample);
  CertifyOptions opts;
  opts.inner = inner;
  opts.sample = sample;
  const bool given = c.contains("candidate");
  HalfInt candidate = given ? half_field(c, "candidate") : 2 * nu;
  auto cert = certify_delta(ball, candidate, opts);
  if (!given && !cert.ok()) {
    candidate = candidate + HalfInt(1);
    cert = certify_delta(ball, candidate, opts);
  }
  Json violations = Json::array();
  for (const auto& v : cert.violations) {
    violations.push_back({{"property", v.property}, {"detail", v.detail}, {"measured", half(v.measured)},
                          {"bound", half(v.bound)}});
  }
  out["bound"] = bound("candidate delta (2 nu, +1 if needed)", half(candidate));
  out["measured"] = {{"nu_thin", half(nu)},
                     {"four_point_delta", half(four)},
                     {"delta4", half(cert.delta4)},
                     {"triangles_checked", cert.triangles_checked},
                     {"quadruples_checked", cert.quadruples_checked},
                     {"violations", violations}};
  out["certified_delta"] = cert.ok() ? Json(half(candidate)) : Json(nullptr);
  return cert.ok();
}

bool check_gromov(const Json& c, Context& ctx, Json& out) {
  const int radius = bounded_int(c, "radius", 1, 40);
  const Ball ball = build_ball(ctx.model, radius);
  if (c.contains("alpha")) {
    const auto a = BoundaryPoint::parse(ctx.model, field<std::string>(c, "alpha"));
    const auto b = BoundaryPoint::parse(ctx.model, field<std::string>(c, "beta"));
    const int depth = bounded_int(c, "depth", 1, radius, radius);
    const HalfInt nu = half_field(c, "nu", HalfInt(0));
    const auto p = gromov_product_infinity(ball, 0, a, b, depth, nu);
    out["bound"] = bound("<a_i, b_j> - 2 nu", half(p.lo));
    out["measured"] = {{"lo", half(p.lo)},
                       {"hi", half(p.hi)},
                       {"stabilized_at", p.stabilized_at},
                       {"not_distinct", p.not_distinct}};
    return true;
  }
  const VertexId x = ball.at(ctx.model.parse_word(field<std::string>(c, "x")));
  const VertexId y = ball.at(ctx.model.parse_word(field<std::string>(c, "y")));
  const VertexId z = ball.at(ctx.model.parse_word(field<std::string>(c, "base", std::string())));
  out["measured"] = {{"product", half(ball.gromov_product(x, y, z))}};
  return true;
}

bool check_project(const Json& c, Context& ctx, Json& out) {
  const int radius = bounded_int(c, "radius", 2, 12);
  const Ball ball = build_ball(ctx.model, radius);
  const HalfInt r = half_field(c, "r");
  const int depth = bounded_int(c, "depth", 1, radius, default_projection_depth(ball));
  const HalfInt nu = half_field(c, "nu", HalfInt(0));
  const auto count = field<std::size_t>(c, "triples", 100);
  if (count == 0 || count > 100000) throw InvalidInput("field 'triples' must lie in [1, 100000]");
  const auto triples = sample_triples(ball, count, seed_of(c, ctx.doc), depth, nu);
  const auto rep = projection_diameter(ball, triples, r, depth);
  out["measured"] = {{"q_emp", rep.q_emp},
                     {"triples", rep.triples},
                     {"empty", rep.empty},
                     {"truncated", rep.truncated},
                     {"inexact", rep.inexact}};
  if (c.contains("q_bound")) {
    const int q = field<int>(c, "q_bound");
    out["bound"] = bound("Q(r)", q);
    return rep.q_emp <= q;
  }
  return true;
}

bool check_ledger(const Json& c, Context&, Json& out) {
  const auto l = build_ledger(half_field(c, "delta"), field<int>(c, "q"), field<int>(c, "diam", 0),
                              field<int>(c, "c_v", 0));
  out["measured"] = {{"delta", half(l.delta)}, {"q_of_3delta", l.q_of_3delta}, {"H", l.h},
                     {"diam_pi_d0", l.diam_pi_d0}, {"c_v", l.c_v},   {"R", l.r}};
  out["bound"] = Json::array({bound("H = max{2 delta, Q(3 delta)} + 1", l.h),
                              bound("R > max{24H + 52 delta + diam, C_V + 4H + 11 delta}", l.r)});
  return true;
}

bool check_broken(const Json& c, Context& ctx, Json& out) {
  const HalfInt delta = half_field(c, "delta");
  BrokenScanOptions o;
  o.instances = field<std::size_t>(c, "instances", o.instances);
  o.segments = bounded_int(c, "segments", 2, 64, o.segments);
  o.min_length = bounded_int(c, "min_length", 0, 400, o.min_length);
  o.length_spread = bounded_int(c, "length_spread", 0, 400, o.length_spread);
  o.max_backtrack = bounded_int(c, "max_backtrack", 0, 8, o.max_backtrack);
  o.thickness = bounded_int(c, "thickness", 1, 6, o.thickness);
  o.max_rounds = field<std::size_t>(c, "max_rounds", o.max_rounds);
  o.seed = seed_of(c, ctx.doc);
  const auto rep = broken_geodesic_scan(ctx.model, delta, o);
  out["bound"] = bound("l + 4 delta", "per instance");
  out["measured"] = {{"instances", rep.instances},         {"rejected", rep.rejected},
                     {"failures", rep.failures},           {"rounds", rep.rounds},
                     {"max_hausdorff", rep.max_hausdorff}, {"max_l", half(rep.max_l)},
                     {"max_slack_used", half(rep.max_slack_used)}};
  return rep.failures == 0 && rep.instances >= o.instances;
}

bool check_reconstruct(const Json& c, Context& ctx, Json& out) {
  const HalfInt delta = half_field(c, "delta");
  const HalfInt nu = half_field(c, "nu", HalfInt(0));
  const int h = bounded_int(c, "h", 0, 50, 1);
  const auto minimal_r = static_cast<int>((24 * HalfInt(h) + 16 * delta).floor()) + 1;
  const int r = bounded_int(c, "r", 1, 2000, minimal_r);
  const std::string axis = field<std::string>(c, "axis", std::string(ctx.model.is_free() ? "a b A B" : "a1 b1"));
  const int thickness = bounded_int(c, "thickness", 1, 5, 3);
  const int trials = bounded_int(c, "trials", 1, 10000, 10);
  const bool all_neighbors = field<bool>(c, "all_neighbors", false);
  const std::uint64_t seed = seed_of(c, ctx.doc);

  const Word w = ctx.model.parse_word(axis);
  if (w.empty() || !is_freely_reduced(w)) throw InvalidInput("axis must be a nonempty reduced word");
  const auto len = static_cast<int>(w.size());
  const int power = bounded_int(c, "power", 1, 1000, (2 * r + 32 + len - 1) / len);
  const Ball tube = build_tube(ctx.model, w.power(static_cast<std::size_t>(power)), thickness);
  int passed = 0;
  HalfInt max_haus, min_product, max_corner;
  int max_step = 0;
  bool first = true;
  HalfInt haus_bound, product_bound;
  for (int t = 0; t < trials; ++t) {
    const auto data = axis_coarse_data(tube, h, r, seed + static_cast<std::uint64_t>(t), all_neighbors);
    const auto res = reconstruct(data, delta, nu, tube);
    passed += res.pass() ? 1 : 0;
    const HalfInt prod = std::min(res.endpoint_products.first, res.endpoint_products.second);
    if (first) {
      max_haus = res.hausdorff_to_s;
      min_product = prod;
      max_corner = res.estimates.max_corner;
      first = false;
    }
    max_haus = std::max(max_haus, res.hausdorff_to_s);
    min_product = std::min(min_product, prod);
    max_corner = std::max(max_corner, res.estimates.max_corner);
    max_step = std::max(max_step, res.estimates.max_step);
    haus_bound = res.hausdorff_bound;
    product_bound = res.product_bound;
  }
  out["bound"] = Json::array({bound("3H + 6 delta", half(haus_bound)),
                              bound("R - (4H + 10 delta) - 2 nu", half(product_bound)),
                              bound("R/2 + 2H", (HalfInt::from_twice(r) + 2 * HalfInt(h)).to_double()),
                              bound("5H", 5 * h)});
  out["measured"] = {{"R", r},
                     {"tube_vertices", tube.size()},
                     {"trials", trials},
                     {"passed", passed},
                     {"max_hausdorff_to_s", half(max_haus)},
                     {"min_endpoint_product", half(min_product)},
                     {"max_step", max_step},
                     {"max_corner", half(max_corner)}};
  return passed == trials;
}

CircleSpec circle_spec(const Json& c) {
  const Json spec = c.contains("spec") ? c["spec"] : Json("schottky");
  if (spec.is_string()) {
    const auto name = spec.get<std::string>();
    if (name == "schottky") return CircleSpec::schottky();
    if (name == "fuchsian") return CircleSpec::fuchsian_genus2();
    throw InvalidInput("unknown circle spec '" + name + "'");
  }
  if (!spec.is_object()) throw InvalidInput("circle spec must be a name or an object");
  const auto kind = field<std::string>(spec, "kind");
  if (kind != "schottky" && kind != "fuchsian") throw InvalidInput("unknown circle spec kind '" + kind + "'");
  if (!spec.contains("generators")) {
    if (kind == "fuchsian") return CircleSpec::fuchsian_genus2();
    return CircleSpec::schottky(field<double>(spec, "pad_half_width", 0.1), field<double>(spec, "map_half_width", 0.08));
  }
  CircleSpec out;
  out.kind = kind == "schottky" ? CircleSpecKind::Schottky : CircleSpecKind::Fuchsian;
  out.model = kind == "schottky" ? GroupModel::free_group(2) : GroupModel::surface_group(2);
  for (const auto& g : spec["generators"]) {
    const auto m = g.get<std::vector<double>>();
    if (m.size() != 4) throw InvalidInput("a generator is [a, b, c, d]");
    out.generators.push_back({m[0], m[1], m[2], m[3]});
  }
  if (spec.contains("pads")) {
    for (const auto& p : spec["pads"]) {
      const auto a = p.get<std::vector<double>>();
      if (a.size() != 2) throw InvalidInput("a pad is [lo, length]");
      out.pads.push_back({wrap_unit(a[0]), a[1]});
    }
  }
  out.validate();
  return out;
}

bool check_perturb(const Json& c, Context& ctx, Json& out) {
  const CircleSpec spec = circle_spec(c);
  const auto mode = field<std::string>(c, "mode", std::string("free"));
  const double eps = field<double>(c, "eps");
  if (!(eps >= 0 && eps < 0.1)) throw InvalidInput("field 'eps' must lie in [0, 0.1)");
  SemiConjugacyOptions opts;
  opts.word_length_cap = bounded_int(c, "cap", 1, 10, opts.word_length_cap);
  opts.contraction = field<double>(c, "contraction", opts.contraction);
  opts.min_pairs = field<std::size_t>(c, "min_pairs", opts.min_pairs);
  const int word_length = bounded_int(c, "word_length", 0, 8, opts.word_length_cap);
  const double tolerance = field<double>(c, "tolerance", 1e-3);

  const auto rho0 = CircleAction::standard(spec);
  std::optional<FourierHomeo> phi;
  CircleAction rho = rho0;
  if (mode == "conjugate") {
    phi = FourierHomeo::sine(eps);
    rho = rho0.conjugated(*phi);
  } else if (mode == "free") {
    rho = rho0.with_noise(eps, seed_of(c, ctx.doc));
  } else {
    throw InvalidInput("field 'mode' must be free or conjugate");
  }

  const auto h = build_semiconjugacy(rho0, rho, opts);
  std::vector<Word> words{Word{}};
  for (Word& w : reduced_words(spec.model.num_generators(), word_length)) words.push_back(std::move(w));
  SemiConjugacyReport rep;
  Json points;
  if (c.contains("sample_depth")) {
    const int n = bounded_int(c, "sample_depth", 1, 10);
    rep = verify_semiconjugacy(h, rho0, rho, words, minimal_set_sample(rho, n));
    points = {{"minimal_set_depth", n}};
  } else {
    const int grid = bounded_int(c, "grid", 1, 1 << 20, 4096);
    rep = verify_semiconjugacy(h, rho0, rho, words, static_cast<std::size_t>(grid));
    points = {{"grid", grid}};
  }
  bool pass = rep.defect < tolerance && rep.monotone && rep.degree_one;

  Json measured = {{"points", points},
                   {"words", rep.words},
                   {"defect", rep.defect},
                   {"distance_to_identity", rep.distance_to_identity},
                   {"monotone", rep.monotone},
                   {"degree_one", rep.degree_one},
                   {"matched_pairs", h.matched},
                   {"discarded_pairs", h.discarded},
                   {"fixed_point_words", h.words},
                   {"generator_distance", rho0.generator_distance(rho, 1024)}};
  Json bounds = Json::array({bound("equivariance defect tolerance", tolerance)});
  if (c.contains("identity_bound")) {
    const double b = field<double>(c, "identity_bound");
    bounds.push_back(bound("sup |h - id|", b));
    pass = pass && rep.distance_to_identity <= b;
  }
  if (phi) {
    // Matched pairs should be (phi(x), x); compare with the spacing of the table.
    double err = 0, gap = 0;
    const auto& xs = h.xs();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      err = std::max(err, circle_distance(h.ys()[i], phi->inverse(xs[i])));
      gap = std::max(gap, circle_distance(xs[i], xs[(i + 1) % xs.size()]));
    }
    measured["phi_inverse_error"] = err;
    bounds.push_back(bound("interpolation resolution (largest gap)", gap));
    pass = pass && err <= gap;
  }
  if (c.contains("nest_depth")) {
    const int d = bounded_int(c, "nest_depth", 1, 12);
    const auto cover = minimal_set(rho, d);
    measured["cover_total_length"] = cover.total_length;
  }
  out["bound"] = bounds;
  out["measured"] = measured;

  std::string csv = "x,h\n";
  char line[64];
  for (std::size_t i = 0; i < h.xs().size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", h.xs()[i], wrap_unit(h.ys()[i]));
    csv += line;
  }
  ctx.csv = std::move(csv);
  return pass;
}

const std::map<std::string, CheckFn>& registry() {
  static const std::map<std::string, CheckFn> r = {
      {"ball", check_ball},     {"delta", check_delta},   {"gromov", check_gromov},
      {"project", check_project}, {"ledger", check_ledger}, {"broken", check_broken},
      {"reconstruct", check_reconstruct}, {"perturb-verify", check_perturb}};
  return r;
}

void erase_seconds(Json& j) {
  if (j.is_object()) {
    j.erase("seconds");
    for (auto& [k, v] : j.items()) erase_seconds(v);
  } else if (j.is_array()) {
    for (auto& v : j) erase_seconds(v);
  }
}

Json parse_document(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

bool ScenarioRun::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

ScenarioRun run_scenario(std::string_view document) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const Json doc = parse_document(document);
  if (!doc.is_object()) throw InvalidInput("scenario must be a JSON object");
  if (!doc.contains("checks") || !doc["checks"].is_array() || doc["checks"].empty()) {
    throw InvalidInput("scenario needs a nonempty 'checks' array");
  }
  Context ctx{GroupModel::parse(field<std::string>(doc, "model", std::string("free:2"))), doc, {}};

  // Validate all check types before running anything.
  for (const auto& c : doc["checks"]) {
    if (!c.is_object()) throw InvalidInput("each check must be an object");
    const auto type = field<std::string>(c, "type");
    if (!registry().count(type)) throw InvalidInput("unknown check type '" + type + "'");
  }

  ScenarioRun run;
  Json report;
  report["version"] = kVersion;
  report["scenario"] = doc;
  report["checks"] = Json::array();
  for (const auto& c : doc["checks"]) {
    const auto type = c["type"].get<std::string>();
    const std::string name = c.value("name", type);
    Json out;
    out["name"] = name;
    out["type"] = type;
    const auto t0 = Clock::now();
    bool pass = false;
    try {
      pass = registry().at(type)(c, ctx, out);
    } catch (const InvalidInput&) {
      throw;
    } catch (const HypothesisError& e) {
      out["error"] = {{"kind", "hypothesis"}, {"step", e.step()}, {"message", e.what()}};
    } catch (const Error& e) {
      out["error"] = {{"kind", "check"}, {"message", e.what()}};
    }
    out["pass"] = pass;
    out["seconds"] = std::chrono::duration<double>(Clock::now() - t0).count();
    report["checks"].push_back(out);
    run.checks.push_back({name, pass});
  }
  report["pass"] = run.pass();
  report["seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
  run.report = report.dump(2) + "\n";
  run.csv = std::move(ctx.csv);
  return run;
}

std::string strip_timing(std::string_view report) {
  Json j = parse_document(report);
  erase_seconds(j);
  return j.dump(2) + "\n";
}

}  // namespace hypstab
