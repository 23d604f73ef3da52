#include "causal/runner.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <future>
#include <limits>
#include <random>
#include <set>

#include "causal/error.hpp"

namespace causal {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

cplx parse_cplx(const Json& j, const std::string& what) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cplx(j[0].get<double>(), j[1].get<double>());
  config_error(what + ": expected a number or [re, im]");
}

Json cplx_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Mat2 parse_mat2(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
      !j[1].is_array() || j[1].size() != 2)
    config_error(what + ": expected a 2x2 array");
  Mat2 m;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m(r, c) = parse_cplx(j[r][c], what);
  return m;
}

Json mat2_json(const Mat2& m) {
  Json out = Json::array();
  for (int r = 0; r < 2; ++r) out.push_back(Json::array({cplx_json(m(r, 0)), cplx_json(m(r, 1))}));
  return out;
}

std::string spec_name(const Json& spec, const std::string& what) {
  if (!spec.is_object() || !spec.contains("name") || !spec["name"].is_string())
    config_error(what + ": expected an object with a string \"name\"");
  return spec["name"].get<std::string>();
}

void allow_keys(const Json& spec, const std::string& what, std::set<std::string> keys) {
  keys.insert("name");
  for (auto it = spec.begin(); it != spec.end(); ++it)
    if (!keys.count(it.key())) config_error(what + ": unknown parameter \"" + it.key() + "\"");
}

double param(const Json& spec, const std::string& key, double fallback) {
  if (!spec.contains(key)) return fallback;
  if (!spec[key].is_number()) config_error("parameter \"" + key + "\" must be a number");
  return spec[key].get<double>();
}

cplx cparam(const Json& spec, const std::string& key, cplx fallback) {
  return spec.contains(key) ? parse_cplx(spec[key], key) : fallback;
}

Bispinor default_center() {
  Bispinor c;
  c << 0.05, 0.02, -0.03, 0.04;
  return c;
}

Mat2 random_frame(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 0.25);
  Mat2 m = Mat2::Identity();
  for (int k = 0; k < 4; ++k) m(k / 2, k % 2) += cplx(gauss(rng), gauss(rng));
  return m;
}

struct Affine {
  Mat2 l, lt;
  Bispinor b;
};

Affine random_affine(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Affine a;
  a.l = random_frame(rng);
  a.lt = random_frame(rng);
  std::normal_distribution<double> gauss(0.0, 0.2);
  for (int k = 0; k < 4; ++k) a.b(k / 2, k % 2) = cplx(gauss(rng), gauss(rng));
  return a;
}

/// Affine data for the morphism names that admit matched frames.
std::vector<Affine> affine_chain(const Json& spec, std::uint64_t seed) {
  const std::string name = spec_name(spec, "morphism");
  if (name == "identity") {
    allow_keys(spec, "morphism", {});
    return {};
  }
  if (name == "lifted_affine") {
    allow_keys(spec, "morphism", {"L", "Lt", "b"});
    Affine a = random_affine(seed);
    if (spec.contains("L")) a.l = parse_mat2(spec["L"], "L");
    if (spec.contains("Lt")) a.lt = parse_mat2(spec["Lt"], "Lt");
    if (spec.contains("b")) a.b = parse_mat2(spec["b"], "b");
    for (const Mat2* m : {&a.l, &a.lt})
      if (std::abs(m->determinant()) < 1e-12) config_error("lifted_affine: singular frame matrix");
    return {a};
  }
  if (name == "composite") {
    allow_keys(spec, "morphism", {});
    return {random_affine(seed), random_affine(seed + 1)};
  }
  return {};
}

bool is_affine_name(const std::string& name) {
  return name == "identity" || name == "lifted_affine" || name == "composite";
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

// --- catalogs ----------------------------------------------------------------

GaugeField field_from_spec(const Json& spec) {
  const std::string name = spec_name(spec, "field");
  if (name == "zero") {
    allow_keys(spec, "field", {"n"});
    const double n = param(spec, "n", 2);
    if (n < 1 || n != std::floor(n)) config_error("zero: n must be a positive integer");
    return zero_field(static_cast<int>(n));
  }
  if (name == "constant_asd") {
    allow_keys(spec, "field", {"scale"});
    const double s = param(spec, "scale", 1.0);
    std::array<MatN, 4> f;
    f[0] = s * Eigen::Vector2cd(0.3, -0.3).asDiagonal().toDenseMatrix();
    f[1] = s * Eigen::Vector2cd(0.2, 0.1).asDiagonal().toDenseMatrix();
    f[2] = f[1];
    f[3] = s * Eigen::Vector2cd(0.5, cplx(0.0, 0.4)).asDiagonal().toDenseMatrix();
    return make_constant_asd(f);
  }
  if (name == "constant") {
    allow_keys(spec, "field", {"scale"});
    const double s = param(spec, "scale", 1.0);
    std::array<MatN, 4> fa, fs;
    const cplx va[4] = {0.3, cplx(0.1, 0.2), cplx(0.1, 0.2), -0.4};
    const cplx vs[4] = {0.2, 0.5, 0.5, cplx(0.0, 0.3)};
    for (int k = 0; k < 4; ++k) {
      fa[k] = MatN::Constant(1, 1, s * va[k]);
      fs[k] = MatN::Constant(1, 1, s * vs[k]);
    }
    GaugeField g = make_constant_field(fa, fs);
    g.name = "constant";
    return g;
  }
  if (name == "instanton" || name == "perturbed_instanton") {
    allow_keys(spec, "field", {"rho", "center", "strength"});
    const cplx rho = cparam(spec, "rho", 2.0);
    const Bispinor center = spec.contains("center") ? parse_mat2(spec["center"], "center")
                                                    : default_center();
    if (name == "instanton") {
      if (spec.contains("strength")) config_error("instanton: unknown parameter \"strength\"");
      return make_instanton(rho, center);
    }
    Mat2 g;
    g << 1.0, 0.4, 0.4, -0.6;
    return make_perturbed_instanton(rho, center, param(spec, "strength", 0.5) * g);
  }
  if (name == "non_maxwell") {
    allow_keys(spec, "field", {"strength"});
    return make_non_maxwell(cparam(spec, "strength", 0.7));
  }
  config_error("unknown field \"" + name + "\"");
}

SelfDualMorphism self_dual_from_spec(const Json& spec, std::uint64_t seed) {
  const std::string name = spec_name(spec, "morphism");
  if (name == "componentwise_square") {
    allow_keys(spec, "morphism", {});
    return componentwise_square_sd();
  }
  if (name == "squaring_control") {
    allow_keys(spec, "morphism", {});
    return squaring_control_sd();
  }
  if (!is_affine_name(name)) config_error("unknown morphism \"" + name + "\"");
  const auto chain = affine_chain(spec, seed);
  if (chain.empty()) return identity_sd();
  SelfDualMorphism f = lifted_affine_sd(chain[0].l, chain[0].lt, chain[0].b);
  for (size_t k = 1; k < chain.size(); ++k)
    f = compose(lifted_affine_sd(chain[k].l, chain[k].lt, chain[k].b), f);
  return f;
}

CausalMorphism causal_from_spec(const Json& spec, std::uint64_t seed) {
  const std::string name = spec_name(spec, "morphism");
  if (name == "componentwise_square" || name == "squaring_control") {
    allow_keys(spec, "morphism", {});
    return squaring_control_causal();
  }
  if (!is_affine_name(name)) config_error("unknown morphism \"" + name + "\"");
  const auto chain = affine_chain(spec, seed);
  if (chain.empty()) return identity_causal();
  if (chain.size() == 1) return lifted_affine_causal(chain[0].l, chain[0].lt, chain[0].b);
  // the composite of affine maps is affine; keep the analytic jet
  Mat2 l = Mat2::Identity(), lt = Mat2::Identity();
  Bispinor b = Bispinor::Zero();
  for (const Affine& a : chain) {
    b = a.l * b * a.lt.transpose() + a.b;
    l = a.l * l;
    lt = a.lt * lt;
  }
  CausalMorphism f = lifted_affine_causal(l, lt, b);
  f.name = "composite";
  return f;
}

ExtendedCausalMorphism frames_from_spec(const Json& morphism, const Json& frames,
                                        std::uint64_t seed) {
  const std::string mname = spec_name(morphism, "morphism");
  if (!is_affine_name(mname))
    config_error("frames need an affine morphism, got \"" + mname + "\"");
  const CausalMorphism f = causal_from_spec(morphism, seed);
  Mat2 l = Mat2::Identity(), lt = Mat2::Identity();
  for (const Affine& a : affine_chain(morphism, seed)) {
    l = a.l * l;
    lt = a.lt * lt;
  }
  const std::string name = spec_name(frames, "frames");
  if (name == "matched") {
    allow_keys(frames, "frames", {});
    return constant_frames(f, l, lt);
  }
  if (name == "scale_mismatch") {
    allow_keys(frames, "frames", {"factor"});
    return constant_frames(f, l, cparam(frames, "factor", 2.0) * lt);
  }
  if (name == "coupled") {
    allow_keys(frames, "frames", {"kappa"});
    return constant_frames(f, l, lt, param(frames, "kappa", 0.5));
  }
  config_error("unknown frames \"" + name + "\"");
}

namespace {

SuperConnection connection_from_spec(const Json& spec, const Json& reduction_field, int N,
                                     std::uint64_t seed) {
  const std::string name = spec_name(spec, "connection");
  if (name == "zero") {
    allow_keys(spec, "connection", {});
    return zero_connection(N, 1);
  }
  if (name == "random") {
    allow_keys(spec, "connection", {"scale"});
    return random_connection(N, 1, static_cast<unsigned>(seed), param(spec, "scale", 1.0));
  }
  if (name == "embedded") {
    allow_keys(spec, "connection", {});
    return embed_ym(solve_embedding(field_from_spec(reduction_field), N));
  }
  config_error("unknown connection \"" + name + "\"");
}

}  // namespace

// --- configuration -----------------------------------------------------------

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"asdym", "pullback", "contact",
                                                 "super", "reduction", "all"};
  return names;
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> tol = {
      {"asd", 1e-5},          {"flatness", 1e-6},       {"bilinearity", 1e-7},
      {"holonomy", 1e-6},     {"patching", 1e-6},       {"identity", 1e-12},
      {"contact", 1e-8},      {"flat_algebra", 1e-12},  {"vv", 1e-10},
      {"mm", 1e-10},          {"super_contact", 1e-8},  {"integrability", 1e-8},
      {"pulled_integrability", 1e-7}, {"gauge", 1e-10}, {"form", 1e-8},
      {"gauge_preservation", 1e-8},   {"detection", 1e-3}};
  return tol;
}

int default_threads() {
  if (const char* env = std::getenv("CAUSAL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 256) return static_cast<int>(v);
  }
  return 1;
}

RunConfig parse_config(const Json& j) {
  if (!j.is_object()) config_error("config must be an object");
  static const std::set<std::string> keys = {"suite",      "field",  "reduction_field",
                                             "morphism",   "frames", "connection",
                                             "region",     "tolerances", "seed",
                                             "N",          "threads"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!keys.count(it.key())) config_error("unknown config key \"" + it.key() + "\"");
  RunConfig c;
  c.threads = default_threads();
  if (j.contains("suite")) {
    if (!j["suite"].is_string()) config_error("suite must be a string");
    c.suite = j["suite"].get<std::string>();
  }
  if (std::find(suite_names().begin(), suite_names().end(), c.suite) == suite_names().end())
    config_error("unknown suite \"" + c.suite + "\"");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) config_error("seed must be an integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("N")) {
    if (!j["N"].is_number_integer()) config_error("N must be 1 or 3");
    c.N = j["N"].get<int>();
  }
  if (c.N != 1 && c.N != 3) config_error("N must be 1 or 3");
  if (j.contains("threads")) {
    if (!j["threads"].is_number_integer() || j["threads"].get<int>() < 1)
      config_error("threads must be a positive integer");
    c.threads = j["threads"].get<int>();
  }
  for (auto [key, target] : {std::pair{"field", &c.field},
                             std::pair{"reduction_field", &c.reduction_field},
                             std::pair{"morphism", &c.morphism}, std::pair{"frames", &c.frames},
                             std::pair{"connection", &c.connection}}) {
    if (j.contains(key)) *target = j[key];
    spec_name(*target, key);
  }
  c.region.seed = c.seed;
  if (j.contains("region")) {
    const Json& r = j["region"];
    if (!r.is_object()) config_error("region must be an object");
    for (auto it = r.begin(); it != r.end(); ++it)
      if (it.key() != "basepoint" && it.key() != "radius" && it.key() != "samples")
        config_error("region: unknown key \"" + it.key() + "\"");
    if (r.contains("basepoint")) c.region.basepoint = parse_mat2(r["basepoint"], "basepoint");
    if (r.contains("radius")) {
      if (!r["radius"].is_number() || r["radius"].get<double>() <= 0.0)
        config_error("region radius must be positive");
      c.region.radius = r["radius"].get<double>();
    }
    if (r.contains("samples")) {
      if (!r["samples"].is_number_integer() || r["samples"].get<int>() < 1)
        config_error("region samples must be >= 1");
      c.region.samples = r["samples"].get<int>();
    }
  }
  c.tolerances = default_tolerances();
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) config_error("tolerances must be an object");
    for (auto it = j["tolerances"].begin(); it != j["tolerances"].end(); ++it) {
      if (!c.tolerances.count(it.key())) config_error("unknown tolerance \"" + it.key() + "\"");
      if (!it.value().is_number() || it.value().get<double>() <= 0.0)
        config_error("tolerance \"" + it.key() + "\" must be positive");
      c.tolerances[it.key()] = it.value().get<double>();
    }
  }
  // resolve catalog names now so that bad names surface as config errors
  field_from_spec(c.field);
  field_from_spec(c.reduction_field);
  self_dual_from_spec(c.morphism, c.seed);
  causal_from_spec(c.morphism, c.seed);
  const std::string fname = spec_name(c.frames, "frames");
  if (fname != "matched" && fname != "scale_mismatch" && fname != "coupled")
    config_error("unknown frames \"" + fname + "\"");
  if (c.suite == "super" || c.suite == "reduction") frames_from_spec(c.morphism, c.frames, c.seed);
  const std::string cname = spec_name(c.connection, "connection");
  if (cname != "zero" && cname != "random" && cname != "embedded")
    config_error("unknown connection \"" + cname + "\"");
  return c;
}

Json config_to_json(const RunConfig& c) {
  Json j;
  j["suite"] = c.suite;
  j["seed"] = c.seed;
  j["N"] = c.N;
  j["field"] = c.field;
  j["reduction_field"] = c.reduction_field;
  j["morphism"] = c.morphism;
  j["frames"] = c.frames;
  j["connection"] = c.connection;
  j["region"] = {{"basepoint", mat2_json(c.region.basepoint)},
                 {"radius", c.region.radius},
                 {"samples", c.region.samples}};
  Json tol = Json::object();
  for (const auto& [k, v] : c.tolerances) tol[k] = v;
  j["tolerances"] = tol;
  return j;
}

// --- suites --------------------------------------------------------------------

namespace {

struct Stats {
  double max = 0.0, sum = 0.0;
  int n = 0;
  void add(double v) {
    max = std::max(max, v);
    sum += v;
    ++n;
  }
};

CheckRecord make_record(std::string name, std::string anchor, double threshold,
                        bool detect = false) {
  CheckRecord r;
  r.name = std::move(name);
  r.anchor = std::move(anchor);
  r.threshold = threshold;
  r.detect = detect;
  return r;
}

void finish(CheckRecord& r, const Stats& s) {
  r.max_residual = s.max;
  r.mean_residual = s.n > 0 ? s.sum / s.n : 0.0;
  r.samples = s.n;
  const bool within = r.detect ? r.max_residual > r.threshold : r.max_residual < r.threshold;
  r.pass = r.errors.empty() && r.samples > 0 && within;
}

using Task = std::function<std::vector<CheckRecord>()>;

/// Runs `body`, which fills the given records; a thrown error is attached to
/// every record that has not been finished.
Task guarded(std::vector<CheckRecord> records,
             std::function<void(std::vector<CheckRecord>&)> body) {
  return [records, body]() mutable {
    try {
      body(records);
    } catch (const std::exception& e) {
      for (auto& r : records) {
        r.errors.push_back(e.what());
        r.pass = false;
      }
    }
    return records;
  };
}

double tol(const RunConfig& c, const std::string& key) { return c.tolerances.at(key); }

std::vector<cplx> line_samples() { return {0.0, cplx(0.4, -0.1)}; }

std::pair<std::vector<Bispinor>, std::mt19937_64> region_points(const RunConfig& c,
                                                                const GaugeField& f,
                                                                std::uint64_t salt) {
  Region r = c.region;
  r.seed = mix(c.seed, salt);
  return {sample_region(r, [&](const Bispinor& x) { return f.is_singular(x); }),
          std::mt19937_64(mix(c.seed, salt + 100))};
}

cplx gauss_c(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  return cplx(re, g(rng));
}

void asdym_tasks(const RunConfig& c, std::vector<Task>& tasks) {
  tasks.push_back(guarded(
      {make_record("asdym.asd_residual", "self-dual curvature block vanishes", tol(c, "asd")),
       make_record("asdym.alpha_plane_flatness", "curvature vanishes on every alpha-plane",
                   tol(c, "flatness"))},
      [c](std::vector<CheckRecord>& rec) {
        const GaugeField f = field_from_spec(c.field);
        auto [points, rng] = region_points(c, f, 1);
        Stats asd, flat;
        for (const Bispinor& x : points) {
          try {
            asd.add(asd_residual(f, x));
            const Spinor l1(gauss_c(rng), gauss_c(rng)), l2(gauss_c(rng), gauss_c(rng));
            const CoSpinor lt(gauss_c(rng), gauss_c(rng));
            flat.add(plane_commutator_residual(f, x, l1, l2, lt));
          } catch (const Error& e) {
            rec[0].errors.push_back(e.what());
            rec[1].errors.push_back(e.what());
          }
        }
        finish(rec[0], asd);
        finish(rec[1], flat);
      }));
  tasks.push_back(guarded(
      {make_record("detects.non_asd_field", "perturbed instanton is flagged as non-ASD",
                   tol(c, "detection"), true)},
      [c](std::vector<CheckRecord>& rec) {
        const GaugeField f = field_from_spec({{"name", "perturbed_instanton"}});
        RunConfig small = c;
        small.region.samples = 10;
        auto [points, rng] = region_points(small, f, 2);
        Stats s;
        for (const Bispinor& x : points) s.add(asd_residual(f, x));
        finish(rec[0], s);
      }));
}

/// Residual of Wilson lines around a parallelogram with chart sides
/// (side, 0) and (0, side) in planes through region points.
Stats holonomy_on_planes(const SelfDualMorphism& m, const GaugeField& f,
                         const std::vector<Bispinor>& points, std::mt19937_64& rng, double side,
                         int planes) {
  Stats s;
  for (int k = 0; k < planes && k < static_cast<int>(points.size()); ++k) {
    const AlphaPlane z{points[k], CoSpinor(gauss_c(rng), gauss_c(rng))};
    s.add(path_independence_residual(m, f, z, z.chart(Vec2(0.0, 0.0)),
                                     z.chart(Vec2(side, side))));
  }
  return s;
}

void pullback_tasks(const RunConfig& c, std::vector<Task>& tasks) {
  tasks.push_back(guarded(
      {make_record("pullback.asd_preservation", "pullback of an ASD field is ASD", tol(c, "asd")),
       make_record("pullback.bilinearity", "pulled-back components are bilinear in the fiber",
                   tol(c, "bilinearity")),
       make_record("pullback.path_independence",
                   "Wilson lines in mapped alpha-planes are path independent", tol(c, "holonomy"))},
      [c](std::vector<CheckRecord>& rec) {
        const GaugeField f = field_from_spec(c.field);
        const SelfDualMorphism m = self_dual_from_spec(c.morphism, c.seed);
        SymmetryTolerances t;
        t.asd = tol(c, "asd");
        t.bilinearity = tol(c, "bilinearity");
        t.holonomy = tol(c, "holonomy");
        Region r = c.region;
        r.seed = mix(c.seed, 3);
        const SymmetryReport s = verify_morphism_symmetry(m, f, r, t);
        const double maxes[3] = {s.max_asd, s.max_bilinearity, s.max_holonomy};
        const double means[3] = {s.mean_asd, s.mean_bilinearity, s.mean_holonomy};
        for (int k = 0; k < 3; ++k) {
          rec[k].errors = s.errors;
          Stats st;
          st.max = maxes[k];
          st.sum = means[k] * s.samples;
          st.n = s.samples;
          finish(rec[k], st);
        }
      }));
  tasks.push_back(guarded(
      {make_record("pullback.identity_law", "pullback by the identity reproduces the field",
                   tol(c, "identity"))},
      [c](std::vector<CheckRecord>& rec) {
        const GaugeField f = field_from_spec(c.field);
        const SelfDualMorphism id = identity_sd();
        auto [points, rng] = region_points(c, f, 4);
        Stats s;
        for (const Bispinor& x : points) {
          const PullbackValue v = pullback_connection_at(id, f, x);
          const Potential a = f.at(x);
          double d = 0.0;
          for (int mu = 0; mu < 4; ++mu) d = std::max(d, (v.components[mu] - a[mu]).norm());
          s.add(d);
        }
        finish(rec[0], s);
      }));
  tasks.push_back(guarded(
      {make_record("pullback.patching_invariance",
                   "patching matrix is constant along each mapped alpha-plane",
                   tol(c, "patching"))},
      [c](std::vector<CheckRecord>& rec) {
        const GaugeField f = field_from_spec(c.field);
        const SelfDualMorphism m = self_dual_from_spec(c.morphism, c.seed);
        RunConfig small = c;
        small.region.samples = 3;
        auto [points, rng] = region_points(small, f, 5);
        std::uniform_real_distribution<double> u(-0.3, 0.3);
        Stats s;
        for (const Bispinor& base : points) {
          const AlphaPlane z{base, CoSpinor(gauss_c(rng), gauss_c(rng))};
          for (int pair = 0; pair < 10; ++pair) {
            const Bispinor x1 = z.chart(Vec2(cplx(u(rng), u(rng)), cplx(u(rng), u(rng))));
            const Bispinor x2 = z.chart(Vec2(cplx(u(rng), u(rng)), cplx(u(rng), u(rng))));
            try {
              s.add((patching_data(m, f, z, x1).g - patching_data(m, f, z, x2).g).norm());
            } catch (const Error& e) {
              rec[0].errors.push_back(e.what());
            }
          }
        }
        finish(rec[0], s);
      }));
  tasks.push_back(guarded(
      {make_record("detects.non_asd_holonomy",
                   "non-ASD control has path-dependent Wilson lines on a unit parallelogram",
                   tol(c, "detection"), true)},
      [c](std::vector<CheckRecord>& rec) {
        const GaugeField f = field_from_spec({{"name", "perturbed_instanton"}});
        const SelfDualMorphism m = self_dual_from_spec(c.morphism, c.seed);
        RunConfig small = c;
        small.region.samples = 3;
        auto [points, rng] = region_points(small, f, 6);
        finish(rec[0], holonomy_on_planes(m, f, points, rng, 1.0, 3));
      }));
}

void contact_tasks(const RunConfig& c, std::vector<Task>& tasks) {
  auto from_report = [](CheckRecord& r, const ContactReport& rep) {
    Stats s;
    s.max = rep.max_residual;
    s.sum = rep.mean_residual * rep.samples;
    s.n = rep.samples;
    finish(r, s);
  };
  tasks.push_back(guarded(
      {make_record("contact.self_dual", "prolonged alpha-surfaces map to prolongations",
                   tol(c, "contact"))},
      [c, from_report](std::vector<CheckRecord>& rec) {
        from_report(rec[0], certify_self_dual(self_dual_from_spec(c.morphism, c.seed)));
      }));
  tasks.push_back(guarded(
      {make_record("contact.causal", "prolonged null curves map to prolongations",
                   tol(c, "contact"))},
      [c, from_report](std::vector<CheckRecord>& rec) {
        from_report(rec[0], certify_causal(causal_from_spec(c.morphism, c.seed)));
      }));
  tasks.push_back(guarded(
      {make_record("detects.non_contact_self_dual", "componentwise square breaks the contact condition",
                   tol(c, "detection"), true),
       make_record("detects.non_contact_causal", "squaring control breaks the contact condition",
                   tol(c, "detection"), true)},
      [from_report](std::vector<CheckRecord>& rec) {
        from_report(rec[0], certify_self_dual(componentwise_square_sd()));
        from_report(rec[1], certify_causal(squaring_control_causal()));
      }));
}

double flat_algebra_defect(int N) {
  const cplx two_i(0.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const auto qa = susy_generator(SusyKind::Q, i, a, N);
          const auto qba = susy_generator(SusyKind::QBar, i, a, N);
          worst = std::max(worst, anticommutator(qa, susy_generator(SusyKind::Q, j, b, N)).norm_at_origin());
          worst = std::max(worst, anticommutator(qba, susy_generator(SusyKind::QBar, j, b, N)).norm_at_origin());
          SuperVectorOp mixed = anticommutator(qa, susy_generator(SusyKind::QBar, j, b, N));
          if (i == j) mixed = mixed - two_i * partial_x(slot(a, b), N);
          worst = std::max(worst, mixed.norm_at_origin());
        }
  return worst;
}

void super_tasks(const RunConfig& c, std::vector<Task>& tasks) {
  tasks.push_back(guarded(
      {make_record("super.flat_algebra", "flat supersymmetry algebra", tol(c, "flat_algebra"))},
      [c](std::vector<CheckRecord>& rec) {
        Stats s;
        s.add(flat_algebra_defect(1));
        if (c.N != 1) s.add(flat_algebra_defect(c.N));
        finish(rec[0], s);
      }));
  tasks.push_back(guarded(
      {make_record("super.vv_compatibility", "odd frames match the pushed null direction",
                   tol(c, "vv")),
       make_record("super.frame_inverse", "pushed odd frames satisfy M Mbar^T = I", tol(c, "mm")),
       make_record("super.contact", "super null lines map to super null lines",
                   tol(c, "super_contact"))},
      [c](std::vector<CheckRecord>& rec) {
        const SuperCertReport r =
            certify_extended(frames_from_spec(c.morphism, c.frames, c.seed), c.N);
        const double vals[3] = {r.max_vv, r.max_mm, r.max_contact};
        for (int k = 0; k < 3; ++k) {
          rec[k].errors = r.errors;
          Stats s;
          s.max = vals[k];
          s.sum = vals[k] * r.samples;
          s.n = r.samples;
          finish(rec[k], s);
        }
      }));
  tasks.push_back(guarded(
      {make_record("super.line_integrability", "superconnection is flat on super null lines",
                   tol(c, "integrability")),
       make_record("super.pullback_integrability",
                   "pullback of a line-integrable superconnection is line-integrable",
                   tol(c, "pulled_integrability"))},
      [c](std::vector<CheckRecord>& rec) {
        const SuperConnection phi = connection_from_spec(c.connection, c.reduction_field, c.N, c.seed);
        const SuperCausalMorphism f = extend_causal(frames_from_spec(c.morphism, c.frames, c.seed));
        Stats s, p;
        for (const SuperNullLine& line : super_certification_lines(c.N)) {
          s.add(line_integrability_residual(phi, line, line_samples()));
          const SuperConnection pulled = pullback_connection(f, phi, line.dir_l, line.dir_r);
          p.add(line_integrability_residual(pulled, line, {0.0}));
        }
        finish(rec[0], s);
        finish(rec[1], p);
      }));
  tasks.push_back(guarded(
      {make_record("detects.scale_mismatch", "mismatched odd frame scale is flagged",
                   tol(c, "detection"), true),
       make_record("detects.random_connection", "generic superconnection is not line-integrable",
                   tol(c, "detection"), true),
       make_record("detects.scaled_odd_parameter", "rescaled odd parameter breaks M Mbar^T = I",
                   tol(c, "detection"), true)},
      [c](std::vector<CheckRecord>& rec) {
        const ExtendedCausalMorphism bad =
            frames_from_spec(c.morphism, {{"name", "scale_mismatch"}}, c.seed);
        const SuperCertReport r = certify_extended(bad, c.N);
        Stats s0;
        s0.add(std::max(r.max_vv, r.max_mm));
        finish(rec[0], s0);
        Stats s1, s2;
        const SuperConnection rnd = random_connection(c.N, 1, static_cast<unsigned>(mix(c.seed, 7)));
        for (const SuperNullLine& line : super_certification_lines(c.N)) {
          s1.add(line_integrability_residual(rnd, line, line_samples()));
          SuperCurve chi = line_chart(line, 0.0, 2);
          chi.theta[0] *= 2.0;
          chi.theta[1] *= 2.0;
          s2.add(super_prolong(chi, std::numeric_limits<double>::infinity()).mm_residual);
        }
        finish(rec[1], s1);
        finish(rec[2], s2);
      }));
}

void reduction_tasks(const RunConfig& c, std::vector<Task>& tasks) {
  tasks.push_back(guarded(
      {make_record("reduction.solve", "embedding solved order by order in tau", 0.5),
       make_record("reduction.line_integrability", "embedded superconnection is line-integrable",
                   tol(c, "integrability")),
       make_record("reduction.gauge_condition", "tau.(h + htilde) = 0", tol(c, "gauge")),
       make_record("reduction.form_preservation",
                   "pullback keeps the embedded form across points with equal x and tau",
                   tol(c, "form")),
       make_record("reduction.gauge_preservation", "pullback keeps the gauge condition",
                   tol(c, "gauge_preservation"))},
      [c](std::vector<CheckRecord>& rec) {
        const EmbeddedYMData data = solve_embedding(field_from_spec(c.reduction_field), c.N);
        Stats solved;
        solved.add(0.0);
        finish(rec[0], solved);
        const SuperConnection phi = embed_ym(data);
        Stats li, gc, fp, gp;
        for (const SuperNullLine& line : super_certification_lines(c.N))
          li.add(line_integrability_residual(phi, line, line_samples()));
        gc.add(gauge_condition_residual(data));
        const SuperCausalMorphism f = extend_causal(frames_from_spec(c.morphism, c.frames, c.seed));
        SuperPoint z;
        z.N = c.N;
        z.x = c.region.basepoint;
        z.x(0, 1) += 0.1;
        z.x(1, 0) -= 0.05;
        const auto fibers = fiber_samples(static_cast<unsigned>(mix(c.seed, 8)), 20);
        fp.add(form_preservation_residual(f, data, z, fibers,
                                          flavor_rotation(c.N, static_cast<unsigned>(mix(c.seed, 9)))));
        for (int k = 0; k < 3; ++k)
          gp.add(superfield_gauge(pullback_phi(f, phi, z.x, fibers[k].first, fibers[k].second, 1))
                     .norm());
        finish(rec[1], li);
        finish(rec[2], gc);
        finish(rec[3], fp);
        finish(rec[4], gp);
      }));
  tasks.push_back(guarded(
      {make_record("detects.non_yang_mills", "non-Maxwell input has no embedding", 0.5, true),
       make_record("detects.odd_coupled_frame", "odd-coordinate dependent frame breaks the form",
                   tol(c, "detection"), true)},
      [c](std::vector<CheckRecord>& rec) {
        Stats rejected;
        try {
          solve_embedding(make_non_maxwell(0.7), c.N);
          rejected.add(0.0);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::NoSolution) throw;
          rejected.add(1.0);
        }
        finish(rec[0], rejected);
        const EmbeddedYMData data = solve_embedding(field_from_spec({{"name", "constant"}}), c.N);
        const SuperCausalMorphism f =
            extend_causal(frames_from_spec(c.morphism, {{"name", "coupled"}}, c.seed));
        SuperPoint z;
        z.N = c.N;
        z.x = c.region.basepoint;
        Stats s;
        s.add(form_preservation_residual(f, data, z,
                                         fiber_samples(static_cast<unsigned>(mix(c.seed, 10)), 3),
                                         flavor_rotation(c.N, static_cast<unsigned>(mix(c.seed, 11)))));
        finish(rec[1], s);
      }));
}

}  // namespace

Report run(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Task> tasks;
  const bool all = cfg.suite == "all";
  if (all || cfg.suite == "asdym") asdym_tasks(cfg, tasks);
  if (all || cfg.suite == "pullback") pullback_tasks(cfg, tasks);
  if (all || cfg.suite == "contact") contact_tasks(cfg, tasks);
  if (all || cfg.suite == "super") super_tasks(cfg, tasks);
  if (all || cfg.suite == "reduction") reduction_tasks(cfg, tasks);

  std::vector<std::vector<CheckRecord>> results(tasks.size());
  const size_t width = static_cast<size_t>(std::max(cfg.threads, 1));
  for (size_t start = 0; start < tasks.size(); start += width) {
    std::vector<std::future<std::vector<CheckRecord>>> running;
    for (size_t k = start; k < std::min(tasks.size(), start + width); ++k)
      running.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, tasks[k]));
    for (size_t k = 0; k < running.size(); ++k) results[start + k] = running[k].get();
  }

  Report rep;
  rep.config = config_to_json(cfg);
  rep.pass = true;
  for (auto& group : results)
    for (auto& r : group) {
      rep.pass = rep.pass && r.pass && r.errors.empty();
      rep.records.push_back(std::move(r));
    }
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

Json report_to_json(const Report& r) {
  Json j;
  j["schema_version"] = kReportSchema;
  j["toolkit_version"] = r.version;
  j["pass"] = r.pass;
  j["config"] = r.config;
  Json recs = Json::array();
  for (const auto& c : r.records) {
    Json e;
    e["check"] = c.name;
    e["anchor"] = c.anchor;
    e["kind"] = c.detect ? "detection" : "bound";
    e["threshold"] = c.threshold;
    e["max_residual"] = c.max_residual;
    e["mean_residual"] = c.mean_residual;
    e["samples"] = c.samples;
    e["pass"] = c.pass;
    e["errors"] = c.errors;
    recs.push_back(e);
  }
  j["records"] = recs;
  j["wall_time_s"] = r.wall_time;
  return j;
}

}  // namespace causal
