// Acceptance run: one PASS/FAIL line per criterion. The optional argument is
// the path of the causal_verify executable used for the exit-code checks.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "causal/embedding.hpp"
#include "causal/pullback.hpp"
#include "causal/runner.hpp"
#include "grassmann_props.hpp"
#include "oracles.hpp"

using namespace causal;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

Mat2 mat(cplx a, cplx b, cplx c, cplx d) {
  Mat2 m;
  m << a, b, c, d;
  return m;
}

GaugeField constant_abelian_asd() {
  std::array<MatN, 4> f;
  const cplx v[4] = {0.8, cplx(0.2, -0.3), cplx(0.2, -0.3), -0.5};
  for (int k = 0; k < 4; ++k) f[k] = MatN::Constant(1, 1, v[k]);
  return make_constant_asd(f);
}

GaugeField instanton() { return field_from_spec({{"name", "instanton"}}); }

std::vector<SelfDualMorphism> catalog_morphisms() {
  return {self_dual_from_spec({{"name", "identity"}}, 42),
          self_dual_from_spec({{"name", "lifted_affine"}}, 42),
          self_dual_from_spec({{"name", "composite"}}, 42)};
}

Region unit_region(int samples, std::uint64_t seed) {
  Region r;
  r.radius = 0.5;
  r.samples = samples;
  r.seed = seed;
  return r;
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const GaugeField& a : {constant_abelian_asd(), instanton()})
    for (const SelfDualMorphism& f : catalog_morphisms()) {
      const GaugeField pulled = make_pullback_field(f, a);
      for (const Bispinor& x : sample_region(unit_region(100, 1), [&](const Bispinor& y) {
             return a.is_singular(y);
           }))
        worst = std::max(worst, asd_residual(pulled, x));
    }
  const double dt = seconds_since(t0);
  o.detail << "max asd " << worst << " over 3 morphisms x 2 fields x 100 points, " << dt << " s";
  o.require(worst < 1e-5, "asd < 1e-5");
  o.require(dt < 60.0, "runtime < 60 s");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto t0 = Clock::now();
  const GaugeField a = instanton();
  double worst = 0.0;
  for (const Bispinor& x : sample_region(unit_region(100, 2))) {
    const PullbackValue v = pullback_connection_at(identity_sd(), a, x);
    const Potential ax = a.eval(x);
    for (int mu = 0; mu < 4; ++mu) worst = std::max(worst, (v.components[mu] - ax[mu]).norm());
  }
  const double dt = seconds_since(t0);
  o.detail << "max deviation " << worst << ", " << dt << " s";
  o.require(worst < 1e-12, "deviation < 1e-12");
  o.require(dt < 1.0, "runtime < 1 s");
  return o;
}

Outcome criterion3() {
  Outcome o;
  const SelfDualMorphism f = self_dual_from_spec({{"name", "lifted_affine"}}, 42);
  o.require(static_cast<bool>(f.jac), "analytic Jacobian present");
  double worst = 0.0;
  for (const GaugeField& a : {constant_abelian_asd(), instanton()})
    for (const Bispinor& x : sample_region(unit_region(100, 3)))
      worst = std::max(worst, pullback_connection_at(f, a, x, 1.0).bilinearity_defect);
  o.detail << "max additive defect " << worst;
  o.require(worst < 1e-7, "defect < 1e-7");
  return o;
}

Outcome criterion4() {
  Outcome o;
  const SelfDualMorphism f = self_dual_from_spec({{"name", "lifted_affine"}}, 42);
  std::mt19937_64 g(4);
  double asd = 0.0;
  const GaugeField a = instanton();
  for (const Bispinor& x : sample_region(unit_region(20, 4))) {
    const AlphaPlane z{x, {oracle::gauss(g), oracle::gauss(g)}};
    asd = std::max(asd, path_independence_residual(f, a, z, x, z.chart(Vec2(0.1, 0.1))));
  }
  // unit-area chart parallelogram for the non-ASD control
  const GaugeField bad = field_from_spec({{"name", "perturbed_instanton"}});
  double control = 0.0;
  for (const Bispinor& x : sample_region(unit_region(3, 5))) {
    const AlphaPlane z{x, {oracle::gauss(g), oracle::gauss(g)}};
    control = std::max(control, path_independence_residual(f, bad, z, x, z.chart(Vec2(1.0, 1.0))));
  }
  o.detail << "ASD max " << asd << ", control " << control;
  o.require(asd < 1e-6, "ASD difference < 1e-6");
  o.require(control > 1e-3, "control > 1e-3");
  return o;
}

Outcome criterion5() {
  Outcome o;
  const SelfDualMorphism f = self_dual_from_spec({{"name", "lifted_affine"}}, 42);
  const GaugeField a = instanton();
  std::mt19937_64 g(6);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  double worst = 0.0, zero_dev = 0.0;
  for (int plane = 0; plane < 3; ++plane) {
    const AlphaPlane z{oracle::random_bispinor(g, 0.2), {oracle::gauss(g), oracle::gauss(g)}};
    auto point = [&] { return z.chart(Vec2(cplx(u(g), u(g)), cplx(u(g), u(g)))); };
    for (int pair = 0; pair < 10; ++pair) {
      const Bispinor x1 = point(), x2 = point();
      worst = std::max(worst, (patching_data(f, a, z, x1).g - patching_data(f, a, z, x2).g).norm());
      const MatN gz = patching_data(f, zero_field(2), z, x1).g;
      zero_dev = std::max(zero_dev, (gz - MatN::Identity(2, 2)).norm());
    }
  }
  o.detail << "max ||G(x1) - G(x2)|| " << worst << ", zero field ||G - I|| " << zero_dev;
  o.require(worst < 1e-6, "patching < 1e-6");
  o.require(zero_dev == 0.0, "A = 0 gives G = I exactly");
  return o;
}

Outcome criterion6() {
  Outcome o;
  for (int n_susy : {1, 3}) {
    const Report r = run(parse_config({{"suite", "super"}, {"N", n_susy}}));
    for (const auto& rec : r.records)
      if (rec.name == "super.flat_algebra") {
        o.detail << "N=" << n_susy << " defect " << rec.max_residual << " ";
        o.require(rec.pass && rec.max_residual < 1e-12, "flat algebra at N=" + std::to_string(n_susy));
      }
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto t0 = Clock::now();
  const oracle::LawDefects d = oracle::grassmann_laws(12, 1000, 7);
  const double dense = oracle::dense_equivalence(4, 300, 8);
  const double dt = seconds_since(t0);
  o.detail << d.cases << " cases: assoc " << d.associativity << ", anticomm " << d.anticommutativity
           << ", Leibniz " << d.leibniz << "; dense N=1 " << dense << "; " << dt << " s";
  o.require(d.cases == 1000, "1000 cases");
  o.require(std::max({d.associativity, d.anticommutativity, d.leibniz, d.nilpotency}) < 1e-10,
            "laws hold");
  o.require(dense < 1e-12, "dense equivalence");
  o.require(dt < 30.0, "runtime < 30 s");
  return o;
}

Outcome criterion8() {
  Outcome o;
  for (int n_susy : {1, 3}) {
    const SuperCertReport r =
        certify_extended(frames_from_spec({{"name", "lifted_affine"}}, {{"name", "matched"}}, 42), n_susy);
    const SuperCertReport bad = certify_extended(
        frames_from_spec({{"name", "lifted_affine"}}, {{"name", "scale_mismatch"}}, 42), n_susy);
    o.detail << "N=" << n_susy << ": vv " << r.max_vv << ", MM " << r.max_mm << ", contact "
             << r.max_contact << ", mismatch " << std::max(bad.max_vv, bad.max_mm) << "; ";
    o.require(r.errors.empty(), "no errors");
    o.require(r.max_vv < 1e-10 && r.max_mm < 1e-10 && r.max_contact < 1e-8, "certified");
    o.require(std::max(bad.max_vv, bad.max_mm) > 1e-3, "scale mismatch detected");
  }
  return o;
}

Outcome criterion9() {
  Outcome o;
  const EmbeddedYMData d = solve_embedding(field_from_spec({{"name", "constant"}}), 3);
  double li = 0.0;
  const SuperConnection phi = embed_ym(d);
  for (const SuperNullLine& line : super_certification_lines(3))
    li = std::max(li, line_integrability_residual(phi, line, {0.0, cplx(0.4, -0.1)}));
  const double gc = gauge_condition_residual(d);
  const SuperCausalMorphism f =
      extend_causal(frames_from_spec({{"name", "lifted_affine"}}, {{"name", "matched"}}, 42));
  SuperPoint z;
  z.N = 3;
  z.x = mat(0.1, 0.05, -0.05, 0.0);
  const double form = form_preservation_residual(f, d, z, fiber_samples(9, 20), flavor_rotation(3, 10));
  const auto kind = oracle::thrown([] { solve_embedding(make_non_maxwell(0.7), 3); });
  o.detail << "integrability " << li << ", gauge " << gc << ", form " << form
           << ", non-YM: " << (kind ? std::string(to_string(*kind)) : "solved");
  o.require(li < 1e-8, "line integrability < 1e-8");
  o.require(gc < 1e-10, "gauge < 1e-10");
  o.require(form < 1e-8, "form < 1e-8");
  o.require(kind == ErrorKind::NoSolution, "non-YM yields NoSolution");
  return o;
}

Outcome criterion10(const std::string& cli) {
  Outcome o;
  struct Control {
    const char* property;
    Json config;
  };
  const std::vector<Control> controls = {
      {"non-ASD field", {{"suite", "asdym"}, {"field", {{"name", "perturbed_instanton"}}}}},
      {"non-ASD holonomy",
       {{"suite", "pullback"}, {"field", {{"name", "perturbed_instanton"}}}, {"region", {{"samples", 10}}}}},
      {"non-contact self-dual map", {{"suite", "contact"}, {"morphism", {{"name", "componentwise_square"}}}}},
      {"non-contact causal map", {{"suite", "contact"}, {"morphism", {{"name", "squaring_control"}}}}},
      {"scale-mismatched frames", {{"suite", "super"}, {"frames", {{"name", "scale_mismatch"}}}}},
      {"random superconnection", {{"suite", "super"}, {"connection", {{"name", "random"}}}}},
      {"non-Yang-Mills input", {{"suite", "reduction"}, {"reduction_field", {{"name", "non_maxwell"}}}}},
      {"odd-coupled frame", {{"suite", "reduction"}, {"frames", {{"name", "coupled"}}}}},
  };
  const auto dir = std::filesystem::temp_directory_path();
  int k = 0;
  for (const Control& c : controls) {
    const Report r = run(parse_config(c.config));
    std::string code = "n/a";
    if (!cli.empty()) {
      const auto path = dir / ("causal_control_" + std::to_string(k++) + ".json");
      std::ofstream(path) << c.config.dump();
      const std::string cmd = "\"" + cli + "\" --config \"" + path.string() + "\" > /dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      const int rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
      code = std::to_string(rc);
      o.require(rc == 1, std::string(c.property) + " exit code 1");
      std::filesystem::remove(path);
    }
    o.detail << c.property << " -> " << (r.pass ? "pass" : "fail") << " (exit " << code << "); ";
    o.require(!r.pass, std::string(c.property) + " fails its suite");
  }
  const Report baseline = run(parse_config({{"suite", "all"}}));
  o.detail << "baseline all-suite " << (baseline.pass ? "pass" : "fail");
  o.require(baseline.pass, "baseline passes");
  o.require(!cli.empty(), "CLI path supplied");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"ASD preservation", criterion1},
      {"identity law", criterion2},
      {"bilinearity", criterion3},
      {"path independence", criterion4},
      {"patching invariance", criterion5},
      {"flat susy algebra", criterion6},
      {"Grassmann engine", criterion7},
      {"extended-morphism certification", criterion8},
      {"reduction", criterion9},
      {"negative-control coverage", [&] { return criterion10(cli); }},
  };
  const auto t0 = Clock::now();
  int failures = 0;
  for (size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k + 1 << " (" << criteria[k].first
              << "): " << o.detail.str() << std::endl;
  }
  const double total = seconds_since(t0);
  std::cout << "total " << total << " s" << (total < 300.0 ? "" : " (over the 5 minute target)")
            << std::endl;
  return failures == 0 && total < 300.0 ? 0 : 1;
}
