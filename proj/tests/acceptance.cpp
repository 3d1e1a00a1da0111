// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Usage: acceptance <path-to-sparsedom-cli> <scratch-dir> [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sparsedom/cli.hpp"
#include "sparsedom/domination.hpp"
#include "sparsedom/functions.hpp"
#include "sparsedom/orlicz.hpp"

using namespace sparsedom;
namespace fs = std::filesystem;

namespace {

// Tolerances fixed by the acceptance criteria.
constexpr double kResidualTol = 1e-10;
constexpr double kTupleSeconds = 60.0;
constexpr double kDominationDrift = 0.15;
constexpr double kEndpointDrift = 0.20;
constexpr double kLuxemburgTol = 1e-8;
constexpr double kAverageTol = 1e-12;
constexpr double kMeanZeroTol = 1e-12;
constexpr double kLadderDrift = 0.15;
constexpr double kBruteTol = 1e-10;
constexpr double kContinuumGap = 0.05;
// The covering constant of the CZ decomposition has no pinned tolerance; it
// gets the same 15% as the other stability checks.
constexpr double kCoveringDrift = 0.15;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail.clear();
    pass = false;
    detail += (detail.empty() ? "" : "; ") + why;
  }
  void note(const std::string& s) {
    if (pass) detail += (detail.empty() ? "" : "; ") + s;
  }
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

double drift(double a, double b) { return std::abs(b - a) / std::abs(a); }

CZOperator make_op(const std::string& spec, const GridSpec& g) {
  const GallerySpec s = parse_gallery_spec(spec);
  return CZOperator(make_kernel(s.name, g, s.params), g);
}

Symbol make_symbol(const std::string& spec, const GridSpec& g) {
  const GallerySpec s = parse_gallery_spec(spec);
  return symbol_gallery(s.name, s.params, g);
}

Weight make_weight(const std::string& spec, const GridSpec& g) {
  const GallerySpec s = parse_gallery_spec(spec);
  return weight_gallery(s.name, s.params, g);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Tuple {
  std::string f, t1, t2, b;
  std::string label() const { return f + "/" + t1 + "/" + t2 + "/" + b; }
};

const std::vector<Tuple>& reconstruction_tuples() {
  static const std::vector<Tuple> t{
      {"indicator", "hilbert", "bump(0.5)", "log(0.3)"},
      {"tent", "hilbert", "bump(0.5)", "log(0.3)"},
      {"log-spike", "hilbert", "bump(0.5)", "log(0.3)"},
      {"random-signs", "hilbert", "bump(0.5)", "log(0.3)"},
      {"indicator", "periodic-hilbert", "bump(0.5)", "sawtooth(4)"},
      {"tent", "periodic-hilbert", "hilbert", "sawtooth(4)"},
      {"log-spike", "periodic-hilbert", "bump(0.25)", "log(0.3)"},
      {"random-signs", "periodic-hilbert", "hilbert", "sawtooth(4)"},
      {"log-spike", "hilbert", "hilbert", "sawtooth(4)"},
      {"tent", "bump(0.5)", "hilbert", "log(0.3)"},
  };
  return t;
}

// ---- 1 and 2 -----------------------------------------------------------------------

Outcome criterion_1(std::vector<SparseFamily>& families) {
  Outcome o;
  const GridSpec g = GridSpec::make(1, 8, 1.0);
  double worst = 0.0, slowest = 0.0;
  for (const auto& t : reconstruction_tuples()) {
    const CZOperator t1 = make_op(t.t1, g), t2 = make_op(t.t2, g);
    const Symbol b = make_symbol(t.b, g);
    const SampledFunction f = function_gallery(t.f, {}, g, 11);
    const auto t0 = std::chrono::steady_clock::now();
    const DominationResult res = dominate_commutator_composition(t1, b, t2, f);
    const double secs = seconds_since(t0);
    const double r = verify_reconstruction(res, commutator_apply(t1, b, t2.apply(f)));
    worst = std::max(worst, r);
    slowest = std::max(slowest, secs);
    if (!(r <= kResidualTol)) o.fail(t.label() + " residual " + num(r));
    if (secs > kTupleSeconds) o.fail(t.label() + " took " + num(secs) + " s");
    families.push_back(res.family);
    families.push_back(dominate_composition(t1, t2, f).family);
  }
  o.note("10 tuples, max residual " + num(worst) + ", slowest " + num(slowest) + " s");
  return o;
}

Outcome criterion_2(std::vector<SparseFamily> families) {
  Outcome o;
  const GridSpec g2 = GridSpec::make(2, 5, 1.0);
  const CZOperator r1 = make_op("riesz1", g2), r2 = make_op("riesz2", g2), bump = make_op("bump(0.5)", g2);
  const Symbol b = make_symbol("log(0.3)", g2);
  for (const char* name : {"indicator", "tent", "log-spike"}) {
    const SampledFunction f = function_gallery(name, {}, g2);
    families.push_back(dominate_composition(r1, r2, f).family);
    families.push_back(dominate_commutator_composition(r1, b, bump, f).family);
  }
  std::size_t checked[3] = {0, 0, 0}, cubes = 0;
  for (const auto& s : families) {
    const double want = s.grid.dim == 1 ? 1.0 / 18.0 : 1.0 / 162.0;
    const SparseReport r = verify_sparse(s);
    if (s.eta != want) o.fail("family eta " + num(s.eta) + " in dimension " + std::to_string(s.grid.dim));
    if (!r.ok || r.overlap_violations != 0 || r.containment_violations != 0)
      o.fail("family of " + std::to_string(s.size()) + " cubes fails (worst " + num(r.worst_ratio) + ", overlaps " +
             std::to_string(r.overlap_violations) + ")");
    ++checked[s.grid.dim];
    cubes += s.size();
  }
  o.note(std::to_string(checked[1]) + " families at 1/18 and " + std::to_string(checked[2]) + " at 1/162, " +
         std::to_string(cubes) + " cubes, zero overlaps");
  return o;
}

// ---- 3 -------------------------------------------------------------------------------

double domination_constant(const Tuple& t, int m, int samples) {
  const GridSpec g = GridSpec::make(1, m, 1.0);
  const CZOperator t1 = make_op(t.t1, g), t2 = make_op(t.t2, g);
  const Symbol b = make_symbol(t.b, g);
  const SampledFunction f = function_gallery(t.f, {}, g);
  const DominationResult res = dominate_commutator_composition(t1, b, t2, f);
  const SampledFunction target = commutator_apply(t1, b, t2.apply(f));
  double c = 0.0;
  for (int k = 0; k < samples; ++k) {
    const SampledFunction gk = random_test_function(g, 4, 1000 + k, &target);
    c = std::max(c, domination_ratio(res, f, gk));
  }
  return c;
}

Outcome criterion_3() {
  Outcome o;
  double worst = 0.0, cmax = 0.0;
  int n = 0;
  for (const char* f : {"indicator", "tent", "log-spike"})
    for (const char* t1 : {"hilbert", "periodic-hilbert"})
      for (const char* b : {"log(0.3)", "sawtooth(4)"}) {
        const Tuple t{f, t1, "bump(0.5)", b};
        const double c8 = domination_constant(t, 8, 100), c9 = domination_constant(t, 9, 100);
        const double d = drift(c8, c9);
        worst = std::max(worst, d);
        cmax = std::max(cmax, std::max(c8, c9));
        ++n;
        if (!std::isfinite(c8) || !(d <= kDominationDrift))
          o.fail(t.label() + " C8 " + num(c8) + " C9 " + num(c9) + " drift " + num(d));
      }
  o.note(std::to_string(n) + " tuples x 100 g, max C " + num(cmax) + ", max drift " + num(worst));
  return o;
}

// ---- 4 -------------------------------------------------------------------------------

double endpoint_constant(WeakVariant v, const std::string& t1s, const std::string& f, const std::string& w, int m) {
  const GridSpec g = GridSpec::make(1, m, 1.0);
  const CZOperator t1 = make_op(t1s, g), t2 = make_op("bump(0.5)", g);
  const Symbol b = make_symbol("log(0.25)", g);
  const SampledFunction fn = function_gallery(f, {}, g);
  const Weight wt = make_weight(w, g);
  const auto lam = lambda_grid(apply_weak_variant(v, t1, t2, &b, fn).sup_norm(), 20);
  const ExperimentReport r = weak_type_experiment(v, t1, t2, &b, fn, wt, lam, w);
  check_distribution_monotone(r);
  return r.max_ratio;
}

Outcome criterion_4() {
  Outcome o;
  double worst = 0.0;
  int n = 0;
  const std::pair<WeakVariant, const char*> runs[] = {{WeakVariant::composition, "hilbert"},
                                                      {WeakVariant::commutator, "hilbert"},
                                                      {WeakVariant::composition_t1_cancel, "periodic-hilbert"}};
  for (const auto& [v, t1] : runs)
    for (const char* f : {"indicator", "log-spike", "tent"})
      for (const char* w : {"constant(1)", "power(0.3)", "power(0.6)"}) {
        const double a = endpoint_constant(v, t1, f, w, 10), b = endpoint_constant(v, t1, f, w, 11);
        const double d = drift(a, b);
        worst = std::max(worst, d);
        ++n;
        if (!std::isfinite(a) || !std::isfinite(b) || !(a > 0.0) || !(d <= kEndpointDrift))
          o.fail(std::string(weak_variant_name(v)) + "/" + f + "/" + w + " " + num(a) + " -> " + num(b));
      }
  o.note(std::to_string(n) + " runs with 20 lambdas, max drift m10->11 " + num(worst));
  return o;
}

// ---- 5 -------------------------------------------------------------------------------

Outcome criterion_5() {
  Outcome o;
  const double R = 2.0;
  int overlap[2] = {0, 0};
  std::size_t free_cubes = 0;
  for (int pass = 0; pass < 2; ++pass) {
    const GridSpec g = GridSpec::make(1, 10 + 2 * pass, 1.0);
    for (int s = 0; s < 100; ++s) {
      const CellMask omega = random_open_set(g, 5000 + s);
      const WhitneyResult w = whitney_decompose(omega, R);
      const auto dist = distance_to_complement(omega);
      std::vector<int> hit(g.cell_count(), 0);
      for (std::size_t q = 0; q < w.cubes.size(); ++q) {
        double d = INFINITY;
        w.cubes[q].cells().for_each([&](std::size_t i) {
          ++hit[i];
          d = std::min(d, dist[i]);
        });
        if (w.clamped[q]) continue;
        ++free_cubes;
        const double ratio = d / w.cubes[q].diameter();
        if (ratio < 5.0 * R || ratio > 15.0 * R) o.fail("set " + std::to_string(s) + " ratio " + num(ratio));
      }
      for (std::size_t i = 0; i < g.cell_count(); ++i)
        if (hit[i] != (omega[i] ? 1 : 0)) {
          o.fail("set " + std::to_string(s) + " is not partitioned");
          break;
        }
      overlap[pass] = std::max(overlap[pass], w.overlap);
    }
  }
  if (overlap[0] != overlap[1])
    o.fail("overlap " + std::to_string(overlap[0]) + " at m=10 vs " + std::to_string(overlap[1]) + " at m=12");
  o.note("100 sets, " + std::to_string(free_cubes) + " unclamped cubes checked, overlap " + std::to_string(overlap[0]) +
         " at m=10 and " + std::to_string(overlap[1]) + " at m=12");
  return o;
}

// ---- 6 -------------------------------------------------------------------------------

Outcome criterion_6() {
  Outcome o;
  std::mt19937_64 rng(606);
  std::normal_distribution<double> N(0.0, 1.0);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0, worst0 = 0.0;
  for (int t = 0; t < 500; ++t) {
    const int dim = 1 + static_cast<int>(rng() % 2);
    const GridSpec g = GridSpec::make(dim, dim == 1 ? 7 : 4, 1.0);
    SampledFunction f(g);
    const int shape = static_cast<int>(rng() % 3);
    for (auto& v : f.values) {
      const double z = N(rng);
      v = shape == 0 ? z : shape == 1 ? std::exp(3.0 * z) : (U(rng) < 0.1 ? 100.0 * U(rng) : 0.0);
    }
    const int level = static_cast<int>(rng() % (g.finest_level + 1));
    const std::int64_t side = std::int64_t{1} << level;
    const DyadicCube q{g, level, {static_cast<std::int64_t>(rng() % side),
                                  dim == 2 ? static_cast<std::int64_t>(rng() % side) : 0}};
    const double beta = 3.0 * U(rng);
    std::vector<double> vals;
    q.cells().for_each([&](std::size_t i) { vals.push_back(f[i]); });
    const double ref = oracle::luxemburg_scan(vals, beta), got = luxemburg_norm(f, q, beta);
    const double rel = ref == 0.0 ? std::abs(got) : std::abs(got - ref) / ref;
    worst = std::max(worst, rel);
    if (!(rel <= kLuxemburgTol)) o.fail("triple " + std::to_string(t) + " rel " + num(rel));
    long double avg = 0.0L;
    for (double v : vals) avg += std::abs(v);
    avg /= vals.size();
    const double r0 = avg == 0.0L ? luxemburg_norm(f, q, 0.0)
                                  : std::abs(luxemburg_norm(f, q, 0.0) - static_cast<double>(avg)) / avg;
    worst0 = std::max(worst0, r0);
    if (!(r0 <= kAverageTol)) o.fail("beta=0 triple " + std::to_string(t) + " rel " + num(r0));
  }
  o.note("500 triples, max rel " + num(worst) + ", beta=0 max rel " + num(worst0));
  return o;
}

// ---- 7 -------------------------------------------------------------------------------

Outcome criterion_7() {
  Outcome o;
  double worst_mean = 0.0, worst_decay = 0.0;
  double cover[2] = {0.0, 0.0};  // measured C = max over (f, level) of sum |Q_l| level / ||f||_1
  std::size_t parts = 0;
  for (int pass = 0; pass < 2; ++pass) {
    const GridSpec g = GridSpec::make(1, 8 + pass, 1.0);
    const CZOperator t = make_op("hilbert", g);
    for (const char* name : {"log-spike", "tent", "indicator", "random-signs"})
      for (double mult : {2.0, 3.0, 4.0, 6.0, 8.0}) {
        const SampledFunction f = function_gallery(name, {}, g, 3);
        const double l1 = f.l1_norm(), level = mult * l1 / g.box_measure();
        const CZDecomposition d = cz_decompose(f, level, 2.0);
        SampledFunction sum = d.good;
        double covered = 0.0;
        for (const auto& p : d.bad) {
          long double mean = 0.0L, mass = 0.0L;
          p.cube.cells().for_each([&](std::size_t i) {
            mean += p.h[i];
            mass += std::abs(f[i]);
          });
          const double rel = mass == 0.0L ? 0.0 : static_cast<double>(std::abs(mean) / mass);
          worst_mean = std::max(worst_mean, rel);
          if (!(rel <= kMeanZeroTol)) o.fail(std::string(name) + " bad part mean " + num(rel));
          const double decay = mean_zero_decay_ratio(t, p);
          worst_decay = std::max(worst_decay, decay);
          if (!std::isfinite(decay)) o.fail(std::string(name) + " decay ratio not finite");
          for (std::size_t i = 0; i < f.size(); ++i) sum[i] += p.h[i];
          covered += p.cube.measure();
          ++parts;
        }
        for (std::size_t i = 0; i < f.size(); ++i)
          if (sum[i] != f[i]) {
            o.fail(std::string(name) + " reconstruction differs at cell " + std::to_string(i));
            break;
          }
        cover[pass] = std::max(cover[pass], covered * level / l1);
      }
  }
  const double dr = drift(cover[0], cover[1]);
  if (!(dr <= kCoveringDrift)) o.fail("covering constant " + num(cover[0]) + " -> " + num(cover[1]));
  o.note(std::to_string(parts) + " bad parts, max mean " + num(worst_mean) + ", covering C " + num(cover[0]) + " -> " +
         num(cover[1]) + ", max decay ratio " + num(worst_decay));
  return o;
}

// ---- 8 -------------------------------------------------------------------------------

Outcome criterion_8() {
  Outcome o;
  double worst = 0.0;
  for (LadderKind k : {LadderKind::grand_maximal, LadderKind::composite, LadderKind::composite_commutator})
    for (const char* t1s : {"hilbert", "periodic-hilbert"}) {
      double c[2];
      for (int pass = 0; pass < 2; ++pass) {
        const GridSpec g = GridSpec::make(1, 8 + pass, 1.0);
        const CZOperator t1 = make_op(t1s, g), t2 = make_op("bump(0.5)", g);
        const Symbol b = make_symbol("log(0.25)", g);
        std::vector<SampledFunction> fs;
        for (const char* f : {"indicator", "tent", "log-spike"}) fs.push_back(function_gallery(f, {}, g));
        c[pass] = ladder_experiment(k, t1, t2, &b, fs).max_ratio;
      }
      const double d = drift(c[0], c[1]);
      worst = std::max(worst, d);
      if (!std::isfinite(c[0]) || !(d <= kLadderDrift))
        o.fail(std::string(ladder_kind_name(k)) + "/" + t1s + " " + num(c[0]) + " -> " + num(c[1]));
    }
  o.note("3 ladders x 2 operators, max drift m8->9 " + num(worst));
  return o;
}

// ---- 9 -------------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome criterion_9(const std::string& cli, const fs::path& scratch) {
  Outcome o;
  const std::vector<std::pair<std::string, std::string>> configs{
      {"constants", "m = 8\nw = power(0.5)\nb = log(0.3)\n"},
      {"dominate", "m = 8\nsamples = 20\n"},
      {"endpoint", "m = 8\nexperiment = weak-type\nw = power(0.3)\n"},
      {"endpoint", "m = 7\nexperiment = fefferman-stein\nu_maximal = true\nw = power(0.3)\n"},
      {"endpoint", "m = 7\nexperiment = chain\nt3 = bump(0.3)\nf = tent\n"},
      {"endpoint", "m = 7\nexperiment = distribution\nvariant = power-maximal-truncated\n"},
      {"endpoint", "m = 7\nexperiment = lp\nvariant = T1T2-plain\nsamples = 5\n"},
      {"sparse-bounds", "m = 7\nvariant = orlicz-maximal\nsamples = 10\n"},
      {"whitney", "m = 10\nsamples = 20\n"},
      {"selftest", ""},
  };
  std::size_t files = 0;
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const auto& [cmd, text] = configs[k];
    const fs::path cfg = scratch / ("config" + std::to_string(k) + ".txt");
    std::ofstream(cfg) << text;
    fs::path outs[2];
    for (int run = 0; run < 2; ++run) {
      outs[run] = scratch / ("run" + std::to_string(k) + "_" + std::to_string(run));
      fs::remove_all(outs[run]);
      const std::string line = "\"" + cli + "\" " + cmd + " --config \"" + cfg.string() + "\" --out \"" +
                               outs[run].string() + "\" --seed 42 > /dev/null 2>&1";
      const int rc = std::system(line.c_str());
      if (rc != 0) o.fail(cmd + " run exited with status " + std::to_string(rc));
    }
    std::vector<fs::path> names;
    for (const auto& e : fs::directory_iterator(outs[0])) names.push_back(e.path().filename());
    if (names.empty()) o.fail(cmd + " wrote nothing");
    for (const auto& n : names) {
      ++files;
      if (!fs::exists(outs[1] / n) || slurp(outs[0] / n) != slurp(outs[1] / n))
        o.fail(cmd + " output " + n.string() + " differs between runs");
    }
  }
  o.note(std::to_string(configs.size()) + " configs, " + std::to_string(files) + " files byte-identical");
  return o;
}

// ---- 10 ------------------------------------------------------------------------------

std::pair<int, int> dilated(int lo, int hi, int lam, int n) {
  const int grow = (lam - 1) / 2 * (hi - lo);
  return {std::max(0, lo - grow), std::min(n, hi + grow)};
}

Outcome criterion_10() {
  Outcome o;
  const GridSpec g = GridSpec::make(1, 6, 1.0);
  const int N = 64;
  const CZOperator t1 = make_op("hilbert", g), t2 = make_op("bump(0.5)", g);
  const Symbol b = make_symbol("log(0.3)", g);
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  SampledFunction f(g);
  for (auto& v : f.values) v = U(rng);
  double worst = 0.0;
  int q0s = 0;
  for (int level = 0; level <= 6; ++level)
    for (int index : {0, (1 << level) / 2, (1 << level) - 1}) {
      const DyadicCube q0{g, level, {index, 0}};
      const auto lm = local_grand_maximals(q0, f, t1, t2, &b);
      const int s0 = N >> level, lo0 = index * s0, hi0 = lo0 + s0;
      const auto r3q0 = dilated(lo0, hi0, 3, N), r9q0 = dilated(lo0, hi0, 9, N);
      auto in = [](int i, std::pair<int, int> r) { return i >= r.first && i < r.second; };
      std::vector<double> m2(N, 0.0), m12(N, 0.0), m12b(N, 0.0);
      for (int k = level; k <= 6; ++k) {
        const int side = N >> k;
        for (int lo = lo0; lo < hi0; lo += side) {
          const int hi = lo + side;
          const auto r3 = dilated(lo, hi, 3, N), r9 = dilated(lo, hi, 9, N);
          std::vector<double> inner(N, 0.0), innerb(N, 0.0);
          for (int y = 0; y < N; ++y)
            for (int z = 0; z < N; ++z)
              if (in(z, r9q0) && !in(z, r9)) {
                inner[y] += t2.coef(y, z) * f[z];
                innerb[y] += (b.b[y] - b.b[z]) * t2.coef(y, z) * f[z];
              }
          double v2 = 0.0, v12 = 0.0, v12b = 0.0;
          for (int xi = lo; xi < hi; ++xi) {
            double a = 0.0, c = 0.0, d = 0.0;
            for (int z = 0; z < N; ++z)
              if (in(z, r3q0) && !in(z, r3)) a += t2.coef(xi, z) * f[z];
            for (int y = 0; y < N; ++y)
              if (!in(y, r3)) {
                c += t1.coef(xi, y) * inner[y];
                d += t1.coef(xi, y) * innerb[y];
              }
            v2 = std::max(v2, std::abs(a));
            v12 = std::max(v12, std::abs(c));
            v12b = std::max(v12b, std::abs(d));
          }
          for (int x = lo; x < hi; ++x) {
            m2[x] = std::max(m2[x], v2);
            m12[x] = std::max(m12[x], v12);
            m12b[x] = std::max(m12b[x], v12b);
          }
        }
      }
      const double scale = 1.0 + *std::max_element(m12b.begin(), m12b.end());
      for (int x = 0; x < N; ++x) {
        const double e = std::max({std::abs(lm.m_t2[x] - m2[x]), std::abs(lm.m_t1t2[x] - m12[x]),
                                   std::abs(lm.m_t1t2b[x] - m12b[x])}) /
                         scale;
        worst = std::max(worst, e);
      }
      ++q0s;
    }
  if (!(worst <= kBruteTol)) o.fail("local maximals off by " + num(worst));

  // A_p against every shifted dyadic interval found from the real-line geometry.
  double worst_ap = 0.0;
  const auto cubes = oracle::all_cubes_1d(g);
  for (const char* w : {"power(0.5)", "power(0.3)", "double-power(0.4, 0.7)", "step(0.5, 4)"}) {
    const Weight wt = make_weight(w, g);
    for (double p : {1.5, 2.0, 3.0}) {
      double best = 0.0;
      for (auto [lo, hi] : cubes) {
        long double a = 0.0L, s = 0.0L;
        for (int i = lo; i < hi; ++i) {
          a += wt[i];
          s += std::pow(static_cast<long double>(wt[i]), -1.0L / (p - 1.0));
        }
        const long double n = hi - lo;
        best = std::max(best, static_cast<double>(a / n * std::pow(s / n, static_cast<long double>(p - 1.0))));
      }
      const double rel = std::abs(ap_constant(wt, p) - best) / best;
      worst_ap = std::max(worst_ap, rel);
      if (!(rel <= kBruteTol)) o.fail(std::string(w) + " p=" + num(p) + " A_p rel " + num(rel));
    }
  }

  // Continuum gap: dyadic-shifted sup against the sup over every interval of cells.
  const Weight pw = make_weight("power(0.5)", g);
  std::vector<long double> pwv(N + 1, 0.0L), psv(N + 1, 0.0L);
  for (int i = 0; i < N; ++i) {
    pwv[i + 1] = pwv[i] + pw[i];
    psv[i + 1] = psv[i] + 1.0L / pw[i];
  }
  long double all = 0.0L;
  for (int a = 0; a < N; ++a)
    for (int c = a + 1; c <= N; ++c) {
      const long double n = c - a;
      all = std::max(all, (pwv[c] - pwv[a]) / n * ((psv[c] - psv[a]) / n));
    }
  const double dyadic = ap_constant(pw, 2.0);
  const double gap = 1.0 - dyadic / static_cast<double>(all);
  if (!(gap <= kContinuumGap) || dyadic > static_cast<double>(all) * (1 + 1e-12))
    o.fail("continuum gap " + num(gap));
  o.note(std::to_string(q0s) + " roots, maximal err " + num(worst) + ", A_p rel " + num(worst_ap) +
         ", continuum gap " + num(gap));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <sparsedom-cli> <scratch-dir>\n");
    return 1;
  }
  const std::string cli = argv[1];
  const fs::path scratch = argv[2];
  fs::create_directories(scratch);

  std::vector<SparseFamily> families;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"reconstruction", [&] { return criterion_1(families); }},
      {"sparsity", [&] { return criterion_2(families); }},
      {"bilinear domination", criterion_3},
      {"endpoint weak type", criterion_4},
      {"Whitney geometry", criterion_5},
      {"Luxemburg oracle", criterion_6},
      {"CZ decomposition", criterion_7},
      {"pointwise ladders", criterion_8},
      {"determinism", [&] { return criterion_9(cli, scratch); }},
      {"brute-force equivalence", criterion_10},
  };
  std::vector<bool> wanted(criteria.size(), argc <= 3);
  for (int a = 3; a < argc; ++a) {
    const int k = std::atoi(argv[a]);
    if (k >= 1 && k <= static_cast<int>(criteria.size())) wanted[k - 1] = true;
  }
  int failed = 0, ran = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (!wanted[k]) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.fail(std::string("threw ") + e.what());
    }
    failed += o.pass ? 0 : 1;
    std::printf("CRITERION %2zu %s  %-24s %s (%.1f s)\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].first.c_str(),
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
