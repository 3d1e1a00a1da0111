#include "sparsedom/cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "sparsedom/domination.hpp"
#include "sparsedom/functions.hpp"
#include "sparsedom/orlicz.hpp"

namespace sparsedom {

namespace {

constexpr std::size_t kMaxCells = std::size_t{1} << 20;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Shortest of %.15g / %.16g / %.17g that reads back to the same double.
std::string fmt_short(double x) {
  char buf[64];
  for (int prec : {15, 16, 17}) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

std::string hex(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* want) {
  throw Error(Errc::type_mismatch, key + ": expected " + want + ", got '" + value + "'");
}

double to_double(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(t.c_str(), &end);
  if (t.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(x)) bad_value(key, v, "a finite number");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  char* end = nullptr;
  errno = 0;
  const long long x = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || *end != '\0' || errno == ERANGE) bad_value(key, v, "an integer");
  return x;
}

std::uint64_t to_seed(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) bad_value(key, v, "a nonnegative integer");
  errno = 0;
  const unsigned long long x = std::strtoull(t.c_str(), nullptr, 10);
  if (errno == ERANGE) bad_value(key, v, "a 64-bit seed");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(key, v, "true or false");
}

// Rethrows library errors with the offending config key in front.
template <class F>
auto keyed(const std::string& key, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == Errc::invariant_failure) throw;
    throw Error(e.code(), key + ": " + e.what());
  }
}

const std::vector<std::string> kCommands{"constants", "dominate", "endpoint", "sparse-bounds", "whitney", "selftest"};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// ---- builders --------------------------------------------------------------------

struct Context {
  const RunConfig& c;
  GridSpec grid;

  explicit Context(const RunConfig& cfg) : c(cfg), grid(make_grid(cfg)) {}

  static GridSpec make_grid(const RunConfig& c) {
    if (c.n != 1 && c.n != 2) throw Error(Errc::invalid_argument, "n: dimension must be 1 or 2");
    if (c.m < 1 || c.m * c.n > 20)
      throw Error(Errc::invalid_argument, "m: need 1 <= m and 2^(m n) <= 2^20 cells");
    if (!(c.L > 0.0)) throw Error(Errc::invalid_argument, "L: side must be positive");
    return GridSpec::make(c.n, c.m, c.L);
  }

  CZOperator op(const std::string& key, const std::string& spec) const {
    return keyed(key, [&] {
      const GallerySpec s = parse_gallery_spec(spec, key);
      return CZOperator(make_kernel(s.name, grid, s.params), grid);
    });
  }

  std::optional<Symbol> symbol() const {
    if (c.b.empty()) return std::nullopt;
    return keyed("b", [&] {
      const GallerySpec s = parse_gallery_spec(c.b, "b");
      return symbol_gallery(s.name, s.params, grid);
    });
  }

  Weight weight() const {
    return keyed("w", [&] {
      const GallerySpec s = parse_gallery_spec(c.w, "w");
      return weight_gallery(s.name, s.params, grid);
    });
  }

  SampledFunction function() const {
    return keyed("f", [&] {
      const GallerySpec s = parse_gallery_spec(c.f, "f");
      return function_gallery(s.name, s.params, grid, c.seed);
    });
  }

  std::vector<double> lambdas(double scale) const {
    return keyed("lambdas", [&] {
      const GallerySpec s = parse_gallery_spec(c.lambdas, "lambdas");
      if (s.name == "list") {
        for (double l : s.params)
          if (!(l > 0.0)) throw Error(Errc::invalid_argument, "list entries must be positive");
        return s.params;
      }
      if (s.name != "auto") throw Error(Errc::unknown_name, "expected auto(...) or list(...)");
      if (s.params.size() > 3) throw Error(Errc::invalid_argument, "auto takes at most three parameters");
      const double count = s.params.size() > 0 ? s.params[0] : 20.0;
      if (count < 0.0 || count != std::floor(count)) throw Error(Errc::invalid_argument, "count must be a whole number");
      return lambda_grid(scale, static_cast<std::size_t>(count), s.params.size() > 1 ? s.params[1] : 1e-3,
                         s.params.size() > 2 ? s.params[2] : 10.0);
    });
  }

  /// Random test functions constant on dyadic cubes of level min(4, m).
  std::vector<SampledFunction> random_functions(int count, std::uint64_t stream,
                                                const SampledFunction* sign_of = nullptr) const {
    std::vector<SampledFunction> out;
    for (int s = 0; s < count; ++s)
      out.push_back(random_test_function(grid, std::min(4, c.m), derive_seed(c.seed, stream * 1000003ULL + s), sign_of));
    return out;
  }
};

void require_symbol(const std::optional<Symbol>& b, const char* why) {
  if (!b) throw Error(Errc::missing_required, std::string("b: ") + why + " needs a symbol");
}

// ---- commands ----------------------------------------------------------------------

RunResult run_constants(const Context& ctx) {
  const Weight w = ctx.weight();
  if (!(ctx.c.p > 1.0)) throw Error(Errc::invalid_argument, "p: must exceed 1");
  ExperimentReport r;
  r.id = "constants";
  r.weight = ctx.c.w;
  r.m = ctx.c.m;
  r.constants = w.constants(ctx.c.p);
  if (const auto b = ctx.symbol()) r.extras.push_back({"bmo", bmo_norm(b->b)});
  const std::string stem = output_stem(ctx.c, "weights");
  const std::string path = (std::filesystem::path(ctx.c.out) / (stem + ".summary")).string();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::io_error, "cannot write " + path);
  write_summary(os, r, ctx.c);
  return {{path}, {}};
}

RunResult run_dominate(const Context& ctx) {
  const RunConfig& c = ctx.c;
  const CZOperator t1 = ctx.op("t1", c.t1), t2 = ctx.op("t2", c.t2);
  const SampledFunction f = ctx.function();
  const auto b = ctx.symbol();
  DominationVariant v;
  if (c.variant == "composition")
    v = DominationVariant::composition;
  else if (c.variant == "commutator")
    v = DominationVariant::commutator;
  else
    throw Error(Errc::unknown_name, "variant: dominate takes composition or commutator");
  if (v == DominationVariant::commutator) require_symbol(b, "the commutator variant");

  const DominationResult res = keyed("f", [&] {
    return v == DominationVariant::commutator ? dominate_commutator_composition(t1, *b, t2, f)
                                              : dominate_composition(t1, t2, f);
  });
  const SampledFunction target = apply_weak_variant(
      v == DominationVariant::commutator ? WeakVariant::commutator : WeakVariant::composition, t1, t2,
      b ? &*b : nullptr, f);
  const double residual = verify_reconstruction(res, target);
  const SparseReport sr = verify_sparse(res.family);

  ExperimentReport r;
  r.id = std::string("dominate/") + c.variant;
  r.column = "sample";
  r.m = c.m;
  for (const auto& g : ctx.random_functions(c.samples, 1, &target)) {
    const auto [lhs, rhs] = domination_sides(res, f, g);
    r.add_row(static_cast<double>(r.rows.size()), lhs, rhs);
  }
  r.finalize();
  double dmax = 0.0;
  for (double d : res.thresholds) dmax = std::max(dmax, d);
  r.extras = {{"reconstruction_residual", residual},
              {"family_size", static_cast<double>(res.family.size())},
              {"eta", res.family.eta},
              {"worst_sparse_ratio", sr.worst_ratio},
              {"overlap_violations", static_cast<double>(sr.overlap_violations)},
              {"clamp_count", static_cast<double>(res.clamp_count)},
              {"max_threshold", dmax},
              {"generations", static_cast<double>(res.stage.empty() ? 0 : *std::max_element(res.stage.begin(), res.stage.end()))}};
  RunResult out;
  out.files = emit(r, c, c.variant);
  const std::string path = (std::filesystem::path(c.out) / (output_stem(c, c.variant) + ".dom")).string();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::io_error, "cannot write " + path);
  write_result(os, res);
  out.files.push_back(path);
  if (!(residual <= 1e-10)) throw Error(Errc::invariant_failure, "reconstruction residual " + fmt17(residual));
  if (!sr.ok) throw Error(Errc::invariant_failure, "family fails verify_sparse");
  return out;
}

RunResult run_endpoint(const Context& ctx) {
  const RunConfig& c = ctx.c;
  const CZOperator t1 = ctx.op("t1", c.t1), t2 = ctx.op("t2", c.t2);
  const SampledFunction f = ctx.function();
  const auto b = ctx.symbol();
  const Symbol* bp = b ? &*b : nullptr;
  ExperimentReport r;
  const std::string& e = c.experiment;
  if (e == "weak-type" || e == "fefferman-stein") {
    const WeakVariant v = keyed("variant", [&] { return parse_weak_variant(c.variant); });
    if (v == WeakVariant::commutator) require_symbol(b, "the commutator variant");
    const auto lam = ctx.lambdas(apply_weak_variant(v, t1, t2, bp, f).sup_norm());
    const Weight w = ctx.weight();
    if (e == "weak-type") {
      r = keyed("variant", [&] { return weak_type_experiment(v, t1, t2, bp, f, w, lam, c.w); });
    } else {
      const SampledFunction u = c.u_maximal ? maximal(w.values()) : w.values();
      r = keyed("eps", [&] {
        return fefferman_stein_experiment(v, c.eps, t1, t2, bp, f, u, lam, c.u_maximal ? "M " + c.w : c.w);
      });
    }
  } else if (e == "lp") {
    const LpVariant v = keyed("variant", [&] { return parse_lp_variant(c.variant); });
    if (v == LpVariant::commutator) require_symbol(b, "the commutator variant");
    std::vector<SampledFunction> fs{f};
    for (auto& g : ctx.random_functions(c.samples, 2)) fs.push_back(std::move(g));
    const Weight w = ctx.weight();
    r = keyed("variant", [&] { return lp_bound_experiment(v, c.p, t1, t2, bp, w, fs, c.w); });
  } else if (e == "chain") {
    std::optional<CZOperator> t3;
    std::vector<const CZOperator*> ops{&t1, &t2};
    if (!c.t3.empty()) ops.push_back(&t3.emplace(ctx.op("t3", c.t3)));
    SampledFunction u = f;
    for (std::size_t j = ops.size(); j-- > 0;) u = ops[j]->apply(u);
    const Weight w = ctx.weight();
    r = chain_experiment(ops, f, w, ctx.lambdas(u.sup_norm()), supported_in_central_ninth(f), c.w);
  } else if (e == "distribution") {
    const DistributionKind k = keyed("variant", [&] { return parse_distribution_kind(c.variant); });
    const SampledFunction v = keyed("b", [&] { return distribution_operand(k, t1, t2, bp, f); });
    r = distribution_experiment(k, t1, t2, bp, f, ctx.lambdas(v.sup_norm()));
  } else if (e == "ladder") {
    const LadderKind k = keyed("variant", [&] { return parse_ladder_kind(c.variant); });
    if (k == LadderKind::composite_commutator) require_symbol(b, "the commutator ladder");
    const std::vector<SampledFunction> fs{f};
    r = ladder_experiment(k, t1, t2, bp, fs);
  } else {
    throw Error(Errc::unknown_name, "experiment: unknown experiment '" + e + "'");
  }
  RunResult out;
  out.files = emit(r, c, e + "-" + c.variant);
  return out;
}

RunResult run_sparse_bounds(const Context& ctx) {
  const RunConfig& c = ctx.c;
  const CZOperator t1 = ctx.op("t1", c.t1), t2 = ctx.op("t2", c.t2);
  const SampledFunction f = ctx.function();
  const DominationResult res = keyed("f", [&] { return dominate_composition(t1, t2, f); });
  const auto gs = ctx.random_functions(c.samples, 3);
  const Weight w = ctx.weight();
  ExperimentReport r;
  if (c.variant == "orlicz-maximal") {
    const SampledFunction u = c.u_maximal ? maximal(w.values()) : w.values();
    r = keyed("p", [&] { return sparse_bound_experiment(res.family, c.beta, c.p, c.eps, u, gs, c.w); });
  } else if (c.variant == "ap") {
    r = keyed("p", [&] { return sparse_bound_ap_experiment(res.family, c.beta, c.p, w, gs, c.w); });
  } else {
    throw Error(Errc::unknown_name, "variant: sparse-bounds takes orlicz-maximal or ap");
  }
  r.extras.push_back({"family_size", static_cast<double>(res.family.size())});
  return {emit(r, c, c.variant), {}};
}

RunResult run_whitney(const Context& ctx) {
  const RunConfig& c = ctx.c;
  if (!(c.R > 1.0)) throw Error(Errc::invalid_argument, "R: must exceed 1");
  ExperimentReport r;
  r.id = "whitney";
  r.column = "set";
  r.m = c.m;
  int max_overlap = 0;
  double lo = INFINITY, hi = 0.0;
  std::size_t clamped = 0, cubes = 0, bad = 0;
  for (int s = 0; s < c.samples; ++s) {
    const CellMask omega = random_open_set(ctx.grid, derive_seed(c.seed, 4000000ULL + s));
    const WhitneyResult w = whitney_decompose(omega, c.R);
    const auto dist = distance_to_complement(omega);
    double covered = 0.0;
    for (std::size_t q = 0; q < w.cubes.size(); ++q) {
      covered += w.cubes[q].measure();
      if (w.clamped[q]) {
        ++clamped;
        continue;
      }
      double d = INFINITY;
      w.cubes[q].cells().for_each([&](std::size_t i) { d = std::min(d, dist[i]); });
      const double ratio = d / w.cubes[q].diameter();
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      if (ratio < 5.0 * c.R || ratio > 15.0 * c.R) ++bad;
    }
    cubes += w.cubes.size();
    max_overlap = std::max(max_overlap, w.overlap);
    r.add_row(static_cast<double>(s), covered, omega.measure());
  }
  r.finalize();
  r.extras = {{"R", c.R},
              {"max_overlap", static_cast<double>(max_overlap)},
              {"cubes", static_cast<double>(cubes)},
              {"clamped", static_cast<double>(clamped)},
              {"min_distance_ratio", lo},
              {"max_distance_ratio", hi},
              {"condition_violations", static_cast<double>(bad)}};
  RunResult out{emit(r, c, "random-sets"), {}};
  if (bad > 0) throw Error(Errc::invariant_failure, "Whitney distance condition violated");
  return out;
}

RunResult run_selftest_command(const RunConfig& c) {
  const auto checks = run_selftest();
  const std::string path =
      (std::filesystem::path(c.out) / (output_stem(c, "trivial") + ".summary")).string();
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::io_error, "cannot write " + path);
  std::size_t failed = 0;
  std::string names;
  RunResult out{{path}, {}};
  os << "command=selftest\nchecks=" << checks.size() << '\n';
  for (const auto& k : checks) {
    os << k.name << '=' << (k.pass ? "pass" : "FAIL") << '\n';
    if (!k.pass) {
      ++failed;
      names += " " + k.name + (k.detail.empty() ? "" : " (" + k.detail + ")");
      out.messages.push_back("FAIL " + k.name + (k.detail.empty() ? "" : ": " + k.detail));
    }
  }
  os << "failed=" << failed << '\n';
  os.close();
  if (failed) throw Error(Errc::invariant_failure, std::to_string(failed) + " self-test checks failed:" + names);
  out.messages.push_back(std::to_string(checks.size()) + " self-test checks passed");
  return out;
}

}  // namespace

// ---- gallery specs -------------------------------------------------------------------

GallerySpec parse_gallery_spec(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  GallerySpec s;
  const auto open = t.find('(');
  if (open == std::string::npos) {
    s.name = t;
  } else {
    if (t.back() != ')') bad_value(key, text, "name(params)");
    s.name = trim(t.substr(0, open));
    const std::string inner = trim(t.substr(open + 1, t.size() - open - 2));
    if (!inner.empty()) {
      std::stringstream ss(inner);
      for (std::string item; std::getline(ss, item, ',');) s.params.push_back(to_double(key, item));
    }
  }
  if (s.name.empty() || s.name.find_first_of(" \t(),=") != std::string::npos) bad_value(key, text, "a gallery name");
  return s;
}

std::string format_gallery_spec(const GallerySpec& s) {
  if (s.params.empty()) return s.name;
  std::string out = s.name + "(";
  for (std::size_t i = 0; i < s.params.size(); ++i) out += (i ? ", " : "") + fmt_short(s.params[i]);
  return out + ")";
}

// ---- configuration -------------------------------------------------------------------

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{"command", "n",   "m",       "L",          "t1",      "t2",
                                             "t3",      "b",   "w",       "u_maximal",  "f",       "variant",
                                             "experiment", "lambdas", "eps", "p",       "beta",    "samples",
                                             "R",       "out", "seed"};
  return keys;
}

RunConfig parse_config(const std::string& text, const std::string& default_command) {
  RunConfig c;
  std::map<std::string, int> seen;
  std::istringstream is(text);
  int lineno = 0;
  bool have_command = false;
  auto spec = [](const std::string& key, const std::string& v) {
    return v.empty() ? v : format_gallery_spec(parse_gallery_spec(v, key));
  };
  for (std::string line; std::getline(is, line);) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::type_mismatch, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw Error(Errc::unknown_key, key + ": unknown key on line " + std::to_string(lineno));
    if (seen.count(key))
      c.warnings.push_back("duplicate key '" + key + "' on line " + std::to_string(lineno) + " (line " +
                           std::to_string(seen[key]) + " overridden; last value wins)");
    seen[key] = lineno;
    if (key == "command") {
      c.command = v;
      have_command = true;
    } else if (key == "n") {
      c.n = static_cast<int>(to_int(key, v));
    } else if (key == "m") {
      c.m = static_cast<int>(to_int(key, v));
    } else if (key == "L") {
      c.L = to_double(key, v);
    } else if (key == "t1") {
      c.t1 = spec(key, v);
    } else if (key == "t2") {
      c.t2 = spec(key, v);
    } else if (key == "t3") {
      c.t3 = spec(key, v);
    } else if (key == "b") {
      c.b = spec(key, v);
    } else if (key == "w") {
      c.w = spec(key, v);
    } else if (key == "u_maximal") {
      c.u_maximal = to_bool(key, v);
    } else if (key == "f") {
      c.f = spec(key, v);
    } else if (key == "variant") {
      c.variant = v;
    } else if (key == "experiment") {
      c.experiment = v;
    } else if (key == "lambdas") {
      c.lambdas = spec(key, v);
    } else if (key == "eps") {
      c.eps = to_double(key, v);
    } else if (key == "p") {
      c.p = to_double(key, v);
    } else if (key == "beta") {
      c.beta = to_double(key, v);
    } else if (key == "samples") {
      const long long s = to_int(key, v);
      if (s < 0 || s > 100000) bad_value(key, v, "a count in [0, 100000]");
      c.samples = static_cast<int>(s);
    } else if (key == "R") {
      c.R = to_double(key, v);
    } else if (key == "out") {
      c.out = v.empty() ? "." : v;
    } else if (key == "seed") {
      c.seed = to_seed(key, v);
    }
  }
  if (!have_command && !default_command.empty()) {
    c.command = default_command;
    have_command = true;
  }
  if (!have_command || c.command.empty()) throw Error(Errc::missing_required, "command: required key is missing");
  if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end())
    throw Error(Errc::type_mismatch, "command: unknown command '" + c.command + "'");
  if (c.t2.empty() || c.t1.empty()) throw Error(Errc::missing_required, "t1/t2: operators must be given");
  return c;
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream os;
  os << "command = " << c.command << '\n'
     << "n = " << c.n << '\n'
     << "m = " << c.m << '\n'
     << "L = " << fmt_short(c.L) << '\n'
     << "t1 = " << c.t1 << '\n'
     << "t2 = " << c.t2 << '\n'
     << "t3 = " << c.t3 << '\n'
     << "b = " << c.b << '\n'
     << "w = " << c.w << '\n'
     << "u_maximal = " << (c.u_maximal ? "true" : "false") << '\n'
     << "f = " << c.f << '\n'
     << "variant = " << c.variant << '\n'
     << "experiment = " << c.experiment << '\n'
     << "lambdas = " << c.lambdas << '\n'
     << "eps = " << fmt_short(c.eps) << '\n'
     << "p = " << fmt_short(c.p) << '\n'
     << "beta = " << fmt_short(c.beta) << '\n'
     << "samples = " << c.samples << '\n'
     << "R = " << fmt_short(c.R) << '\n'
     << "out = " << c.out << '\n'
     << "seed = " << c.seed << '\n';
  return os.str();
}

// ---- emission ------------------------------------------------------------------------

void write_csv(std::ostream& os, const ExperimentReport& r) {
  os << r.column << ",lhs,rhs,ratio\n";
  for (const auto& row : r.rows)
    os << fmt17(row.param) << ',' << fmt17(row.lhs) << ',' << fmt17(row.rhs) << ',' << fmt17(row.ratio) << '\n';
}

void write_summary(std::ostream& os, const ExperimentReport& r, const RunConfig& c) {
  os << "command=" << c.command << '\n'
     << "id=" << r.id << '\n'
     << "weight=" << r.weight << '\n'
     << "n=" << c.n << '\n'
     << "m=" << r.m << '\n'
     << "seed=" << c.seed << '\n'
     << "column=" << r.column << '\n'
     << "rows=" << r.rows.size() << '\n'
     << "p=" << hex(r.constants.p) << '\n'
     << "ap=" << hex(r.constants.ap) << '\n'
     << "a1=" << hex(r.constants.a1) << '\n'
     << "ainfty=" << hex(r.constants.ainfty) << '\n'
     << "sigma_ainfty=" << hex(r.constants.sigma_ainfty) << '\n'
     << "prefactor=" << hex(r.prefactor) << '\n'
     << "max_ratio=" << hex(r.max_ratio) << '\n'
     << "median_ratio=" << hex(r.median_ratio) << '\n';
  for (const auto& [k, v] : r.extras) os << k << '=' << hex(v) << '\n';
}

std::string output_stem(const RunConfig& c, const std::string& tag) {
  return c.command + "_" + tag + "_seed" + std::to_string(c.seed) + "_m" + std::to_string(c.m);
}

std::vector<std::string> emit(const ExperimentReport& r, const RunConfig& c, const std::string& tag) {
  std::error_code ec;
  std::filesystem::create_directories(c.out, ec);
  const std::filesystem::path base = std::filesystem::path(c.out) / output_stem(c, tag);
  std::vector<std::string> out;
  for (const char* ext : {".csv", ".summary"}) {
    const std::string path = base.string() + ext;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(Errc::io_error, "cannot write " + path);
    if (ext[1] == 'c')
      write_csv(os, r);
    else
      write_summary(os, r, c);
    if (!os) throw Error(Errc::io_error, "write failed for " + path);
    out.push_back(path);
  }
  return out;
}

int exit_code_for(Errc code) { return code == Errc::invariant_failure ? 2 : 1; }

RunResult run(const RunConfig& c) {
  std::error_code ec;
  std::filesystem::create_directories(c.out, ec);
  if (!std::filesystem::is_directory(c.out)) throw Error(Errc::io_error, "out: cannot create directory " + c.out);
  RunResult r;
  if (c.command == "selftest") {
    r = run_selftest_command(c);
  } else {
    const Context ctx(c);
    if (c.command == "constants")
      r = run_constants(ctx);
    else if (c.command == "dominate")
      r = run_dominate(ctx);
    else if (c.command == "endpoint")
      r = run_endpoint(ctx);
    else if (c.command == "sparse-bounds")
      r = run_sparse_bounds(ctx);
    else if (c.command == "whitney")
      r = run_whitney(ctx);
    else
      throw Error(Errc::type_mismatch, "command: unknown command '" + c.command + "'");
  }
  r.messages.insert(r.messages.begin(), c.warnings.begin(), c.warnings.end());
  return r;
}

}  // namespace sparsedom
