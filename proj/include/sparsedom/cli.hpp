#pragma once

// Configuration parsing, command dispatch and byte-deterministic emission
// for the sparsedom front end.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sparsedom/endpoint.hpp"

namespace sparsedom {

/// Gallery reference such as power(0.5) or hilbert; params may be empty.
struct GallerySpec {
  std::string name;
  std::vector<double> params;
};

/// Parses name, name() or name(a, b, ...). Throws type_mismatch naming key.
GallerySpec parse_gallery_spec(const std::string& text, const std::string& key = "spec");
std::string format_gallery_spec(const GallerySpec& s);

struct RunConfig {
  std::string command;
  int n = 1;
  int m = 8;
  double L = 1.0;
  std::string t1 = "hilbert";
  std::string t2 = "bump(0.5)";
  std::string t3;                       // third chain operator, empty for none
  std::string b = "log(0.5)";
  std::string w = "constant(1)";
  bool u_maximal = false;               // Fefferman-Stein weight u = M w
  std::string f = "log-spike";
  std::string variant = "commutator";
  std::string experiment = "weak-type";
  std::string lambdas = "auto(20, 0.001, 10)";
  double eps = 0.5;
  double p = 2.0;
  double beta = 1.0;
  int samples = 100;
  double R = 2.0;
  std::string out = ".";
  std::uint64_t seed = 0;

  std::vector<std::string> warnings;  // not part of the canonical form
};

/// Line-oriented "key = value"; '#' starts a comment. Unknown keys, bad
/// values and a missing command raise errors naming the key; duplicates
/// keep the last value and record a warning. default_command fills in a
/// missing command key.
RunConfig parse_config(const std::string& text, const std::string& default_command = "");
/// Every key in a fixed order with normalized values.
std::string emit_config(const RunConfig& c);

/// Keys accepted by parse_config, in canonical order.
const std::vector<std::string>& config_keys();

struct RunResult {
  std::vector<std::string> files;
  std::vector<std::string> messages;
};

/// Executes the command and writes its files under c.out. Throws Error;
/// invariant_failure marks a mathematical check that did not hold.
RunResult run(const RunConfig& c);

/// Exit status for an error code: 2 for invariant_failure, 1 otherwise.
int exit_code_for(Errc code);

/// CSV: header "<column>,lhs,rhs,ratio", then one %.17g row per report row.
void write_csv(std::ostream& os, const ExperimentReport& r);
/// key=value lines, floats as hexadecimal.
void write_summary(std::ostream& os, const ExperimentReport& r, const RunConfig& c);
/// File stem "<command>_<tag>_seed<seed>_m<m>".
std::string output_stem(const RunConfig& c, const std::string& tag);
/// Writes <stem>.csv and <stem>.summary into c.out; returns their paths.
std::vector<std::string> emit(const ExperimentReport& r, const RunConfig& c, const std::string& tag);

struct SelfCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Every short definitional example of the library, each as a named check.
std::vector<SelfCheck> run_selftest();

}  // namespace sparsedom
