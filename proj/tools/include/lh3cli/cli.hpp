#pragma once

// Command-line front end: chart selection, classification, verification
// suites and exports.  Commands return their report instead of printing so
// they can be driven from tests.

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lh3/catalog.hpp"

namespace lh3::cli {

using json = nlohmann::json;

enum ExitCode : int {
  kExitOk = 0,
  kExitAssertion = 2,
  kExitConfig = 64,
  kExitNumeric = 65,
  kExitIo = 66,
};

inline constexpr const char* kSchemaVersion = "1";

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string catalog;  // empty with expr set means custom-expression
  std::optional<UpperHalfPoint> center;
  std::map<std::string, double> params;
  std::string expr;
  std::string mu1_expr;
  std::string profile;
  std::optional<Domain> domain;
  int grid = kDefaultGridSize;
  std::optional<double> r;
  std::optional<double> tol;
  std::string out;     // empty: standard output
  std::string format;  // csv | json | obj; empty: command default
  std::string expect;  // optional assertion for classify

  // Throws ConfigError: resolution >= 5, tolerance > 0, a chart source.
  void validate() const;
  json to_json() const;
};

// "t,x" or "t,x,y".
UpperHalfPoint parse_center(const std::string& text);
// "key=value,key=value".
std::map<std::string, double> parse_params(const std::string& text);
// "x0,y0,x1,y1" (a rectangle).
Domain parse_domain(const std::string& text);

CatalogChart resolve_chart(const RunConfig& cfg);

struct Report {
  json body;            // {command, config, per_sample, summary}
  std::string verdict;  // one human-readable line
  int exit_code = kExitOk;
};

// Classification of every grid sample and a surface-level verdict.  With
// cfg.expect in {lagrangian, not-lagrangian, flat, lorentz, complex,
// degenerate} the exit code is kExitAssertion when the verdict disagrees.
Report cmd_classify(const RunConfig& cfg);

// which: sachs | det-identity | codazzi | main-theorem | cmc1 |
// sphere-equation.
Report cmd_verify(const RunConfig& cfg, const std::string& which);
std::vector<std::string> verify_suites();

// what: scalars | induced-metric | surface-mesh | r-field.  Returns the file
// contents (CSV, OBJ, or JSON for format json).
std::string cmd_export(const RunConfig& cfg, const std::string& what);
std::vector<std::string> export_kinds();

// Entry point used by main(); maps errors to exit codes.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace lh3::cli
