// crlab — command-line front end of the CR-immersion verification runner.
//
// Four subcommands: verify (grade one family member at one parameter),
// scan (sweep a parameter range and locate sign changes of the bitension
// statistic), predicates (exact closed-form parameter loci), identities
// (structural identity residuals at sampled points).  All heavy lifting sits
// behind the C API in libcrlab; this translation unit only maps flags to a
// configuration object and statuses to exit codes:
//   0  every check passed
//   1  at least one check failed
//   2  configuration/usage error (also: run not executable as configured)
//   3  unsupported capability combination
//   4  internal error

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "crlab/capi.h"

namespace {

struct FlagSet {
  std::string family;
  std::string format;
  std::string out;
  int n = 1;
  int steps = 120;
  int points = 8;
  int quad_nodes = 32;
  double param = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
  double tol_bitension = 0.0;
  double tol_condition = 0.0;
  double tol_defect = 0.0;
  std::uint64_t seed = 0;
  bool richardson = false;
  bool riemannian = false;
};

/// Options shared by every subcommand.  Nothing here carries a default —
/// the library owns the defaults; only flags the user actually set are
/// forwarded in the configuration object.
void add_common(CLI::App* cmd, FlagSet& f) {
  cmd->add_option("--family", f.family, "family: small-sphere | takagi-a1")
      ->check(CLI::IsMember({"small-sphere", "takagi-a1"}));
  cmd->add_option("--n", f.n, "CR dimension n (source dimension 2n+1)");
  cmd->add_option("--points", f.points, "sample points per parameter value");
  cmd->add_option("--seed", f.seed, "seed for all sampled randomness");
  cmd->add_option("--h1", f.h1, "coarse finite-difference step");
  cmd->add_option("--h2", f.h2, "fine finite-difference step (nested inner)");
  cmd->add_flag("--richardson", f.richardson,
                "Richardson-extrapolate first derivatives");
  cmd->add_option("--tol-bitension", f.tol_bitension,
                  "normalized bitension tolerance");
  cmd->add_option("--tol-condition", f.tol_condition,
                  "curvature-condition tolerance");
  cmd->add_option("--tol-defect", f.tol_defect,
                  "admissibility/parallelism defect tolerance");
  cmd->add_option("--quad-nodes", f.quad_nodes,
                  "latitude nodes of the energy quadrature rule");
  cmd->add_option("--out", f.out, "also write the report to this path");
  cmd->add_option("--format", f.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
}

void forward(const CLI::App* cmd, const char* flag, const char* key,
             const FlagSet& f, nlohmann::json& j) {
  if (cmd->count(flag) == 0) return;
  const std::string name = key;
  if (name == "family") j[name] = f.family;
  else if (name == "n") j[name] = f.n;
  else if (name == "param") j[name] = f.param;
  else if (name == "lo") j[name] = f.lo;
  else if (name == "hi") j[name] = f.hi;
  else if (name == "steps") j[name] = f.steps;
  else if (name == "points") j[name] = f.points;
  else if (name == "seed") j[name] = f.seed;
  else if (name == "h1") j[name] = f.h1;
  else if (name == "h2") j[name] = f.h2;
  else if (name == "richardson") j[name] = f.richardson;
  else if (name == "riemannian") j[name] = f.riemannian;
  else if (name == "tol_bitension") j[name] = f.tol_bitension;
  else if (name == "tol_condition") j[name] = f.tol_condition;
  else if (name == "tol_defect") j[name] = f.tol_defect;
  else if (name == "quad_nodes") j[name] = f.quad_nodes;
  else if (name == "format") j[name] = f.format;
  else if (name == "out") j[name] = f.out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical verification of pseudo harmonic and pseudo "
               "biharmonic CR immersions"};
  app.require_subcommand(1);
  FlagSet f;

  CLI::App* verify = app.add_subcommand(
      "verify", "grade one family member at one parameter value");
  add_common(verify, f);
  verify->add_option("--param", f.param, "family parameter (radius or angle)");
  verify->add_flag("--riemannian", f.riemannian,
                   "grade the Riemannian bitension pipeline instead");

  CLI::App* scan = app.add_subcommand(
      "scan",
      "sweep the family parameter and locate bitension sign changes");
  add_common(scan, f);
  scan->add_option("--min", f.lo, "parameter range start");
  scan->add_option("--max", f.hi, "parameter range end");
  scan->add_option("--steps", f.steps, "grid size");

  CLI::App* predicates = app.add_subcommand(
      "predicates", "exact closed-form parameter loci of a family");
  add_common(predicates, f);

  CLI::App* identities = app.add_subcommand(
      "identities", "structural identity residuals at sampled points");
  add_common(identities, f);
  identities->add_option("--param", f.param,
                         "family parameter (radius or angle)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* cmd = app.get_subcommands().front();
  nlohmann::json j;
  j["command"] = cmd->get_name();
  forward(cmd, "--family", "family", f, j);
  forward(cmd, "--n", "n", f, j);
  forward(cmd, "--points", "points", f, j);
  forward(cmd, "--seed", "seed", f, j);
  forward(cmd, "--h1", "h1", f, j);
  forward(cmd, "--h2", "h2", f, j);
  forward(cmd, "--richardson", "richardson", f, j);
  forward(cmd, "--tol-bitension", "tol_bitension", f, j);
  forward(cmd, "--tol-condition", "tol_condition", f, j);
  forward(cmd, "--tol-defect", "tol_defect", f, j);
  forward(cmd, "--quad-nodes", "quad_nodes", f, j);
  forward(cmd, "--out", "out", f, j);
  forward(cmd, "--format", "format", f, j);
  if (cmd == verify || cmd == identities) {
    forward(cmd, "--param", "param", f, j);
  }
  if (cmd == verify) {
    forward(cmd, "--riemannian", "riemannian", f, j);
  }
  if (cmd == scan) {
    forward(cmd, "--min", "lo", f, j);
    forward(cmd, "--max", "hi", f, j);
    forward(cmd, "--steps", "steps", f, j);
  }

  crlab_run* run = nullptr;
  const int status = crlab_run_json(j.dump().c_str(), &run);
  if (status == CRLAB_OK || status == CRLAB_E_CHECK) {
    const bool csv = j.contains("format") && j["format"] == "csv";
    std::fputs(csv ? crlab_run_report_csv(run) : crlab_run_report_json(run),
               stdout);
    std::fprintf(stderr, "%s\n", crlab_run_summary(run));
    crlab_run_free(run);
    return status;
  }
  std::fprintf(stderr, "error: %s\n", crlab_last_error());
  return status;
}
