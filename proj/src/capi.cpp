#include "crlab/capi.h"

#include <exception>
#include <memory>
#include <string>

#include <json.hpp>

#include "crlab/errors.hpp"
#include "crlab/report.hpp"

/// Completed run: the report plus its cached renderings, so the C accessors
/// can hand out stable pointers.
struct crlab_run {
  crlab::report::Report report;
  std::string json;
  std::string csv;
};

namespace {

thread_local std::string g_last_error;

int status_of(crlab::ErrorKind kind) {
  switch (kind) {
    case crlab::ErrorKind::capability:
      return CRLAB_E_CAPABILITY;
    case crlab::ErrorKind::configuration:
    case crlab::ErrorKind::degenerate_frame:
    case crlab::ErrorKind::domain:
    case crlab::ErrorKind::consistency:
    case crlab::ErrorKind::precondition:
      return CRLAB_E_CONFIG;
  }
  return CRLAB_E_INTERNAL;
}

crlab::report::RunConfig parse_config(const char* config_json) {
  if (config_json == nullptr) {
    throw crlab::Error(crlab::ErrorKind::configuration,
                       "configuration JSON is null");
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(config_json);
  } catch (const nlohmann::json::exception& e) {
    throw crlab::Error(crlab::ErrorKind::configuration,
                       std::string("configuration is not valid JSON: ") +
                           e.what());
  }
  if (!j.is_object()) {
    throw crlab::Error(crlab::ErrorKind::configuration,
                       "configuration must be a JSON object");
  }
  crlab::report::RunConfig config;
  try {
    config.command =
        crlab::report::command_from_string(j.at("command").get<std::string>());
    if (j.contains("family")) {
      config.family =
          crlab::catalog::family_from_string(j["family"].get<std::string>());
    }
    if (j.contains("n")) config.n = j["n"].get<int>();
    if (j.contains("param")) config.param = j["param"].get<double>();
    if (j.contains("lo")) config.lo = j["lo"].get<double>();
    if (j.contains("hi")) config.hi = j["hi"].get<double>();
    if (j.contains("steps")) config.steps = j["steps"].get<int>();
    if (j.contains("points")) config.points = j["points"].get<int>();
    if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("h1")) config.fd.h1 = j["h1"].get<double>();
    if (j.contains("h2")) config.fd.h2 = j["h2"].get<double>();
    if (j.contains("richardson")) {
      config.fd.richardson = j["richardson"].get<bool>();
    }
    if (j.contains("riemannian")) {
      config.riemannian = j["riemannian"].get<bool>();
    }
    if (j.contains("tol_bitension")) {
      config.tols.bitension = j["tol_bitension"].get<double>();
    }
    if (j.contains("tol_condition")) {
      config.tols.condition = j["tol_condition"].get<double>();
    }
    if (j.contains("tol_defect")) {
      config.tols.defect = j["tol_defect"].get<double>();
    }
    if (j.contains("quad_nodes")) {
      config.quad_nodes = j["quad_nodes"].get<int>();
    }
    if (j.contains("format")) config.format = j["format"].get<std::string>();
    if (j.contains("out")) config.out_path = j["out"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw crlab::Error(crlab::ErrorKind::configuration,
                       std::string("malformed configuration field: ") +
                           e.what());
  }
  return config;
}

}  // namespace

extern "C" {

const char* crlab_version(void) { return "1.0.0"; }

int crlab_run_json(const char* config_json, crlab_run** out) {
  if (out == nullptr) {
    g_last_error = "output handle pointer is null";
    return CRLAB_E_CONFIG;
  }
  *out = nullptr;
  try {
    const crlab::report::RunConfig config = parse_config(config_json);
    auto run = std::make_unique<crlab_run>();
    run->report = crlab::report::run(config);
    run->json = crlab::report::to_json(run->report);
    run->csv = crlab::report::to_csv(run->report);
    const bool passed = run->report.all_passed();
    *out = run.release();
    g_last_error.clear();
    return passed ? CRLAB_OK : CRLAB_E_CHECK;
  } catch (const crlab::Error& e) {
    g_last_error = std::string(crlab::to_string(e.kind())) + ": " + e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CRLAB_E_INTERNAL;
  }
}

int crlab_run_all_passed(const crlab_run* run) {
  return (run != nullptr && run->report.all_passed()) ? 1 : 0;
}

const char* crlab_run_summary(const crlab_run* run) {
  return run != nullptr ? run->report.summary.c_str() : "";
}

const char* crlab_run_report_json(const crlab_run* run) {
  return run != nullptr ? run->json.c_str() : "";
}

const char* crlab_run_report_csv(const crlab_run* run) {
  return run != nullptr ? run->csv.c_str() : "";
}

void crlab_run_free(crlab_run* run) { delete run; }

const char* crlab_last_error(void) { return g_last_error.c_str(); }

}  // extern "C"
