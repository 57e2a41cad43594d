#pragma once

#include <string>

#include "gridcert/load_flow.hpp"
#include "gridcert/pipeline.hpp"

namespace gridcert {

std::string read_file(const std::string& path);

/// Strict parsers: unknown fields are rejected with a field diagnostic.
GridModel parse_grid_json(const std::string& text);
SecuritySpec parse_security_json(const std::string& text,
                                 const GridModel& model);

struct UncertaintyFile {
  bool is_template = false;
  UncertaintySet set;   // when !is_template
  KappaTemplate tmpl;   // when is_template
};

UncertaintyFile parse_uncertainty_json(const std::string& text);

/// Report emission (schema documented in docs/report-schema.md).
std::string verdict_report_json(const Verdict& verdict);
std::string calibration_report_json(const CalibrationResult& result);
std::string kappa_report_json(const KappaResult& result);

/// CSV trajectory dump: t, Re/Im of each PQ voltage per row.
std::string trace_csv(const ContinuationResult& trace);

}  // namespace gridcert
