#include "gridcert/json_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace gridcert {

namespace {

using nlohmann::json;

json parse_text(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InvalidInput(what + ": malformed JSON");
  return j;
}

void reject_unknown(const json& obj, const std::string& what,
                    std::initializer_list<const char*> allowed) {
  for (const auto& [key, val] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) throw InvalidInput(what + ": unknown field '" + key + "'");
  }
}

double require_number(const json& obj, const std::string& what,
                      const char* field) {
  if (!obj.contains(field) || !obj[field].is_number())
    throw InvalidInput(what + ": missing or non-numeric field '" + field +
                       "'");
  return obj[field].get<double>();
}

Complex parse_complex(const json& obj, const std::string& what) {
  if (!obj.is_object()) throw InvalidInput(what + ": expected {re, im}");
  reject_unknown(obj, what, {"re", "im"});
  return Complex{require_number(obj, what, "re"),
                 require_number(obj, what, "im")};
}

Vec parse_scalar_or_array(const json& v, Eigen::Index size,
                          const std::string& what) {
  if (v.is_number()) return Vec::Constant(size, v.get<double>());
  if (v.is_array()) {
    if (static_cast<Eigen::Index>(v.size()) != size)
      throw InvalidInput(what + ": expected " + std::to_string(size) +
                         " entries");
    Vec out(size);
    for (Eigen::Index i = 0; i < size; ++i) {
      if (!v[i].is_number())
        throw InvalidInput(what + ": non-numeric entry");
      out(i) = v[i].get<double>();
    }
    return out;
  }
  throw InvalidInput(what + ": expected a number or an array");
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GridModel parse_grid_json(const std::string& text) {
  const json j = parse_text(text, "grid");
  reject_unknown(j, "grid", {"n_pq", "slack_voltage", "branches"});
  if (!j.contains("n_pq") || !j["n_pq"].is_number_integer())
    throw InvalidInput("grid: missing integer field 'n_pq'");
  const int n_pq = j["n_pq"].get<int>();
  if (!j.contains("slack_voltage"))
    throw InvalidInput("grid: missing field 'slack_voltage'");
  const Complex v0 = parse_complex(j["slack_voltage"], "grid.slack_voltage");
  if (!j.contains("branches") || !j["branches"].is_array())
    throw InvalidInput("grid: missing array field 'branches'");

  std::vector<BranchSpec> branches;
  int idx = 0;
  for (const auto& bj : j["branches"]) {
    const std::string what = "grid.branches[" + std::to_string(idx++) + "]";
    if (!bj.is_object()) throw InvalidInput(what + ": expected an object");
    reject_unknown(bj, what, {"from", "to", "y_series", "b_shunt", "tap"});
    BranchSpec b;
    b.from = static_cast<int>(require_number(bj, what, "from"));
    b.to = static_cast<int>(require_number(bj, what, "to"));
    if (!bj.contains("y_series"))
      throw InvalidInput(what + ": missing field 'y_series'");
    b.y_series = parse_complex(bj["y_series"], what + ".y_series");
    if (bj.contains("b_shunt"))
      b.b_shunt_total = require_number(bj, what, "b_shunt");
    if (bj.contains("tap")) b.tap = require_number(bj, what, "tap");
    branches.push_back(b);
  }
  return GridModel::build(branches, n_pq, v0);
}

SecuritySpec parse_security_json(const std::string& text,
                                 const GridModel& model) {
  const json j = parse_text(text, "security");
  reject_unknown(j, "security", {"v_min", "v_max", "i_max"});
  for (const char* f : {"v_min", "v_max", "i_max"})
    if (!j.contains(f))
      throw InvalidInput(std::string("security: missing field '") + f + "'");
  SecuritySpec s;
  s.v_min = parse_scalar_or_array(j["v_min"], model.n_pq(), "security.v_min");
  s.v_max = parse_scalar_or_array(j["v_max"], model.n_pq(), "security.v_max");
  s.i_max = parse_scalar_or_array(
      j["i_max"], static_cast<Eigen::Index>(model.branch_rows().size()),
      "security.i_max");
  s.validate(model);
  return s;
}

UncertaintyFile parse_uncertainty_json(const std::string& text) {
  const json j = parse_text(text, "uncertainty");
  reject_unknown(j, "uncertainty", {"kappa_template", "regions"});
  UncertaintyFile out;
  if (j.contains("kappa_template")) {
    if (!j["kappa_template"].is_boolean())
      throw InvalidInput("uncertainty: 'kappa_template' must be a boolean");
    out.is_template = j["kappa_template"].get<bool>();
  }
  if (!j.contains("regions") || !j["regions"].is_array())
    throw InvalidInput("uncertainty: missing array field 'regions'");

  int idx = 0;
  for (const auto& rj : j["regions"]) {
    const std::string what = "uncertainty.regions[" + std::to_string(idx++) +
                             "]";
    if (!rj.is_object()) throw InvalidInput(what + ": expected an object");
    reject_unknown(rj, what, {"point", "half_planes"});
    if (rj.contains("point") == rj.contains("half_planes"))
      throw InvalidInput(what +
                         ": exactly one of 'point'/'half_planes' required");
    if (rj.contains("point")) {
      if (out.is_template)
        throw InvalidInput(what + ": kappa templates use 'half_planes'");
      out.set.regions.push_back(
          PowerRegion::singleton(parse_complex(rj["point"], what + ".point")));
      continue;
    }
    const auto& hj = rj["half_planes"];
    if (!hj.is_array() || hj.empty())
      throw InvalidInput(what + ": 'half_planes' must be a nonempty array");
    const size_t arity = out.is_template ? 4 : 3;
    std::vector<HalfPlane> hs;
    std::vector<TemplateHalfPlane> ths;
    for (const auto& row : hj) {
      if (!row.is_array() || row.size() != arity)
        throw InvalidInput(what + ": each half-plane needs " +
                           std::to_string(arity) + " numbers");
      for (const auto& e : row)
        if (!e.is_number())
          throw InvalidInput(what + ": non-numeric half-plane entry");
      if (out.is_template)
        ths.push_back(TemplateHalfPlane{row[0].get<double>(),
                                        row[1].get<double>(),
                                        row[2].get<double>(),
                                        row[3].get<double>()});
      else
        hs.push_back(HalfPlane{row[0].get<double>(), row[1].get<double>(),
                               row[2].get<double>()});
    }
    if (out.is_template)
      out.tmpl.per_bus.push_back(std::move(ths));
    else
      out.set.regions.push_back(PowerRegion::polygon(std::move(hs)));
  }
  if (out.is_template && !out.tmpl.per_bus.empty() &&
      static_cast<int>(out.tmpl.per_bus.size()) != idx)
    throw InvalidInput("uncertainty: mixed template and plain regions");
  return out;
}

namespace {

json stage_records(const std::vector<StageRecord>& evidence) {
  json arr = json::array();
  for (const auto& r : evidence)
    arr.push_back({{"stage", r.name}, {"status", r.status},
                   {"millis", r.millis}});
  return arr;
}

}  // namespace

std::string verdict_report_json(const Verdict& verdict) {
  json j;
  j["result"] = verdict.admissible ? "Admissible" : "Unknown";
  if (!verdict.admissible) {
    j["failure"] = to_string(verdict.failure);
    j["detail"] = verdict.detail;
    if (!verdict.failing_ells.empty()) j["failing_ells"] = verdict.failing_ells;
  }
  if (verdict.lambda_star > 0.0) j["lambda_star"] = verdict.lambda_star;
  if (!verdict.boundary_results.empty()) {
    json arr = json::array();
    for (size_t ell = 0; ell < verdict.boundary_results.size(); ++ell) {
      const auto& r = verdict.boundary_results[ell];
      json e;
      e["ell"] = ell;
      e["status"] =
          r.status == P0Status::Infeasible ? "Infeasible" : "NotProven";
      if (!r.reason.empty()) e["reason"] = r.reason;
      if (r.status == P0Status::Infeasible)
        e["certificate_norm"] = r.certificate_norm;
      e["iterations"] = r.iterations;
      if (ell < static_cast<size_t>(verdict.vset.size())) {
        const auto& c = verdict.vset.items[ell];
        e["kind"] = to_string(c.kind);
        if (c.owner_bus >= 0) e["bus"] = c.owner_bus;
        if (c.branch_from >= 0)
          e["branch"] = {c.branch_from, c.branch_to};
      }
      arr.push_back(std::move(e));
    }
    j["boundary"] = std::move(arr);
  }
  j["evidence"] = stage_records(verdict.evidence);
  return j.dump(2) + "\n";
}

std::string calibration_report_json(const CalibrationResult& result) {
  json j;
  j["ok"] = result.ok;
  j["steps"] = result.steps;
  if (result.ok) {
    j["lambda_star"] = result.lambda_star;
    j["beta"] = result.aux.beta;
  } else {
    j["failure"] = result.failure;
  }
  return j.dump(2) + "\n";
}

std::string kappa_report_json(const KappaResult& result) {
  json j;
  j["ok"] = result.ok;
  if (result.ok) {
    j["kappa_star"] = result.kappa_star;
    if (result.first_unknown > 0.0) j["first_unknown"] = result.first_unknown;
  } else {
    j["failure"] = result.failure;
  }
  json arr = json::array();
  for (const auto& [kappa, adm] : result.tested)
    arr.push_back({{"kappa", kappa}, {"admissible", adm}});
  j["tested"] = std::move(arr);
  return j.dump(2) + "\n";
}

std::string trace_csv(const ContinuationResult& trace) {
  std::ostringstream ss;
  ss << "t";
  if (!trace.states.empty())
    for (Eigen::Index jj = 0; jj < trace.states.front().size(); ++jj)
      ss << ",re_v" << (jj + 1) << ",im_v" << (jj + 1);
  ss << "\n";
  ss.precision(12);
  for (size_t i = 0; i < trace.states.size(); ++i) {
    ss << trace.t[i];
    for (Eigen::Index jj = 0; jj < trace.states[i].size(); ++jj)
      ss << "," << trace.states[i](jj).real() << ","
         << trace.states[i](jj).imag();
    ss << "\n";
  }
  return ss.str();
}

}  // namespace gridcert
