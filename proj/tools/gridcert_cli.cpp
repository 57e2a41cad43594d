#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "gridcert/json_io.hpp"
#include "gridcert/oracle.hpp"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnknown = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitInput = 4;

using gridcert::InvalidInput;

void emit(const std::string& report, const std::string& path) {
  std::cout << report;
  if (!path.empty()) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write report: " + path);
    out << report;
  }
}

gridcert::CVec parse_voltage_json(const std::string& text, int n) {
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("v") ||
      !j["v"].is_array() || static_cast<int>(j["v"].size()) != n)
    throw InvalidInput("voltage file: expected {\"v\": [{re, im} x N]}");
  gridcert::CVec v(n);
  for (int i = 0; i < n; ++i) {
    const auto& e = j["v"][i];
    if (!e.is_object() || !e.contains("re") || !e.contains("im"))
      throw InvalidInput("voltage file: entries need re/im");
    v(i) = gridcert::Complex{e["re"].get<double>(), e["im"].get<double>()};
  }
  return v;
}

struct CommonArgs {
  std::string grid_path, security_path, uncertainty_path, v_initial_path;
  std::string report_path;
  int order = 2;
  double beta = 1.0;
  double lambda_start = 0.1;
  double lambda_ratio = 1.2;
  double lambda_step = 0.0;  // > 0 switches to step mode
  double resolution = 0.01;
  int parallel = 1;
  unsigned seed = 1;
};

gridcert::PipelineOptions pipeline_options(const CommonArgs& a) {
  gridcert::PipelineOptions opts;
  opts.omega = a.order;
  opts.beta = a.beta;
  opts.schedule.start = a.lambda_start;
  if (a.lambda_step > 0.0) {
    opts.schedule.mode = gridcert::LambdaSchedule::Mode::Step;
    opts.schedule.value = a.lambda_step;
  } else {
    opts.schedule.value = a.lambda_ratio;
  }
  return opts;
}

gridcert::CVec initial_voltage(const CommonArgs& a,
                               const gridcert::GridModel& model) {
  if (a.v_initial_path.empty()) return model.w();
  return parse_voltage_json(gridcert::read_file(a.v_initial_path),
                            model.n_pq());
}

int run(int argc, char** argv) {
  CLI::App app{"Admissibility certification for power-injection uncertainty "
               "sets"};
  app.require_subcommand(1);
  CommonArgs a;

  const auto add_common = [&](CLI::App* cmd, bool need_security,
                              bool need_uncertainty) {
    cmd->add_option("--grid", a.grid_path, "Grid JSON file")->required();
    if (need_security)
      cmd->add_option("--security", a.security_path, "Security JSON file")
          ->required();
    if (need_uncertainty)
      cmd->add_option("--uncertainty", a.uncertainty_path,
                      "Uncertainty JSON file")
          ->required();
    cmd->add_option("--report", a.report_path, "Write the JSON report here");
    cmd->add_option("--seed", a.seed, "Random seed");
    cmd->add_option("--parallel", a.parallel, "Worker count hint");
  };
  const auto add_pipeline_knobs = [&](CLI::App* cmd) {
    cmd->add_option("--order", a.order, "Relaxation order omega");
    cmd->add_option("--beta", a.beta, "Branch bound scaling in (0,1]");
    cmd->add_option("--lambda-start", a.lambda_start, "Lambda sweep start");
    cmd->add_option("--lambda-ratio", a.lambda_ratio, "Lambda sweep ratio");
    cmd->add_option("--lambda-step", a.lambda_step,
                    "Lambda sweep step (overrides ratio mode)");
    cmd->add_option("--v-initial", a.v_initial_path,
                    "Initial voltage JSON (default: zero-load voltage)");
  };

  auto* vset = app.add_subcommand("vset", "Calibrate the voltage set");
  add_common(vset, true, false);
  add_pipeline_knobs(vset);

  auto* adm = app.add_subcommand("admissibility",
                                 "Certify an uncertainty set admissible");
  add_common(adm, true, true);
  add_pipeline_knobs(adm);

  auto* mk = app.add_subcommand("max-kappa",
                                "Largest admissible kappa for a template");
  add_common(mk, true, true);
  add_pipeline_knobs(mk);
  mk->add_option("--resolution", a.resolution, "Bisection resolution");

  auto* orc = app.add_subcommand("oracle", "Brute-force path verification");
  add_common(orc, true, true);
  orc->add_option("--v-initial", a.v_initial_path, "Initial voltage JSON");
  int n_paths = 50, n_steps = 100;
  std::string trace_path;
  orc->add_option("--paths", n_paths, "Number of random paths");
  orc->add_option("--steps", n_steps, "Steps per path");

  auto* lf = app.add_subcommand("loadflow", "Solve one load flow");
  add_common(lf, false, false);
  std::string injection_path;
  lf->add_option("--injection", injection_path,
                 "Injection JSON {\"s\": [{re, im} x N]}")
      ->required();
  lf->add_option("--trace-csv", trace_path, "Continuation trace CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  const auto model = gridcert::parse_grid_json(
      gridcert::read_file(a.grid_path));

  if (lf->parsed()) {
    const auto j = nlohmann::json::parse(gridcert::read_file(injection_path),
                                         nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("s") ||
        !j["s"].is_array() ||
        static_cast<int>(j["s"].size()) != model.n_pq())
      throw InvalidInput("injection file: expected {\"s\": [{re, im} x N]}");
    gridcert::CVec s(model.n_pq());
    for (int i = 0; i < model.n_pq(); ++i)
      s(i) = gridcert::Complex{j["s"][i]["re"].get<double>(),
                               j["s"][i]["im"].get<double>()};
    const auto res = gridcert::high_voltage_solution(model, s);
    nlohmann::json rep;
    rep["converged"] = res.converged;
    rep["iterations"] = res.iterations;
    rep["residual"] = res.residual;
    if (res.converged) {
      auto varr = nlohmann::json::array();
      for (int i = 0; i < model.n_pq(); ++i)
        varr.push_back({{"re", res.v(i).real()}, {"im", res.v(i).imag()}});
      rep["v"] = std::move(varr);
      rep["nonsingular"] =
          gridcert::is_nonsingular(model, res.v).nonsingular;
    }
    emit(rep.dump(2) + "\n", a.report_path);
    if (!trace_path.empty() && res.converged) {
      const auto trace = gridcert::continuation_trace(
          model, {gridcert::CVec(gridcert::CVec::Zero(model.n_pq())), s},
          model.w(), 50);
      std::ofstream out(trace_path);
      out << gridcert::trace_csv(trace);
    }
    return res.converged ? kExitOk : kExitUnknown;
  }

  const auto security = gridcert::parse_security_json(
      gridcert::read_file(a.security_path), model);

  if (vset->parsed()) {
    const auto opts = pipeline_options(a);
    const auto calib = gridcert::calibrate_lambda(
        model, security, opts.beta, gridcert::Vec::Ones(model.n_pq()),
        opts.schedule);
    auto report = gridcert::calibration_report_json(calib);
    if (calib.ok) {
      const auto vs = gridcert::assemble_V(model, security, calib.aux);
      auto j = nlohmann::json::parse(report);
      auto arr = nlohmann::json::array();
      for (const auto& c : vs.items) {
        nlohmann::json e;
        e["kind"] = gridcert::to_string(c.kind);
        if (c.owner_bus >= 0) e["bus"] = c.owner_bus;
        if (c.branch_from >= 0) e["branch"] = {c.branch_from, c.branch_to};
        arr.push_back(std::move(e));
      }
      j["constraints"] = std::move(arr);
      j["aux_block_size"] = vs.split;
      report = j.dump(2) + "\n";
    }
    emit(report, a.report_path);
    return calib.ok ? kExitOk : kExitUnknown;
  }

  const auto ufile = gridcert::parse_uncertainty_json(
      gridcert::read_file(a.uncertainty_path));

  if (adm->parsed()) {
    if (ufile.is_template)
      throw InvalidInput("admissibility expects a concrete uncertainty set");
    try {
      const auto verdict = gridcert::test_admissibility(
          model, security, initial_voltage(a, model), ufile.set,
          pipeline_options(a));
      emit(gridcert::verdict_report_json(verdict), a.report_path);
      return verdict.admissible ? kExitOk : kExitUnknown;
    } catch (const gridcert::PreconditionViolated& e) {
      emit(std::string("{\n  \"result\": \"PreconditionViolated\",\n  "
                       "\"detail\": \"") +
               e.what() + "\"\n}\n",
           a.report_path);
      return kExitPrecondition;
    }
  }

  if (mk->parsed()) {
    if (!ufile.is_template)
      throw InvalidInput("max-kappa expects a kappa-template uncertainty file");
    gridcert::KappaSearchOptions search;
    search.resolution = a.resolution;
    try {
      const auto res = gridcert::max_kappa(model, security,
                                           initial_voltage(a, model),
                                           ufile.tmpl, pipeline_options(a),
                                           search);
      emit(gridcert::kappa_report_json(res), a.report_path);
      return res.ok ? kExitOk : kExitUnknown;
    } catch (const gridcert::PreconditionViolated& e) {
      emit(std::string("{\n  \"result\": \"PreconditionViolated\",\n  "
                       "\"detail\": \"") +
               e.what() + "\"\n}\n",
           a.report_path);
      return kExitPrecondition;
    }
  }

  // oracle
  if (ufile.is_template)
    throw InvalidInput("oracle expects a concrete uncertainty set");
  const auto violations = gridcert::brute_force_admissibility(
      model, security, initial_voltage(a, model), ufile.set, n_paths, n_steps,
      a.seed);
  nlohmann::json rep;
  rep["paths"] = n_paths;
  rep["steps"] = n_steps;
  auto arr = nlohmann::json::array();
  for (const auto& v : violations)
    arr.push_back({{"path", v.path}, {"step", v.step}, {"kind", v.kind},
                   {"margin", v.margin}});
  rep["violations"] = std::move(arr);
  emit(rep.dump(2) + "\n", a.report_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const gridcert::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
