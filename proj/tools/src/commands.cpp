// Copyright 2026 The kgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kgate_cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "kgate/analysis.hpp"
#include "kgate_cli/csv.hpp"
#include "kgate_cli/run_config.hpp"

#ifndef KGATE_VERSION
#define KGATE_VERSION "unknown"
#endif

namespace kgate::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json record_json(const IterationRecord& r) {
  return {{"iteration", r.iteration}, {"j", r.j},
          {"tau", complex_json(r.tau)}, {"tau_abs", r.tau_abs},
          {"fidelity", r.fidelity},     {"leakage", r.leakage},
          {"field_energy", r.field_energy}, {"lambda", r.lambda},
          {"backoffs", r.backoffs}};
}

json model_json(const RunConfig& config, const ModelSystem& model) {
  json labels = json::array();
  for (Index r : model.registers()) labels.push_back(model.labels()[static_cast<std::size_t>(r)]);
  return {{"name", to_string(config.model)},
          {"dim", model.dim()},
          {"registers", std::vector<Index>(model.registers().begin(), model.registers().end())},
          {"register_labels", labels},
          {"carrier_frequency", model.carrier_frequency()}};
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int exit_code(RunStatus status) {
  switch (status) {
    case RunStatus::converged:
      return kExitOk;
    case RunStatus::max_iterations:
      return kExitMaxIterations;
    case RunStatus::diverged:
      return kExitDiverged;
  }
  return kExitRuntimeError;
}

struct Job {
  RunConfig config;
  fs::path out_dir;
};

class Log {
 public:
  explicit Log(std::ostream& os) : os_(os) {}
  void line(const std::string& s) {
    std::lock_guard<std::mutex> lock(m_);
    os_ << s << '\n' << std::flush;
  }

 private:
  std::ostream& os_;
  std::mutex m_;
};

int run_optimize(const Job& job, std::size_t progress_every, Log& log) {
  const std::string name = job.config.source.filename().string();
  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Problem problem = build_problem(job.config);
    const ModelSystem& model = problem.system.model;

    IterationObserver observer;
    if (progress_every > 0) {
      observer = [&](const IterationRecord& r) {
        if (r.iteration % progress_every != 0) return;
        std::ostringstream os;
        os << '[' << name << "] iter " << r.iteration << " J=" << r.j
           << " fidelity=" << r.fidelity << " leakage=" << r.leakage
           << " lambda=" << r.lambda;
        log.line(os.str());
      };
    }
    const OptimizationReport report =
        optimize(model, problem.system.target, problem.optimizer, observer);

    fs::create_directories(job.out_dir);
    write_field_csv(job.out_dir / "field.csv", report.final_field);
    write_convergence_csv(job.out_dir / "convergence.csv", report);
    write_spectrum_csv(job.out_dir / "spectrum.csv", field_spectrum(report.final_field));

    const IterationRecord& last =
        report.iterations.empty() ? report.initial : report.iterations.back();
    const ConvergenceSummary summary = convergence_summary(report);
    json iterations = json::array();
    for (const auto& r : report.iterations) iterations.push_back(record_json(r));

    json doc;
    doc["schema"] = kReportSchema;
    doc["kgate_version"] = KGATE_VERSION;
    doc["config"] = job.config.echo();
    doc["model"] = model_json(job.config, model);
    doc["grid"] = {{"t_final", report.final_field.t_final()},
                   {"n_steps", report.final_field.n_steps()},
                   {"dt", report.final_field.dt()}};
    doc["report"] = {{"status", to_string(report.status)},
                     {"iterations_run", report.iterations.size()},
                     {"initial", record_json(report.initial)},
                     {"iterations", std::move(iterations)},
                     {"final", record_json(last)},
                     {"final_u", matrix_json(report.final_u)},
                     {"monotonicity_violations", summary.monotonicity_violations},
                     {"iterations_to_fidelity_0_99",
                      summary.iterations_to_threshold ? json(*summary.iterations_to_threshold)
                                                      : json(nullptr)}};
    doc["artifacts"] = {"field.csv", "convergence.csv", "spectrum.csv", "report.json"};
    write_json(job.out_dir / "report.json", doc);

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_json(job.out_dir / "run_info.json", {{"started_at", started},
                                                {"finished_at", utc_now()},
                                                {"elapsed_seconds", elapsed},
                                                {"kgate_version", KGATE_VERSION}});

    std::ostringstream os;
    os << '[' << name << "] " << to_string(report.status) << " after "
       << report.iterations.size() << " iterations: fidelity=" << last.fidelity
       << " leakage=" << last.leakage << " -> " << job.out_dir.string();
    log.line(os.str());
    return exit_code(report.status);
  } catch (const ConfigError& e) {
    log.line(std::string("error: ") + e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    log.line("[" + name + "] error: " + e.what());
    return kExitRuntimeError;
  }
}

}  // namespace

int cmd_optimize(const OptimizeOptions& options, std::ostream& log_stream) {
  Log log(log_stream);
  if (options.configs.empty()) {
    log.line("error: no config given");
    return kExitValidation;
  }
  if (options.out && options.configs.size() > 1) {
    log.line("error: --out requires a single config; set output_dir per config instead");
    return kExitValidation;
  }
  std::vector<Job> jobs;
  try {
    for (const auto& path : options.configs) {
      Job job{load_run_config(path), {}};
      build_problem(job.config);
      job.out_dir = options.out ? *options.out : job.config.output_dir;
      jobs.push_back(std::move(job));
    }
  } catch (const ConfigError& e) {
    log.line(std::string("error: ") + e.what());
    return kExitValidation;
  }
  std::set<fs::path> dirs;
  for (const auto& job : jobs) {
    if (!dirs.insert(job.out_dir.lexically_normal()).second) {
      log.line("error: output_dir '" + job.out_dir.string() + "' is used by more than one config");
      return kExitValidation;
    }
  }

  std::vector<int> codes(jobs.size(), kExitOk);
  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(jobs.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      codes[i] = run_optimize(jobs[i], options.progress_every, log);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
          codes[i] = run_optimize(jobs[i], options.progress_every, log);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  return *std::max_element(codes.begin(), codes.end());
}

int cmd_simulate(const fs::path& config_path, const std::optional<fs::path>& field_path,
                 const std::optional<fs::path>& out, std::ostream& log) {
  try {
    const RunConfig config = load_run_config(config_path);
    const Problem problem = build_problem(config);
    const ModelSystem& model = problem.system.model;
    const GateTarget& target = problem.system.target;

    ControlField field = problem.optimizer.guess;
    if (field_path) field = field_on_grid(read_field_csv(*field_path), field);

    const CMatrix u = propagate_final(model, field);
    const ObjectiveValue v =
        evaluate_objective(target, u, model.registers(), problem.optimizer.mode);
    const double leak = leakage(u, model.registers());
    const double defect = unitarity_defect(u);

    const fs::path dir = out ? *out : config.output_dir;
    fs::create_directories(dir);
    write_json(dir / "u_final.json",
               {{"schema", kReportSchema}, {"dim", u.rows()}, {"u", matrix_json(u)}});
    write_json(dir / "metrics.json", {{"schema", kReportSchema},
                                      {"kgate_version", KGATE_VERSION},
                                      {"field", field_path ? "file" : "guess"},
                                      {"n_steps", field.n_steps()},
                                      {"mode", problem.optimizer.mode.name()},
                                      {"j", v.j},
                                      {"tau", complex_json(v.tau)},
                                      {"fidelity", v.fidelity},
                                      {"leakage", leak},
                                      {"unitarity_defect", defect}});
    log << "fidelity=" << v.fidelity << " leakage=" << leak
        << " unitarity_defect=" << defect << " -> " << dir.string() << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const CsvError& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}

int cmd_spectrum(const fs::path& field_path, const fs::path& out,
                 const SpectrumOptions& spectrum_options, std::ostream& log) {
  try {
    const ControlField field = field_from_samples(read_field_csv(field_path));
    const Spectrum spectrum = field_spectrum(field, spectrum_options);
    fs::create_directories(out);
    write_spectrum_csv(out / "spectrum.csv", spectrum);
    log << spectrum.frequencies.size() << " bins -> " << (out / "spectrum.csv").string()
        << '\n';
    return kExitOk;
  } catch (const CsvError& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}

int cmd_validate(const std::vector<fs::path>& configs, std::ostream& log) {
  if (configs.empty()) {
    log << "error: no config given\n";
    return kExitValidation;
  }
  int code = kExitOk;
  for (const auto& path : configs) {
    try {
      const RunConfig config = load_run_config(path);
      const Problem problem = build_problem(config);
      log << "ok: " << path.string() << " (model " << to_string(config.model) << ", dim "
          << problem.system.model.dim() << ", " << problem.optimizer.guess.n_steps()
          << " steps)\n";
    } catch (const ConfigError& e) {
      log << "error: " << e.what() << '\n';
      code = kExitValidation;
    }
  }
  return code;
}

std::vector<fs::path> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "", "cannot open manifest");
  std::vector<fs::path> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const fs::path p(line.substr(first, last - first + 1));
    out.push_back(p.is_absolute() ? p : path.parent_path() / p);
  }
  return out;
}

}  // namespace kgate::cli
