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

#include "kgate_cli/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "kgate_cli/csv.hpp"

namespace kgate::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::set<std::string> kKnownKeys = {
    "model",    "model_file",   "target_file",   "t_final",        "n_steps",
    "lambda",   "shape",        "shape_file",    "guess_omega",    "mode",
    "update_style", "max_iterations", "j_tolerance", "seed",       "output_dir"};

std::string read_text(const fs::path& path, const std::string& source,
                      const std::string& field) {
  std::ifstream in(path);
  if (!in) throw ConfigError(source, field, "cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

class Reader {
 public:
  Reader(const json& doc, std::string source, fs::path base)
      : doc_(doc), source_(std::move(source)), base_(std::move(base)) {}

  [[noreturn]] void fail(const std::string& field, const std::string& message) const {
    throw ConfigError(source_, field, message);
  }

  bool has(const char* key) const { return doc_.contains(key); }

  const json& get(const char* key) const {
    if (!has(key)) fail(key, "missing required field");
    return doc_.at(key);
  }

  std::string string(const char* key) const {
    const json& v = get(key);
    if (!v.is_string()) fail(key, "must be a string");
    return v.get<std::string>();
  }

  double positive(const char* key) const {
    const json& v = get(key);
    if (!v.is_number()) fail(key, "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x) || x <= 0.0) {
      fail(key, "must be a positive finite number (got " + v.dump() + ")");
    }
    return x;
  }

  double non_negative(const char* key) const {
    const json& v = get(key);
    if (!v.is_number()) fail(key, "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x) || x < 0.0) {
      fail(key, "must be a non-negative finite number (got " + v.dump() + ")");
    }
    return x;
  }

  std::uint64_t count(const char* key) const {
    const json& v = get(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
      fail(key, "must be a non-negative integer (got " + v.dump() + ")");
    }
    fail(key, "must be an integer");
  }

  fs::path existing_path(const char* key) const {
    const fs::path p = resolve(string(key));
    std::error_code ec;
    if (!fs::is_regular_file(p, ec)) fail(key, "file not found: '" + p.string() + "'");
    return p;
  }

  fs::path resolve(const std::string& raw) const {
    const fs::path p(raw);
    return p.is_absolute() ? p : base_ / p;
  }

 private:
  const json& doc_;
  std::string source_;
  fs::path base_;
};

ObjectiveMode parse_mode(const Reader& r, const json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "real-part") return ObjectiveMode::real_part();
    if (s == "imag-part") return ObjectiveMode::imag_part();
    r.fail("mode", "unknown mode '" + s + "' (real-part, imag-part or {\"combination\": [a, b]})");
  }
  if (v.is_object() && v.size() == 1 && v.contains("combination")) {
    const json& ab = v["combination"];
    if (!ab.is_array() || ab.size() != 2 || !ab[0].is_number() || !ab[1].is_number()) {
      r.fail("mode", "combination must be [a, b]");
    }
    try {
      return ObjectiveMode::combination(ab[0].get<double>(), ab[1].get<double>());
    } catch (const std::invalid_argument& e) {
      r.fail("mode", e.what());
    }
  }
  r.fail("mode", "must be \"real-part\", \"imag-part\" or {\"combination\": [a, b]}");
}

Shape load_shape_table(const RunConfig& config) {
  const std::string src = config.source.string();
  try {
    const CsvTable table = read_csv(*config.shape_file, 2);
    std::vector<std::pair<double, double>> points;
    points.reserve(table.rows.size());
    for (const auto& row : table.rows) points.emplace_back(row[0], row[1]);
    return Shape::table(std::move(points));
  } catch (const CsvError& e) {
    throw ConfigError(src, "shape_file", e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(src, "shape_file", e.what());
  }
}

}  // namespace

ConfigError::ConfigError(std::string source, std::string field, const std::string& message)
    : std::runtime_error(source + ": " +
                         (field.empty() ? std::string() : "field '" + field + "': ") +
                         message),
      source_(std::move(source)),
      field_(std::move(field)) {}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::hadamard:
      return "hadamard";
    case ModelKind::qft:
      return "qft";
    case ModelKind::custom:
      return "custom";
  }
  return "unknown";
}

RunConfig parse_run_config(const std::string& json_text, const fs::path& source) {
  const std::string src = source.string();
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(src, "", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError(src, "", "top level must be a JSON object");
  for (const auto& item : doc.items()) {
    if (!kKnownKeys.count(item.key())) {
      throw ConfigError(src, item.key(), "unknown field");
    }
  }

  const Reader r(doc, src, source.parent_path());
  RunConfig c;
  c.source = source;

  const std::string model = r.string("model");
  if (model == "hadamard") {
    c.model = ModelKind::hadamard;
  } else if (model == "qft") {
    c.model = ModelKind::qft;
  } else if (model == "custom") {
    c.model = ModelKind::custom;
  } else {
    r.fail("model", "unknown model '" + model + "' (hadamard, qft or custom)");
  }
  if (c.model == ModelKind::custom) {
    c.model_file = r.existing_path("model_file");
  } else if (r.has("model_file")) {
    r.fail("model_file", "only valid with model \"custom\"");
  }
  if (r.has("target_file")) c.target_file = r.existing_path("target_file");

  c.t_final = r.positive("t_final");
  if (r.has("n_steps")) {
    const std::uint64_t n = r.count("n_steps");
    if (n < 2) r.fail("n_steps", "must be at least 2");
    c.n_steps = static_cast<std::size_t>(n);
  }
  c.lambda = r.positive("lambda");

  if (r.has("shape")) c.shape = r.string("shape");
  if (c.shape != "paper-sin2-2pi" && c.shape != "sin2-pi" && c.shape != "table") {
    r.fail("shape", "unknown shape '" + c.shape + "' (paper-sin2-2pi, sin2-pi or table)");
  }
  if (c.shape == "table") {
    c.shape_file = r.existing_path("shape_file");
  } else if (r.has("shape_file")) {
    r.fail("shape_file", "only valid with shape \"table\"");
  }

  if (r.has("guess_omega")) c.guess_omega = r.non_negative("guess_omega");
  if (r.has("mode")) c.mode = parse_mode(r, doc["mode"]);
  if (r.has("update_style")) {
    const std::string s = r.string("update_style");
    if (s == "incremental") {
      c.update_style = UpdateStyle::incremental;
    } else if (s == "direct") {
      c.update_style = UpdateStyle::direct;
    } else {
      r.fail("update_style", "must be \"incremental\" or \"direct\"");
    }
  }
  if (r.has("max_iterations")) c.max_iterations = r.count("max_iterations");
  if (r.has("j_tolerance")) c.j_tolerance = r.positive("j_tolerance");
  if (r.has("seed")) c.seed = r.count("seed");
  if (r.has("output_dir")) {
    const std::string out = r.string("output_dir");
    if (out.empty()) r.fail("output_dir", "must not be empty");
    c.output_dir = r.resolve(out);
  } else {
    c.output_dir = r.resolve("out/" + source.stem().string());
  }
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  return parse_run_config(read_text(path, path.string(), ""), path);
}

json RunConfig::echo() const {
  const fs::path base = source.parent_path();
  auto rel = [&](const fs::path& p) {
    return p.lexically_proximate(base).generic_string();
  };
  json j;
  j["model"] = to_string(model);
  if (model == ModelKind::custom) j["model_file"] = rel(model_file);
  if (target_file) j["target_file"] = rel(*target_file);
  j["t_final"] = t_final;
  j["n_steps"] = n_steps ? json(*n_steps) : json(nullptr);
  j["lambda"] = lambda;
  j["shape"] = shape;
  if (shape_file) j["shape_file"] = rel(*shape_file);
  j["guess_omega"] = guess_omega ? json(*guess_omega) : json(nullptr);
  if (mode.kind() == ObjectiveMode::Kind::combination) {
    j["mode"] = {{"combination", {mode.a(), mode.b()}}};
  } else {
    j["mode"] = mode.name();
  }
  j["update_style"] = to_string(update_style);
  j["max_iterations"] = max_iterations;
  j["j_tolerance"] = j_tolerance ? json(*j_tolerance) : json(nullptr);
  j["seed"] = seed;
  return j;
}

Problem build_problem(const RunConfig& config) {
  const std::string src = config.source.string();
  auto system = [&]() -> ModelAndTarget {
    switch (config.model) {
      case ModelKind::hadamard:
        return build_hadamard_model();
      case ModelKind::qft:
        return build_qft_model();
      case ModelKind::custom:
        try {
          return build_custom_model(load_model_spec(config.model_file));
        } catch (const std::exception& e) {
          throw ConfigError(src, "model_file", e.what());
        }
    }
    throw ConfigError(src, "model", "unknown model");
  }();

  if (config.target_file) {
    try {
      const CMatrix m =
          parse_target_matrix(read_text(*config.target_file, src, "target_file"));
      if (m.rows() != system.model.register_dim()) {
        throw ConfigError(src, "target_file",
                          "target is " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()) + " but the model has " +
                              std::to_string(system.model.register_dim()) + " registers");
      }
      system.target = GateTarget(Operator::unitary(m), system.model.dim(),
                                 system.model.registers());
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(src, "target_file", e.what());
    }
  }

  Shape shape = Shape::sin2_2pi();
  if (config.shape == "sin2-pi") shape = Shape::sin2_pi();
  if (config.shape == "table") shape = load_shape_table(config);

  const std::size_t n =
      config.n_steps ? *config.n_steps : default_n_steps(system.model, config.t_final);
  const double omega =
      config.guess_omega ? *config.guess_omega : system.model.carrier_frequency();

  OptimizerConfig opt(guess_field(config.t_final, n, omega, shape));
  opt.lambda = config.lambda;
  opt.shape = shape;
  opt.max_iterations = config.max_iterations;
  opt.j_tolerance = config.j_tolerance;
  opt.mode = config.mode;
  opt.update_style = config.update_style;
  try {
    opt.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(src, "", e.what());
  }
  return Problem{std::move(system), std::move(opt)};
}

}  // namespace kgate::cli
