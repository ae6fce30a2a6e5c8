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

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kgate/models.hpp"

namespace kgate {

using nlohmann::json;

namespace {

const json& require(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw ModelError(std::string("model spec: missing field '") + key + "'");
  }
  return doc.at(key);
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ModelError("model spec: " + where + " must be a number");
  return v.get<double>();
}

Index as_index(const json& v, const std::string& where) {
  if (!v.is_number_integer()) {
    throw ModelError("model spec: " + where + " must be an integer index");
  }
  return v.get<Index>();
}

std::vector<ModelSpec::Coupling> parse_couplings(const json& arr,
                                                 const std::string& field) {
  if (!arr.is_array()) throw ModelError("model spec: '" + field + "' must be an array");
  std::vector<ModelSpec::Coupling> out;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const json& c = arr[k];
    const std::string where = field + "[" + std::to_string(k) + "]";
    if (!c.is_array() || c.size() != 3) {
      throw ModelError("model spec: " + where + " must be [i, j, strength]");
    }
    out.push_back({as_index(c[0], where + "[0]"), as_index(c[1], where + "[1]"),
                   as_number(c[2], where + "[2]")});
  }
  return out;
}

CMatrix parse_complex_matrix(const json& rows, const std::string& field) {
  if (!rows.is_array() || rows.empty()) {
    throw ModelError("model spec: '" + field + "' must be a non-empty array of rows");
  }
  const std::size_t n = rows.size();
  CMatrix m(static_cast<Index>(n), static_cast<Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const json& row = rows[r];
    if (!row.is_array() || row.size() != n) {
      std::ostringstream os;
      os << "model spec: " << field << " row " << r << " must hold " << n
         << " [re, im] entries";
      throw ModelError(os.str());
    }
    for (std::size_t c = 0; c < n; ++c) {
      const json& e = row[c];
      const std::string where =
          field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]";
      if (!e.is_array() || e.size() != 2) {
        throw ModelError("model spec: " + where + " must be [re, im]");
      }
      m(static_cast<Index>(r), static_cast<Index>(c)) =
          Complex(as_number(e[0], where), as_number(e[1], where));
    }
  }
  return m;
}

json couplings_to_json(const std::vector<ModelSpec::Coupling>& cs) {
  json arr = json::array();
  for (const auto& c : cs) arr.push_back(json::array({c.i, c.j, c.strength}));
  return arr;
}

json parse_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("model spec: malformed JSON: ") + e.what());
  }
}

}  // namespace

ModelSpec parse_model_spec(std::string_view json_text) {
  const json doc = parse_document(json_text);
  ModelSpec spec;

  const json& levels = require(doc, "levels");
  if (!levels.is_array()) throw ModelError("model spec: 'levels' must be an array");
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const json& l = levels[k];
    const std::string where = "levels[" + std::to_string(k) + "]";
    if (!l.is_object()) throw ModelError("model spec: " + where + " must be an object");
    ModelSpec::Level level;
    if (l.contains("label")) {
      if (!l["label"].is_string()) {
        throw ModelError("model spec: " + where + ".label must be a string");
      }
      level.label = l["label"].get<std::string>();
    }
    level.energy = as_number(require(l, "energy"), where + ".energy");
    spec.levels.push_back(std::move(level));
  }

  spec.couplings = parse_couplings(require(doc, "couplings"), "couplings");
  if (doc.contains("static_couplings")) {
    spec.static_couplings =
        parse_couplings(doc["static_couplings"], "static_couplings");
  }

  const json& regs = require(doc, "registers");
  if (!regs.is_array()) throw ModelError("model spec: 'registers' must be an array");
  for (std::size_t k = 0; k < regs.size(); ++k) {
    spec.registers.push_back(
        as_index(regs[k], "registers[" + std::to_string(k) + "]"));
  }

  spec.target = parse_complex_matrix(require(doc, "target"), "target");

  if (doc.contains("carrier_frequency")) {
    spec.carrier_frequency =
        as_number(doc["carrier_frequency"], "carrier_frequency");
  }
  return spec;
}

ModelSpec load_model_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("model spec: cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_model_spec(buffer.str());
}

std::string model_spec_to_json(const ModelSpec& spec) {
  json doc;
  json levels = json::array();
  for (const auto& l : spec.levels) {
    levels.push_back({{"label", l.label}, {"energy", l.energy}});
  }
  doc["levels"] = std::move(levels);
  doc["couplings"] = couplings_to_json(spec.couplings);
  if (!spec.static_couplings.empty()) {
    doc["static_couplings"] = couplings_to_json(spec.static_couplings);
  }
  doc["registers"] = spec.registers;
  json target = json::array();
  for (Index r = 0; r < spec.target.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < spec.target.cols(); ++c) {
      row.push_back(
          json::array({spec.target(r, c).real(), spec.target(r, c).imag()}));
    }
    target.push_back(std::move(row));
  }
  doc["target"] = std::move(target);
  if (spec.carrier_frequency) doc["carrier_frequency"] = *spec.carrier_frequency;
  return doc.dump(2);
}

CMatrix parse_target_matrix(std::string_view json_text) {
  const json doc = parse_document(json_text);
  return parse_complex_matrix(require(doc, "target"), "target");
}

}  // namespace kgate
