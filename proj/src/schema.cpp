#include "netbart/schema.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace netbart {

using nlohmann::json;

std::optional<int> ColumnSpec::level_index(const std::string& value) const {
  auto it = std::find(levels.begin(), levels.end(), value);
  if (it == levels.end()) return std::nullopt;
  return static_cast<int>(it - levels.begin());
}

int PredictorSchema::n_continuous() const {
  return static_cast<int>(continuous_cols().size());
}

int PredictorSchema::n_categorical() const {
  return static_cast<int>(categorical_cols().size());
}

std::vector<int> PredictorSchema::continuous_cols() const {
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(columns.size()); ++i) {
    if (!columns[i].is_categorical()) idx.push_back(i);
  }
  return idx;
}

std::vector<int> PredictorSchema::categorical_cols() const {
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(columns.size()); ++i) {
    if (columns[i].is_categorical()) idx.push_back(i);
  }
  return idx;
}

void PredictorSchema::validate() const {
  std::set<std::string> names;
  for (const auto& col : columns) {
    if (col.name.empty()) throw std::runtime_error("schema: empty column name");
    if (!names.insert(col.name).second) {
      throw std::runtime_error("schema: duplicate column name '" + col.name + "'");
    }
    if (col.is_categorical()) {
      if (col.levels.empty()) {
        throw std::runtime_error("schema: column '" + col.name + "' declares no levels");
      }
      std::set<std::string> seen(col.levels.begin(), col.levels.end());
      if (seen.size() != col.levels.size()) {
        throw std::runtime_error("schema: duplicate level in column '" + col.name + "'");
      }
      if (col.kind == ColumnKind::Network && col.network.empty()) {
        throw std::runtime_error("schema: network column '" + col.name + "' names no network");
      }
    } else {
      if (!col.levels.empty()) {
        throw std::runtime_error("schema: continuous column '" + col.name + "' declares levels");
      }
      if (!std::is_sorted(col.cutpoints.begin(), col.cutpoints.end())) {
        throw std::runtime_error("schema: cutpoint grid for '" + col.name + "' is not sorted");
      }
    }
  }
}

PredictorSchema parse_schema(const std::string& json_text) {
  json j = json::parse(json_text);
  if (!j.contains("columns") || !j["columns"].is_array()) {
    throw std::runtime_error("schema: missing 'columns' array");
  }
  PredictorSchema schema;
  for (const auto& jc : j["columns"]) {
    ColumnSpec col;
    col.name = jc.at("name").get<std::string>();
    std::string kind = jc.at("kind").get<std::string>();
    if (kind == "continuous") col.kind = ColumnKind::Continuous;
    else if (kind == "categorical") col.kind = ColumnKind::Categorical;
    else if (kind == "network") col.kind = ColumnKind::Network;
    else throw std::runtime_error("schema: unknown kind '" + kind + "'");
    if (jc.contains("levels")) {
      for (const auto& v : jc["levels"]) col.levels.push_back(v.get<std::string>());
    }
    if (jc.contains("cutpoints")) {
      for (const auto& v : jc["cutpoints"]) col.cutpoints.push_back(v.get<double>());
    }
    if (jc.contains("network")) col.network = jc["network"].get<std::string>();
    schema.columns.push_back(std::move(col));
  }
  schema.validate();
  return schema;
}

PredictorSchema load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("schema: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_schema(ss.str());
}

std::string schema_to_json(const PredictorSchema& schema) {
  json cols = json::array();
  for (const auto& col : schema.columns) {
    json jc;
    jc["name"] = col.name;
    switch (col.kind) {
      case ColumnKind::Continuous: jc["kind"] = "continuous"; break;
      case ColumnKind::Categorical: jc["kind"] = "categorical"; break;
      case ColumnKind::Network: jc["kind"] = "network"; break;
    }
    if (!col.levels.empty()) jc["levels"] = col.levels;
    if (!col.cutpoints.empty()) jc["cutpoints"] = col.cutpoints;
    if (!col.network.empty()) jc["network"] = col.network;
    cols.push_back(jc);
  }
  return json{{"columns", cols}}.dump(2);
}

}  // namespace netbart
