#pragma once

#include <optional>
#include <string>
#include <vector>

namespace netbart {

enum class ColumnKind { Continuous, Categorical, Network };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::Continuous;
  // Level universe, for categorical/network columns. Order is fixed and
  // level values are referred to by their index into this list.
  std::vector<std::string> levels;
  // Optional sorted cutpoint grid for continuous columns, in the units of
  // the raw data. Rescaled alongside the column when a dataset is loaded.
  std::vector<double> cutpoints;
  // Network identifier, for network columns.
  std::string network;

  bool is_categorical() const { return kind != ColumnKind::Continuous; }
  std::optional<int> level_index(const std::string& value) const;
};

// Ordered column layout of a modeling problem. Continuous columns come
// first in the combined predictor indexing, then categorical/network
// columns, preserving the file order within each group.
struct PredictorSchema {
  std::vector<ColumnSpec> columns;

  int n_continuous() const;
  int n_categorical() const;
  int n_total() const { return static_cast<int>(columns.size()); }

  // Positions of continuous (resp. categorical/network) columns in file
  // order; the j-th continuous predictor is columns[continuous_cols()[j]].
  std::vector<int> continuous_cols() const;
  std::vector<int> categorical_cols() const;

  const ColumnSpec& continuous(int j) const { return columns[continuous_cols()[j]]; }
  const ColumnSpec& categorical(int j) const { return columns[categorical_cols()[j]]; }

  void validate() const;
};

PredictorSchema parse_schema(const std::string& json_text);
PredictorSchema load_schema(const std::string& path);
std::string schema_to_json(const PredictorSchema& schema);

}  // namespace netbart
