#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netbart/schema.hpp"

namespace netbart {

// Affine map taking the observed training outcomes onto [-0.5, 0.5].
struct OutcomeScaling {
  double center = 0.0;
  double half_range = 1.0;  // > 0

  double apply(double y) const { return (y - center) / (2.0 * half_range); }
  double invert(double z) const { return center + 2.0 * half_range * z; }
  double invert_scale(double s) const { return 2.0 * half_range * s; }

  static OutcomeScaling fit(const std::vector<double>& y);
};

// Observed range of a raw continuous column, kept for prediction-time
// reuse. A degenerate column (max == min) is encoded as constant 0 and
// can never be split on.
struct ContinuousRange {
  double lo = 0.0;
  double hi = 1.0;
  bool degenerate = false;

  double rescale(double v) const;
};

struct Dataset {
  int n = 0;
  PredictorSchema schema;
  // Column-major storage: x_cont[j][i] is the j-th continuous predictor of
  // row i, rescaled into [0,1]; x_cat[j][i] is a level index.
  std::vector<std::vector<double>> x_cont;
  std::vector<std::vector<int>> x_cat;
  std::vector<double> y;
  bool has_outcome = false;
  std::vector<ContinuousRange> cont_ranges;
  // Cutpoint grids mapped into [0,1] alongside their columns (empty when
  // the column has no grid).
  std::vector<std::vector<double>> scaled_cutpoints;

  int n_cont() const { return static_cast<int>(x_cont.size()); }
  int n_cat() const { return static_cast<int>(x_cat.size()); }
  void validate() const;
};

// Loads a CSV whose header contains every schema column (plus optionally
// an outcome column, "y" by default). Continuous columns are min-max
// rescaled to [0,1] from their observed ranges; categorical cells are
// mapped to level-universe indices. Unknown levels, non-numeric continuous
// cells and missing columns are errors.
Dataset load_dataset(const std::string& csv_path, const std::string& schema_path,
                     const std::string& outcome_column = "y");
Dataset load_dataset(const std::string& csv_path, const PredictorSchema& schema,
                     const std::string& outcome_column = "y");

// Prediction-time variant: reuses the ranges recorded at training and
// clamps out-of-range values into [0,1].
Dataset load_dataset_with_ranges(const std::string& csv_path, const PredictorSchema& schema,
                                 const std::vector<ContinuousRange>& ranges,
                                 const std::string& outcome_column = "y");

void write_dataset_csv(const Dataset& ds, const std::string& path);

// Replaces every categorical column with |levels| indicator columns in
// {0,1}, named "<column>=<level>".
Dataset one_hot_encode(const Dataset& ds);

// Replaces each categorical column of ds_apply with one continuous column
// holding the training-set mean outcome of the row's level, min-max
// rescaled by the training encoding's range. Levels unseen in training
// fall back to the global training mean.
Dataset target_encode(const Dataset& ds_train, const Dataset& ds_apply);

struct FoldScheme {
  enum Kind { RandomSplit, LeaveOneLevelOut };
  Kind kind = RandomSplit;
  double train_frac = 0.75;  // RandomSplit
  int column = 0;            // LeaveOneLevelOut: categorical column index
};

struct Fold {
  std::vector<int> train;
  std::vector<int> test;
};

std::vector<Fold> make_folds(const Dataset& ds, const FoldScheme& scheme, std::uint64_t seed);

// Row subset in the given order; scaling metadata carries over unchanged.
Dataset subset_rows(const Dataset& ds, const std::vector<int>& rows);

}  // namespace netbart
