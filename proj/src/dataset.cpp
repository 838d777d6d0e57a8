#include "netbart/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "netbart/csv.hpp"
#include "netbart/rng.hpp"

namespace netbart {

OutcomeScaling OutcomeScaling::fit(const std::vector<double>& y) {
  if (y.empty()) throw std::runtime_error("outcome scaling: empty outcome vector");
  auto [mn, mx] = std::minmax_element(y.begin(), y.end());
  OutcomeScaling s;
  s.center = 0.5 * (*mn + *mx);
  s.half_range = 0.5 * (*mx - *mn);
  if (s.half_range <= 0.0) s.half_range = 1.0;  // constant outcome
  return s;
}

double ContinuousRange::rescale(double v) const {
  if (degenerate) return 0.0;
  double t = (v - lo) / (hi - lo);
  return std::clamp(t, 0.0, 1.0);
}

void Dataset::validate() const {
  if (n < 1) throw std::runtime_error("dataset: n must be >= 1");
  if (static_cast<int>(x_cont.size()) != schema.n_continuous() ||
      static_cast<int>(x_cat.size()) != schema.n_categorical()) {
    throw std::runtime_error("dataset: matrix shape inconsistent with schema");
  }
  for (const auto& col : x_cont) {
    if (static_cast<int>(col.size()) != n) throw std::runtime_error("dataset: ragged matrix");
    for (double v : col) {
      if (!(v >= 0.0 && v <= 1.0)) throw std::runtime_error("dataset: continuous value outside [0,1]");
    }
  }
  auto cat_cols = schema.categorical_cols();
  for (int j = 0; j < n_cat(); ++j) {
    if (static_cast<int>(x_cat[j].size()) != n) throw std::runtime_error("dataset: ragged matrix");
    int k = static_cast<int>(schema.columns[cat_cols[j]].levels.size());
    for (int v : x_cat[j]) {
      if (v < 0 || v >= k) throw std::runtime_error("dataset: level index out of range");
    }
  }
  if (has_outcome && static_cast<int>(y.size()) != n) {
    throw std::runtime_error("dataset: outcome length mismatch");
  }
}

namespace {

double parse_numeric(const std::string& cell, const std::string& col, std::size_t row) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v)) {
    throw std::runtime_error("dataset: non-numeric value '" + cell + "' in column '" + col +
                             "' at data row " + std::to_string(row + 1));
  }
  return v;
}

Dataset load_from_rows(const std::vector<CsvRow>& rows, const PredictorSchema& schema,
                       const std::vector<ContinuousRange>* fixed_ranges,
                       const std::string& outcome_column) {
  if (rows.empty()) throw std::runtime_error("dataset: empty file");
  const CsvRow& header = rows.front();

  auto find_col = [&](const std::string& name) -> int {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };

  Dataset ds;
  ds.schema = schema;
  ds.n = static_cast<int>(rows.size()) - 1;
  if (ds.n < 1) throw std::runtime_error("dataset: no data rows");

  std::vector<int> cont_src, cat_src;
  for (int ci : schema.continuous_cols()) {
    int pos = find_col(schema.columns[ci].name);
    if (pos < 0) throw std::runtime_error("dataset: missing column '" + schema.columns[ci].name + "'");
    cont_src.push_back(pos);
  }
  for (int ci : schema.categorical_cols()) {
    int pos = find_col(schema.columns[ci].name);
    if (pos < 0) throw std::runtime_error("dataset: missing column '" + schema.columns[ci].name + "'");
    cat_src.push_back(pos);
  }
  int y_pos = outcome_column.empty() ? -1 : find_col(outcome_column);

  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) {
      throw std::runtime_error("dataset: row " + std::to_string(r) + " has " +
                               std::to_string(rows[r].size()) + " fields, header has " +
                               std::to_string(header.size()));
    }
  }

  const int p_cont = static_cast<int>(cont_src.size());
  ds.x_cont.assign(p_cont, std::vector<double>(ds.n));
  ds.cont_ranges.resize(p_cont);
  ds.scaled_cutpoints.resize(p_cont);
  auto cont_cols = schema.continuous_cols();
  for (int j = 0; j < p_cont; ++j) {
    const std::string& name = schema.columns[cont_cols[j]].name;
    std::vector<double> raw(ds.n);
    for (int i = 0; i < ds.n; ++i) raw[i] = parse_numeric(rows[i + 1][cont_src[j]], name, i);
    ContinuousRange rg;
    if (fixed_ranges) {
      rg = (*fixed_ranges)[j];
    } else {
      auto [mn, mx] = std::minmax_element(raw.begin(), raw.end());
      rg.lo = *mn;
      rg.hi = *mx;
      rg.degenerate = !(*mx > *mn);
    }
    ds.cont_ranges[j] = rg;
    for (int i = 0; i < ds.n; ++i) ds.x_cont[j][i] = rg.rescale(raw[i]);
    for (double c : schema.columns[cont_cols[j]].cutpoints) {
      if (!rg.degenerate && c > rg.lo && c < rg.hi) {
        ds.scaled_cutpoints[j].push_back((c - rg.lo) / (rg.hi - rg.lo));
      }
    }
  }

  auto cat_cols = schema.categorical_cols();
  ds.x_cat.assign(cat_src.size(), std::vector<int>(ds.n));
  for (std::size_t j = 0; j < cat_src.size(); ++j) {
    const ColumnSpec& col = schema.columns[cat_cols[j]];
    for (int i = 0; i < ds.n; ++i) {
      const std::string& cell = rows[i + 1][cat_src[j]];
      auto idx = col.level_index(cell);
      if (!idx) {
        throw std::runtime_error("dataset: value '" + cell + "' in column '" + col.name +
                                 "' is not in the declared level universe");
      }
      ds.x_cat[j][i] = *idx;
    }
  }

  if (y_pos >= 0) {
    ds.has_outcome = true;
    ds.y.resize(ds.n);
    for (int i = 0; i < ds.n; ++i) ds.y[i] = parse_numeric(rows[i + 1][y_pos], outcome_column, i);
  }

  ds.validate();
  return ds;
}

}  // namespace

Dataset load_dataset(const std::string& csv_path, const std::string& schema_path,
                     const std::string& outcome_column) {
  return load_dataset(csv_path, load_schema(schema_path), outcome_column);
}

Dataset load_dataset(const std::string& csv_path, const PredictorSchema& schema,
                     const std::string& outcome_column) {
  return load_from_rows(read_csv_file(csv_path), schema, nullptr, outcome_column);
}

Dataset load_dataset_with_ranges(const std::string& csv_path, const PredictorSchema& schema,
                                 const std::vector<ContinuousRange>& ranges,
                                 const std::string& outcome_column) {
  if (static_cast<int>(ranges.size()) != schema.n_continuous()) {
    throw std::runtime_error("dataset: range list does not match schema");
  }
  return load_from_rows(read_csv_file(csv_path), schema, &ranges, outcome_column);
}

void write_dataset_csv(const Dataset& ds, const std::string& path) {
  std::vector<CsvRow> rows;
  CsvRow header;
  for (const auto& col : ds.schema.columns) header.push_back(col.name);
  if (ds.has_outcome) header.push_back("y");
  rows.push_back(header);

  auto cont_cols = ds.schema.continuous_cols();
  auto cat_cols = ds.schema.categorical_cols();
  std::vector<int> cont_of_col(ds.schema.columns.size(), -1), cat_of_col(ds.schema.columns.size(), -1);
  for (std::size_t j = 0; j < cont_cols.size(); ++j) cont_of_col[cont_cols[j]] = static_cast<int>(j);
  for (std::size_t j = 0; j < cat_cols.size(); ++j) cat_of_col[cat_cols[j]] = static_cast<int>(j);

  for (int i = 0; i < ds.n; ++i) {
    CsvRow row;
    for (std::size_t c = 0; c < ds.schema.columns.size(); ++c) {
      if (cont_of_col[c] >= 0) {
        row.push_back(format_double(ds.x_cont[cont_of_col[c]][i]));
      } else {
        const ColumnSpec& col = ds.schema.columns[c];
        row.push_back(col.levels[ds.x_cat[cat_of_col[c]][i]]);
      }
    }
    if (ds.has_outcome) row.push_back(format_double(ds.y[i]));
    rows.push_back(row);
  }
  write_csv_file(path, rows);
}

Dataset one_hot_encode(const Dataset& ds) {
  if (ds.n_cat() == 0) return ds;

  Dataset out;
  out.n = ds.n;
  out.y = ds.y;
  out.has_outcome = ds.has_outcome;

  for (int c : ds.schema.continuous_cols()) out.schema.columns.push_back(ds.schema.columns[c]);
  out.x_cont = ds.x_cont;
  out.cont_ranges = ds.cont_ranges;
  out.scaled_cutpoints = ds.scaled_cutpoints;

  auto cat_cols = ds.schema.categorical_cols();
  for (std::size_t j = 0; j < cat_cols.size(); ++j) {
    const ColumnSpec& col = ds.schema.columns[cat_cols[j]];
    for (std::size_t k = 0; k < col.levels.size(); ++k) {
      ColumnSpec ind;
      ind.name = col.name + "=" + col.levels[k];
      ind.kind = ColumnKind::Continuous;
      out.schema.columns.push_back(ind);
      std::vector<double> v(ds.n, 0.0);
      for (int i = 0; i < ds.n; ++i) {
        if (ds.x_cat[j][i] == static_cast<int>(k)) v[i] = 1.0;
      }
      out.x_cont.push_back(std::move(v));
      out.cont_ranges.push_back({0.0, 1.0, false});
      out.scaled_cutpoints.emplace_back();
    }
  }
  out.schema.validate();
  out.validate();
  return out;
}

Dataset target_encode(const Dataset& ds_train, const Dataset& ds_apply) {
  if (!ds_train.has_outcome) throw std::runtime_error("target_encode: training outcomes required");
  if (ds_train.n_cat() != ds_apply.n_cat() || ds_train.n_cont() != ds_apply.n_cont()) {
    throw std::runtime_error("target_encode: datasets do not share a schema");
  }
  if (ds_train.n_cat() == 0) return ds_apply;

  const double global_mean =
      std::accumulate(ds_train.y.begin(), ds_train.y.end(), 0.0) / ds_train.n;

  Dataset out;
  out.n = ds_apply.n;
  out.y = ds_apply.y;
  out.has_outcome = ds_apply.has_outcome;
  for (int c : ds_apply.schema.continuous_cols()) out.schema.columns.push_back(ds_apply.schema.columns[c]);
  out.x_cont = ds_apply.x_cont;
  out.cont_ranges = ds_apply.cont_ranges;
  out.scaled_cutpoints = ds_apply.scaled_cutpoints;

  auto cat_cols = ds_train.schema.categorical_cols();
  for (int j = 0; j < ds_train.n_cat(); ++j) {
    const ColumnSpec& col = ds_train.schema.columns[cat_cols[j]];
    const int k = static_cast<int>(col.levels.size());
    std::vector<double> sum(k, 0.0);
    std::vector<int> count(k, 0);
    for (int i = 0; i < ds_train.n; ++i) {
      sum[ds_train.x_cat[j][i]] += ds_train.y[i];
      ++count[ds_train.x_cat[j][i]];
    }
    std::vector<double> code(k);
    for (int l = 0; l < k; ++l) code[l] = count[l] > 0 ? sum[l] / count[l] : global_mean;

    // Rescale by the range of the encoding over the training rows.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < ds_train.n; ++i) {
      lo = std::min(lo, code[ds_train.x_cat[j][i]]);
      hi = std::max(hi, code[ds_train.x_cat[j][i]]);
    }
    ContinuousRange rg{lo, hi, !(hi > lo)};

    ColumnSpec enc;
    enc.name = col.name + "#target";
    enc.kind = ColumnKind::Continuous;
    out.schema.columns.push_back(enc);
    std::vector<double> v(ds_apply.n);
    for (int i = 0; i < ds_apply.n; ++i) v[i] = rg.rescale(code[ds_apply.x_cat[j][i]]);
    out.x_cont.push_back(std::move(v));
    out.cont_ranges.push_back(rg);
    out.scaled_cutpoints.emplace_back();
  }
  out.schema.validate();
  out.validate();
  return out;
}

Dataset subset_rows(const Dataset& ds, const std::vector<int>& rows) {
  Dataset out;
  out.schema = ds.schema;
  out.n = static_cast<int>(rows.size());
  out.has_outcome = ds.has_outcome;
  out.cont_ranges = ds.cont_ranges;
  out.scaled_cutpoints = ds.scaled_cutpoints;
  out.x_cont.resize(ds.n_cont());
  out.x_cat.resize(ds.n_cat());
  for (int r : rows) {
    if (r < 0 || r >= ds.n) throw std::runtime_error("subset_rows: index out of range");
  }
  for (int j = 0; j < ds.n_cont(); ++j) {
    out.x_cont[j].reserve(rows.size());
    for (int r : rows) out.x_cont[j].push_back(ds.x_cont[j][r]);
  }
  for (int j = 0; j < ds.n_cat(); ++j) {
    out.x_cat[j].reserve(rows.size());
    for (int r : rows) out.x_cat[j].push_back(ds.x_cat[j][r]);
  }
  if (ds.has_outcome) {
    out.y.reserve(rows.size());
    for (int r : rows) out.y.push_back(ds.y[r]);
  }
  out.validate();
  return out;
}

std::vector<Fold> make_folds(const Dataset& ds, const FoldScheme& scheme, std::uint64_t seed) {
  std::vector<Fold> folds;
  if (scheme.kind == FoldScheme::RandomSplit) {
    if (!(scheme.train_frac > 0.0 && scheme.train_frac < 1.0)) {
      throw std::runtime_error("make_folds: train_frac must be in (0,1)");
    }
    Rng rng(seed);
    std::vector<int> idx(ds.n);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = ds.n - 1; i > 0; --i) {
      std::swap(idx[i], idx[rng.uniform_int(i + 1)]);
    }
    int n_train = static_cast<int>(std::floor(scheme.train_frac * ds.n));
    Fold f;
    f.train.assign(idx.begin(), idx.begin() + n_train);
    f.test.assign(idx.begin() + n_train, idx.end());
    std::sort(f.train.begin(), f.train.end());
    std::sort(f.test.begin(), f.test.end());
    if (f.train.empty()) throw std::runtime_error("make_folds: empty train set");
    if (f.test.empty()) throw std::runtime_error("make_folds: empty test set");
    folds.push_back(std::move(f));
  } else {
    if (scheme.column < 0 || scheme.column >= ds.n_cat()) {
      throw std::runtime_error("make_folds: leave_one_level_out column is not categorical");
    }
    auto cat_cols = ds.schema.categorical_cols();
    const ColumnSpec& col = ds.schema.columns[cat_cols[scheme.column]];
    for (std::size_t l = 0; l < col.levels.size(); ++l) {
      Fold f;
      for (int i = 0; i < ds.n; ++i) {
        (ds.x_cat[scheme.column][i] == static_cast<int>(l) ? f.test : f.train).push_back(i);
      }
      if (f.test.empty()) {
        throw std::runtime_error("make_folds: fold for level '" + col.levels[l] + "' is empty");
      }
      if (f.train.empty()) {
        throw std::runtime_error("make_folds: training set for level '" + col.levels[l] +
                                 "' is empty");
      }
      folds.push_back(std::move(f));
    }
  }
  return folds;
}

}  // namespace netbart
