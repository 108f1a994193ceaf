// Copyright 2026 The editdiff Authors
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

#ifndef EDITDIFF_ROWS_H_
#define EDITDIFF_ROWS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "editdiff/vocab.h"

namespace editdiff {

// Dense row-major matrix of per-position probability rows over the vocab.
class RowMatrix {
 public:
  RowMatrix() = default;
  RowMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<double> row(std::size_t r) {
    return std::span<double>(data_).subspan(r * cols_, cols_);
  }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * cols_, cols_);
  }
  double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> data() const { return data_; }

  // Throws ShapeError unless every row sums to 1 within tol and has no
  // negative entries.
  void check_normalized(double tol = 1e-9) const;

  friend bool operator==(const RowMatrix&, const RowMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Index of the largest entry; ties resolve to the lowest index.
TokenId argmax(std::span<const double> row);
double max_entry(std::span<const double> row);

}  // namespace editdiff

#endif  // EDITDIFF_ROWS_H_
