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

#include "editdiff/rows.h"

#include <cmath>

#include "editdiff/errors.h"

namespace editdiff {

void RowMatrix::check_normalized(double tol) const {
  for (std::size_t r = 0; r < rows_; ++r) {
    double sum = 0.0;
    for (double p : row(r)) {
      if (!(p >= 0.0)) throw ShapeError("probability row has a negative or NaN entry");
      sum += p;
    }
    if (std::abs(sum - 1.0) > tol) {
      throw ShapeError("probability row " + std::to_string(r) + " sums to " +
                       std::to_string(sum));
    }
  }
}

TokenId argmax(std::span<const double> row) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < row.size(); ++i) {
    if (row[i] > row[best]) best = i;
  }
  return static_cast<TokenId>(best);
}

double max_entry(std::span<const double> row) {
  double best = row.empty() ? 0.0 : row[0];
  for (double p : row) best = p > best ? p : best;
  return best;
}

}  // namespace editdiff
