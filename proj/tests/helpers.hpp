#pragma once

#include <cmath>
#include <initializer_list>
#include <vector>

#include "oracles.hpp"
#include "pisim/linalg.hpp"

namespace testing_support {

using pisim::Complex;
using pisim::ComplexMat;

inline const double kRoot3Half = std::sqrt(3.0) / 2.0;
inline const double kInvRoot2 = 1.0 / std::sqrt(2.0);

inline ComplexMat mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto r = static_cast<pisim::Index>(rows.size());
  const auto c = r == 0 ? 0 : static_cast<pisim::Index>(rows.begin()->size());
  ComplexMat m(r, c);
  pisim::Index i = 0;
  for (const auto& row : rows) {
    pisim::Index j = 0;
    for (Complex v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

// First matrix of the two-matrix example: a rank-one partial isometry.
inline ComplexMat pi_example() { return mat({{0.0, kRoot3Half}, {0.0, 0.5}}); }
// Second matrix of the example: similar to the first, not a partial isometry.
inline ComplexMat diag_example() { return mat({{0.0, 0.0}, {0.0, 0.5}}); }

inline ComplexMat from_int(const oracle::IntMatrix& m) {
  ComplexMat out(static_cast<pisim::Index>(m.size()), static_cast<pisim::Index>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      out(static_cast<pisim::Index>(i), static_cast<pisim::Index>(j)) =
          static_cast<double>(m[i][j]);
    }
  }
  return out;
}

inline std::vector<std::vector<Complex>> to_rows(const ComplexMat& m) {
  std::vector<std::vector<Complex>> rows(static_cast<std::size_t>(m.rows()));
  for (pisim::Index i = 0; i < m.rows(); ++i) {
    for (pisim::Index j = 0; j < m.cols(); ++j) rows[static_cast<std::size_t>(i)].push_back(m(i, j));
  }
  return rows;
}

}  // namespace testing_support
