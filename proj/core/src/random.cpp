// Copyright 2026 The qmeas Authors
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

#include "qmeas/random.hpp"

#include <algorithm>
#include <vector>

namespace qmeas {

CMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

CMatrix random_hermitian(Eigen::Index dim, Rng& rng) {
  const CMatrix g = random_gaussian(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

CMatrix random_unitary(Eigen::Index dim, Rng& rng) {
  const CMatrix g = random_gaussian(dim, dim, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  // Fix the phase convention so the distribution does not depend on the QR
  // sign choices.
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

CMatrix random_psd(Eigen::Index dim, Rng& rng) {
  const CMatrix g = random_gaussian(dim, dim, rng);
  return g * g.adjoint() / static_cast<double>(dim);
}

DensityOperator random_density(Eigen::Index dim, Rng& rng) {
  CMatrix p = random_psd(dim, rng);
  p /= p.trace().real();
  return DensityOperator(std::move(p));
}

MicroState random_micro_state(int levels, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector c(levels);
  for (int i = 0; i < levels; ++i) {
    c[i] = Complex(normal(rng), normal(rng));
  }
  c /= c.norm();
  return MicroState(std::move(c));
}

std::vector<Projector> random_cell_partition(Eigen::Index dim, int cells, Rng& rng) {
  if (cells <= 0 || dim < cells) {
    throw ValidationError("random_cell_partition: need dim >= cells >= 1");
  }
  // Random nonempty group sizes summing to dim.
  std::vector<Eigen::Index> sizes(static_cast<std::size_t>(cells), 1);
  std::uniform_int_distribution<int> pick(0, cells - 1);
  for (Eigen::Index extra = dim - cells; extra > 0; --extra) {
    sizes[static_cast<std::size_t>(pick(rng))] += 1;
  }
  const CMatrix frame = random_unitary(dim, rng);
  std::vector<Projector> cells_out;
  cells_out.reserve(static_cast<std::size_t>(cells));
  Eigen::Index offset = 0;
  for (int a = 0; a < cells; ++a) {
    const CMatrix block = frame.middleCols(offset, sizes[static_cast<std::size_t>(a)]);
    cells_out.emplace_back(CMatrix(block * block.adjoint()));
    offset += sizes[static_cast<std::size_t>(a)];
  }
  return cells_out;
}

InstrumentModel random_instrument(Eigen::Index dim, int levels, Rng& rng) {
  CMatrix k = random_hermitian(dim, rng);
  std::vector<CMatrix> couplings;
  couplings.reserve(static_cast<std::size_t>(levels));
  for (int r = 0; r < levels; ++r) {
    couplings.push_back(random_hermitian(dim, rng));
  }
  return InstrumentModel(std::move(k), std::move(couplings),
                         random_cell_partition(dim, levels, rng));
}

}  // namespace qmeas
