// Copyright 2026 The qifdyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qif/refinement.hpp"

#include <cassert>
#include <vector>

#include "qif/errors.hpp"

namespace qif {

namespace {

// Exact phase-1 simplex for A v = b, v >= 0, with b >= 0. Returns a feasible
// v or nullopt. Bland's rule throughout, so no cycling and no tolerances.
std::optional<std::vector<Rat>> solve_feasibility(
    const std::vector<std::vector<Rat>>& a, const std::vector<Rat>& b, size_t n) {
  const size_t m = a.size();
  const size_t total = n + m;  // original variables + artificials

  // Tableau rows 0..m-1 hold [A | I | b]; row m holds the phase-1 objective.
  std::vector<std::vector<Rat>> t(m + 1, std::vector<Rat>(total + 1, Rat(0)));
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1;
    t[i][total] = b[i];
  }
  // Reduced costs: r_j = -sum_i A[i][j] for originals, 0 for artificials.
  for (size_t j = 0; j < n; ++j) {
    Rat s = 0;
    for (size_t i = 0; i < m; ++i) s += a[i][j];
    t[m][j] = -s;
  }
  Rat obj = 0;
  for (size_t i = 0; i < m; ++i) obj += b[i];
  t[m][total] = -obj;

  std::vector<size_t> basis(m);
  for (size_t i = 0; i < m; ++i) basis[i] = n + i;

  for (;;) {
    // Entering: lowest-index column with negative reduced cost.
    size_t enter = total;
    for (size_t j = 0; j < total; ++j) {
      if (t[m][j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == total) break;

    // Leaving: minimum ratio, ties broken by lowest basis index.
    size_t leave = m;
    Rat best_ratio = 0;
    for (size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rat ratio = t[i][total] / t[i][enter];
      if (leave == m || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == m) {
      // Phase-1 objective is bounded below by 0, so this cannot happen.
      fail(Errc::InvalidArgument, "unbounded phase-1 simplex");
    }

    Rat pivot = t[leave][enter];
    for (size_t j = 0; j <= total; ++j) t[leave][j] /= pivot;
    for (size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      Rat factor = t[i][enter];
      if (factor == 0) continue;
      for (size_t j = 0; j <= total; ++j) t[i][j] -= factor * t[leave][j];
    }
    basis[leave] = enter;
  }

  if (-t[m][total] != 0) return std::nullopt;  // leftover artificial mass

  std::vector<Rat> v(n, Rat(0));
  for (size_t i = 0; i < m; ++i) {
    if (basis[i] < n) v[basis[i]] = t[i][total];
  }
  return v;
}

}  // namespace

std::optional<Channel> refinement_witness(const Channel& c, const Channel& d) {
  if (c.rows() != d.rows()) {
    fail(Errc::ShapeMismatch, "refinement: channels must share the same input labels");
  }
  const size_t nx = c.row_count();
  const size_t ny = c.col_count();
  const size_t nz = d.col_count();

  // Forced zeros: R[y][z] = 0 whenever some x has c[x][y] > 0 but d[x][z] = 0.
  std::vector<bool> col_used(ny, false);
  for (size_t y = 0; y < ny; ++y) {
    for (size_t x = 0; x < nx; ++x) {
      if (c.at(x, y) > 0) {
        col_used[y] = true;
        break;
      }
    }
  }
  std::vector<std::vector<bool>> allowed(ny, std::vector<bool>(nz, true));
  for (size_t y = 0; y < ny; ++y) {
    for (size_t z = 0; z < nz; ++z) {
      for (size_t x = 0; x < nx; ++x) {
        if (c.at(x, y) > 0 && d.at(x, z) == 0) {
          allowed[y][z] = false;
          break;
        }
      }
    }
  }

  // Variables: allowed entries of rows whose c-column is feasible. Rows over
  // infeasible outputs of c are unconstrained and patched afterwards.
  std::vector<std::vector<int>> var_id(ny, std::vector<int>(nz, -1));
  size_t n = 0;
  for (size_t y = 0; y < ny; ++y) {
    if (!col_used[y]) continue;
    bool any = false;
    for (size_t z = 0; z < nz; ++z) {
      if (allowed[y][z]) {
        var_id[y][z] = static_cast<int>(n++);
        any = true;
      }
    }
    if (!any) return std::nullopt;  // row sum 1 is unreachable
  }

  std::vector<std::vector<Rat>> a;
  std::vector<Rat> b;
  // cascade equalities, only where d is positive (zeros are already forced)
  for (size_t x = 0; x < nx; ++x) {
    for (size_t z = 0; z < nz; ++z) {
      if (d.at(x, z) == 0) continue;
      std::vector<Rat> row(n, Rat(0));
      bool any = false;
      for (size_t y = 0; y < ny; ++y) {
        if (c.at(x, y) == 0 || var_id[y][z] < 0) continue;
        row[var_id[y][z]] = c.at(x, y);
        any = true;
      }
      if (!any) return std::nullopt;
      a.push_back(std::move(row));
      b.push_back(d.at(x, z));
    }
  }
  // row-stochasticity
  for (size_t y = 0; y < ny; ++y) {
    if (!col_used[y]) continue;
    std::vector<Rat> row(n, Rat(0));
    for (size_t z = 0; z < nz; ++z) {
      if (var_id[y][z] >= 0) row[var_id[y][z]] = 1;
    }
    a.push_back(std::move(row));
    b.push_back(Rat(1));
  }

  auto solution = solve_feasibility(a, b, n);
  if (!solution.has_value()) return std::nullopt;

  std::vector<std::vector<Rat>> entries(ny, std::vector<Rat>(nz, Rat(0)));
  for (size_t y = 0; y < ny; ++y) {
    if (!col_used[y]) {
      entries[y][0] = 1;  // any stochastic row works for an infeasible output
      continue;
    }
    for (size_t z = 0; z < nz; ++z) {
      if (var_id[y][z] >= 0) entries[y][z] = (*solution)[var_id[y][z]];
    }
  }
  Channel witness(c.cols(), d.cols(), std::move(entries));
  assert(cascade(c, witness) == d);
  return witness;
}

}  // namespace qif
