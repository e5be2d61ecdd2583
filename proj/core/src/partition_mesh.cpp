// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <sstream>

#include "romscat/inversion.hpp"
#include "romscat/simplex.hpp"

namespace romscat {

namespace {

constexpr double kSelectThreshold = 1e-8;

bool same_column(const Matrix& psi, int a, int b) {
  const double scale = std::max(psi.col(a).cwiseAbs().maxCoeff(), psi.col(b).cwiseAbs().maxCoeff());
  return (psi.col(a) - psi.col(b)).cwiseAbs().maxCoeff() <= 1e-12 * std::max(scale, 1e-300);
}

}  // namespace

PartitionLine solve_partition_line(const Matrix& psi, double tol) {
  const int P = static_cast<int>(psi.rows());
  const int J = static_cast<int>(psi.cols());
  if (P < 1 || J < 1) throw ArgumentError("partition line needs samples and candidates");
  if (!(tol > 0.0 && tol < 1.0)) throw ArgumentError("partition tolerance must lie in (0, 1)");

  // Variables (alpha+, alpha-) >= 0; two inequalities per sample.
  Matrix A(2 * P, 2 * J);
  A << psi, -psi, -psi, psi;
  const Vector c = Vector::Ones(2 * J);
  double t = tol;
  for (int attempt = 0; attempt <= 3; ++attempt, t *= 1.5) {
    Vector b(2 * P);
    b.head(P).setConstant(1.0 + t);
    b.tail(P).setConstant(-(1.0 - t));
    const LinearProgramResult lp = solve_linear_program(c, A, b);
    if (lp.status != LinearProgramResult::Status::Optimal) continue;
    PartitionLine line;
    line.alpha = lp.x.head(J) - lp.x.tail(J);
    line.tol_used = t;
    for (int j = 0; j < J; ++j) {
      if (std::abs(line.alpha[j]) <= kSelectThreshold) continue;
      bool duplicate = false;
      for (int k : line.selected) duplicate = duplicate || same_column(psi, k, j);
      if (duplicate) {
        // Fold the weight into the lower-index copy.
        for (int k : line.selected) {
          if (same_column(psi, k, j)) {
            line.alpha[k] += line.alpha[j];
            break;
          }
        }
        line.alpha[j] = 0.0;
      } else {
        line.selected.push_back(j);
      }
    }
    line.residual = (Vector::Ones(P) - psi * line.alpha).cwiseAbs().maxCoeff();
    // The l1 optimum sits on the tolerance boundary; a least-squares refit on
    // the selected support is kept when it fits at least as well.
    if (!line.selected.empty()) {
      Matrix sub(P, static_cast<Eigen::Index>(line.selected.size()));
      for (std::size_t k = 0; k < line.selected.size(); ++k) sub.col(k) = psi.col(line.selected[k]);
      const Vector refit = sub.colPivHouseholderQr().solve(Vector::Ones(P));
      const double res = (Vector::Ones(P) - sub * refit).cwiseAbs().maxCoeff();
      if (res <= line.residual) {
        line.alpha.setZero();
        for (std::size_t k = 0; k < line.selected.size(); ++k) line.alpha[line.selected[k]] = refit[k];
        line.residual = res;
      }
    }
    return line;
  }
  std::ostringstream msg;
  msg << "partition of unity infeasible with tolerance up to " << t / 1.5 << " (" << J
      << " candidates, " << P << " samples, max Psi " << psi.maxCoeff() << ")";
  throw NumericalError(msg.str());
}

std::vector<double> range_line_depths(double z_first, double z_last, double spacing) {
  if (!(spacing > 0.0)) throw ArgumentError("range line spacing must be positive");
  std::vector<double> z;
  for (int k = 0;; ++k) {
    const double v = z_first + k * spacing;
    if (v > z_last + 1e-12 * std::max(1.0, std::abs(z_last))) break;
    z.push_back(v);
  }
  return z;
}

SearchBasis partition_of_unity_mesh(const Grid2D& grid, const std::vector<RangeLinePsf>& lines, double tol,
                                    double lateral_pad, MeshReport* report) {
  if (lines.empty()) throw ArgumentError("partition mesh needs at least one range line");
  MeshReport rep;
  std::vector<double> ranges;
  std::vector<std::vector<double>> rows;
  for (const auto& line : lines) {
    if (line.xs.empty() || line.xs.size() != line.psf.size()) {
      throw ArgumentError("range line needs one PSF per candidate");
    }
    const int iz = std::clamp(static_cast<int>(std::lround((line.z - grid.origin_z) / grid.h)), 0, grid.nz - 1);
    const auto [lo_it, hi_it] = std::minmax_element(line.xs.begin(), line.xs.end());
    std::vector<int> cols;
    for (int ix = 0; ix < grid.nx; ++ix) {
      const double x = grid.x(ix);
      if (grid.nx == 1 || (x >= *lo_it - 1e-12 && x <= *hi_it + 1e-12)) cols.push_back(ix);
    }
    Matrix psi(static_cast<Eigen::Index>(cols.size()), static_cast<Eigen::Index>(line.xs.size()));
    for (std::size_t j = 0; j < line.xs.size(); ++j) {
      for (std::size_t p = 0; p < cols.size(); ++p) psi(p, j) = line.psf[j].psi.at(cols[p], iz);
    }
    const double scale = psi.maxCoeff();
    if (!(scale > 0.0)) {
      std::ostringstream msg;
      msg << "point spread functions vanish on range line z = " << line.z;
      throw NumericalError(msg.str());
    }
    PartitionLine sel = solve_partition_line(psi / scale, tol);
    std::vector<double> xs;
    for (int j : sel.selected) xs.push_back(line.xs[j]);
    ranges.push_back(line.z);
    rows.push_back(std::move(xs));
    rep.lines.push_back(std::move(sel));
  }
  if (report) *report = rep;
  if (grid.nx == 1) return SearchBasis::range_hats(grid, ranges);
  if (!(lateral_pad > 0.0)) lateral_pad = grid.h * grid.nx;
  return SearchBasis::from_rows(grid, ranges, rows, lateral_pad);
}

}  // namespace romscat
