// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "romscat/data_cube.hpp"
#include "romscat/error.hpp"
#include "romscat/forward_model.hpp"
#include "romscat/grid.hpp"
#include "romscat/linalg.hpp"
#include "romscat/rom.hpp"
#include "romscat/search_basis.hpp"

namespace romscat {

/// Orthonormal snapshots of the reference medium, V0 = U0 R0^{-1}.
struct ReferenceProjection {
  Matrix U0;  // grid cells x nm
  Matrix V0;  // grid cells x nm, h^d V0^T V0 = I
  DataCube data0;
  Rom rom0;
  double weight = 1.0;
};

ReferenceProjection reference_projection(const ForwardModel& model, double rel_tol = 0.0);

struct PsfField {
  double x = 0.0;
  double z = 0.0;
  Field psi;
  /// True when the bump support was cut by the grid boundary.
  bool clipped = false;
};

/// Reflectivity bump at (x, z): a radial hat of diameter `diameter` scaled so
/// its grid integral equals `amplitude`. In 1D the hat is along range only.
Field psf_bump(const Grid2D& grid, double x, double z, double diameter, double amplitude,
               bool* clipped = nullptr);

/// Psi(y) = || V0(y, :) (L(delta) - L(0)) ||_2 with delta = psf_bump(x, z, lambda / 2).
PsfField point_spread(const ReferenceProjection& ref, const ForwardModel& model, double x, double z,
                      double amplitude = 1.0, double rel_tol = 0.0);

/// Row-wise Euclidean norms of V0 dL, as a field.
Field psf_from_wave_factor(const ReferenceProjection& ref, const Grid2D& grid, const Matrix& dL);

/// Cross-range second moment about x of a field on the grid row nearest z.
/// With level > 0 only the main lobe counts: the contiguous run around the
/// row maximum where the field is at least level * maximum.
double cross_range_second_moment(const Field& f, double x, double z, double level = 0.5);

struct PartitionLine {
  std::vector<int> selected;
  Vector alpha;
  double residual = 0.0;  // max |1 - sum alpha_j Psi_j| on the samples
  double tol_used = 0.0;
};

/// min ||alpha||_1 subject to |1 - Psi alpha| <= tol, Psi (samples x
/// candidates). Infeasible problems are retried with tol * 1.5, up to three
/// times, then NumericalError.
PartitionLine solve_partition_line(const Matrix& psi, double tol);

/// PSFs of the candidate points on one range line.
struct RangeLinePsf {
  double z = 0.0;
  std::vector<double> xs;
  std::vector<PsfField> psf;
};

struct MeshReport {
  std::vector<PartitionLine> lines;
};

/// Search basis from per-line partition of unity selections. Samples lie on
/// the grid row nearest each line, between the extreme candidates.
SearchBasis partition_of_unity_mesh(const Grid2D& grid, const std::vector<RangeLinePsf>& lines,
                                    double tol = 0.02, double lateral_pad = 0.0,
                                    MeshReport* report = nullptr);

/// z_first, z_first + spacing, ... while <= z_last.
std::vector<double> range_line_depths(double z_first, double z_last, double spacing);

/// Evaluation failure carrying the coefficient vector that caused it.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, Vector coeffs) : Error(what), coeffs_(std::move(coeffs)) {}
  const Vector& coeffs() const { return coeffs_; }

 private:
  Vector coeffs_;
};

using ResidualFunction = std::function<Vector(const Vector&)>;

/// Diagonal and sub-diagonal blocks of a block lower bidiagonal matrix, stacked.
Vector bidiagonal_blocks(const Matrix& L, int m);

/// coeffs -> blocks of L(data) - L(q^S).
ResidualFunction rom_residual(const ForwardModel& model, const SearchBasis& basis, const Matrix& L_data,
                              double rel_tol = 0.0);
/// coeffs -> stacked D_j - Dhat_j(q^S), j = 0..2n-1.
ResidualFunction data_residual(const ForwardModel& model, const SearchBasis& basis, const DataCube& data);

double objective_value(const Vector& residual);

struct GaussNewtonOptions {
  int max_iter = 5;
  double fd_step = 1e-4;
  double svd_rel_cutoff = 0.0;
  double step_tol = 1e-6;
  int max_halvings = 8;
};

struct GaussNewtonReport {
  std::vector<Vector> iterates;  // starting point first
  std::vector<double> objectives;
  std::vector<double> step_norms;
  std::vector<double> conditions;
  std::vector<int> ranks;
  std::vector<Vector> singular_values;
  std::string status;
  /// Human-readable, one section per iteration.
  std::string to_text() const;
};

struct GaussNewtonResult {
  Vector coeffs;
  GaussNewtonReport report;
};

/// Forward-difference Jacobian, columns evaluated in parallel.
Matrix finite_difference_jacobian(const ResidualFunction& f, const Vector& x, const Vector& r0,
                                  double step);

GaussNewtonResult gauss_newton(const ResidualFunction& f, const Vector& x0, const GaussNewtonOptions& opts);

GaussNewtonResult gauss_newton_rom(const ForwardModel& model, const DataCube& data, const SearchBasis& basis,
                                   const GaussNewtonOptions& opts = {}, double rel_tol = 0.0);

/// Baseline data fit. Pass raw or Born data; max_iter defaults to 1.
GaussNewtonResult ls_rtm(const ForwardModel& model, const DataCube& data, const SearchBasis& basis,
                         GaussNewtonOptions opts = {.max_iter = 1});

/// Singular values of J in descending order.
Vector jacobian_conditioning_report(const Matrix& J);
double condition_number(const Vector& singular_values);

}  // namespace romscat
