// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include "romscat/spectral_oracle.hpp"

#include <cmath>
#include <sstream>

#include "romscat/error.hpp"

namespace romscat {

DenseOperator::DenseOperator(const Matrix& A) : A_(A) {
  if (A.rows() != A.cols()) throw ArgumentError("dense operator must be square");
  if (A.rows() > kMaxDof) {
    std::ostringstream msg;
    msg << "dense oracle refuses " << A.rows() << " dof (limit " << kMaxDof << ")";
    throw NumericalError(msg.str());
  }
  symmetrize(A_);
  Eigen::SelfAdjointEigenSolver<Matrix> es(A_);
  if (es.info() != Eigen::Success) throw NumericalError("dense eigendecomposition failed");
  values_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
  const double top = values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0;
  if (values_.size() && values_[0] < -1e-10 * top) {
    std::ostringstream msg;
    msg << "operator has negative eigenvalue " << values_[0];
    throw NumericalError(msg.str());
  }
}

DenseOperator::DenseOperator(const SparseMatrix& A) : DenseOperator(Matrix(A)) {}

Matrix DenseOperator::apply_function(const std::function<double(double)>& f) const {
  Vector fv(values_.size());
  for (Eigen::Index i = 0; i < values_.size(); ++i) fv[i] = f(std::max(values_[i], 0.0));
  Matrix out = vectors_ * fv.asDiagonal() * vectors_.transpose();
  symmetrize(out);
  return out;
}

Matrix dense_propagator(const DenseOperator& A, double tau) {
  return A.apply_function([tau](double lam) { return std::cos(tau * std::sqrt(lam)); });
}

std::vector<Matrix> chebyshev_snapshots(const Matrix& P, const Matrix& b, int count) {
  if (P.rows() != P.cols() || P.cols() != b.rows()) throw ArgumentError("dimension mismatch");
  std::vector<Matrix> u;
  if (count < 1) return u;
  u.push_back(b);
  if (count > 1) u.push_back(P * b);
  for (int j = 2; j < count; ++j) u.push_back(2.0 * (P * u[j - 1]) - u[j - 2]);
  return u;
}

DataCube chebyshev_data(const Matrix& P, const Matrix& b, int nsteps, double weight, double tau) {
  Matrix Ps = P;
  symmetrize(Ps);
  const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(Ps, Eigen::EigenvaluesOnly).eigenvalues();
  if (ev.size() && ev.cwiseAbs().maxCoeff() > 1.0 + 1e-8) {
    throw NumericalError("chebyshev_data needs ||P||_2 <= 1");
  }
  DataCube d(static_cast<int>(b.cols()), nsteps, tau);
  const auto u = chebyshev_snapshots(P, b, nsteps);
  for (int j = 0; j < nsteps; ++j) {
    d.D[j] = weight * (b.transpose() * u[j]);
    symmetrize(d.D[j]);
  }
  return d;
}

DataCube oracle_born_data(const DataPipeline& pipeline, const Field& q, double eps) {
  if (!(eps > 0.0)) throw ArgumentError("Born step must be positive");
  const DataCube d0 = pipeline(Field(q.grid(), 0.0));
  Field qe = q;
  for (std::size_t i = 0; i < qe.size(); ++i) qe[i] *= eps;
  const DataCube de = pipeline(qe);
  if (de.nsteps != d0.nsteps || de.m != d0.m) throw ArgumentError("pipeline output shape changed");
  DataCube out = d0;
  for (int j = 0; j < d0.nsteps; ++j) out.D[j] = d0.D[j] + (de.D[j] - d0.D[j]) / eps;
  return out;
}

}  // namespace romscat
