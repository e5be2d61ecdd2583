// Copyright The romscat Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>
#include <sstream>

#include "romscat/inversion.hpp"
#include "romscat/parallel.hpp"

namespace romscat {

Vector bidiagonal_blocks(const Matrix& L, int m) {
  const int n = static_cast<int>(L.rows()) / m;
  const int mm = m * m;
  Vector v((2 * n - 1) * mm);
  int k = 0;
  for (int j = 0; j < n; ++j) {
    v.segment(k, mm) = L.block(j * m, j * m, m, m).reshaped();
    k += mm;
  }
  for (int j = 0; j + 1 < n; ++j) {
    v.segment(k, mm) = L.block((j + 1) * m, j * m, m, m).reshaped();
    k += mm;
  }
  return v;
}

namespace {

Field coefficients_to_field(const SearchBasis& basis, const Vector& c) {
  return basis.evaluate(std::span<const double>(c.data(), static_cast<std::size_t>(c.size())));
}

template <class F>
Vector guarded(const Vector& c, F&& f) {
  if (!c.allFinite()) throw EvaluationError("non-finite coefficients", c);
  try {
    return f();
  } catch (const EvaluationError&) {
    throw;
  } catch (const Error& e) {
    throw EvaluationError(std::string("residual evaluation failed: ") + e.what(), c);
  }
}

}  // namespace

ResidualFunction rom_residual(const ForwardModel& model, const SearchBasis& basis, const Matrix& L_data,
                              double rel_tol) {
  const Vector target = bidiagonal_blocks(L_data, model.m());
  return [&model, &basis, target, rel_tol](const Vector& c) {
    return guarded(c, [&] {
      const Rom rom = rom_build(model.data(coefficients_to_field(basis, c)), rel_tol);
      return Vector(target - bidiagonal_blocks(rom.L, rom.m));
    });
  };
}

ResidualFunction data_residual(const ForwardModel& model, const SearchBasis& basis, const DataCube& data) {
  const int m = data.m;
  const int mm = m * m;
  Vector target(static_cast<Eigen::Index>(data.nsteps) * mm);
  for (int j = 0; j < data.nsteps; ++j) target.segment(j * mm, mm) = data.D[j].reshaped();
  return [&model, &basis, target, mm](const Vector& c) {
    return guarded(c, [&] {
      const DataCube sim = model.data(coefficients_to_field(basis, c));
      Vector r = target;
      for (int j = 0; j < sim.nsteps; ++j) r.segment(j * mm, mm) -= sim.D[j].reshaped();
      return r;
    });
  };
}

double objective_value(const Vector& residual) { return 0.5 * residual.squaredNorm(); }

Matrix finite_difference_jacobian(const ResidualFunction& f, const Vector& x, const Vector& r0, double step) {
  if (!(step > 0.0)) throw ArgumentError("finite difference step must be positive");
  Matrix J(r0.size(), x.size());
  parallel_for(static_cast<int>(x.size()), [&](int k) {
    Vector xk = x;
    xk[k] += step;
    J.col(k) = (f(xk) - r0) / step;
  });
  return J;
}

Vector jacobian_conditioning_report(const Matrix& J) {
  Eigen::BDCSVD<Matrix> svd(J);
  return svd.singularValues();
}

double condition_number(const Vector& s) {
  if (s.size() == 0) return 1.0;
  const double lo = s.minCoeff();
  return lo > 0.0 ? s.maxCoeff() / lo : std::numeric_limits<double>::infinity();
}

GaussNewtonResult gauss_newton(const ResidualFunction& f, const Vector& x0, const GaussNewtonOptions& opts) {
  if (opts.max_iter < 0 || opts.max_halvings < 0) throw ArgumentError("invalid Gauss-Newton options");
  if (!(opts.svd_rel_cutoff >= 0.0 && opts.svd_rel_cutoff < 1.0)) {
    throw ArgumentError("svd_rel_cutoff must lie in [0, 1)");
  }
  GaussNewtonResult out;
  GaussNewtonReport& rep = out.report;
  Vector x = x0;
  Vector r = f(x);
  double F = objective_value(r);
  rep.iterates.push_back(x);
  rep.objectives.push_back(F);
  rep.status = "max_iter";
  for (int it = 0; it < opts.max_iter; ++it) {
    if (F == 0.0) {
      rep.status = "converged";
      break;
    }
    const Matrix J = finite_difference_jacobian(f, x, r, opts.fd_step);
    Eigen::BDCSVD<Matrix> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const double smax = sv.size() ? sv[0] : 0.0;
    const double cut = opts.svd_rel_cutoff > 0.0
                           ? opts.svd_rel_cutoff * smax
                           : std::numeric_limits<double>::epsilon() * std::max(J.rows(), J.cols()) * smax;
    int rank = 0;
    while (rank < sv.size() && sv[rank] > cut) ++rank;
    Vector step = Vector::Zero(x.size());
    if (rank > 0) {
      const Vector coef = (svd.matrixU().leftCols(rank).transpose() * r).cwiseQuotient(sv.head(rank));
      step = -(svd.matrixV().leftCols(rank) * coef);
    }
    rep.conditions.push_back(condition_number(sv));
    rep.ranks.push_back(rank);
    rep.singular_values.push_back(sv);

    const double xnorm = x.norm();
    if (step.norm() <= opts.step_tol * xnorm || step.norm() == 0.0) {
      rep.status = "converged";
      break;
    }
    bool accepted = false;
    double alpha = 1.0;
    Vector x_new;
    Vector r_new;
    double F_new = F;
    for (int k = 0; k <= opts.max_halvings; ++k, alpha *= 0.5) {
      x_new = x + alpha * step;
      try {
        r_new = f(x_new);
      } catch (const EvaluationError&) {
        continue;
      }
      F_new = objective_value(r_new);
      if (F_new < F) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      rep.status = "stalled";
      break;
    }
    const double snorm = (x_new - x).norm();
    x = x_new;
    r = r_new;
    F = F_new;
    rep.iterates.push_back(x);
    rep.objectives.push_back(F);
    rep.step_norms.push_back(snorm);
    if (snorm <= opts.step_tol * x.norm()) {
      rep.status = "converged";
      break;
    }
  }
  out.coeffs = x;
  return out;
}

GaussNewtonResult gauss_newton_rom(const ForwardModel& model, const DataCube& data, const SearchBasis& basis,
                                   const GaussNewtonOptions& opts, double rel_tol) {
  const Rom rom = rom_build(data, rel_tol);
  const ResidualFunction f = rom_residual(model, basis, rom.L, rel_tol);
  return gauss_newton(f, Vector::Zero(basis.size()), opts);
}

GaussNewtonResult ls_rtm(const ForwardModel& model, const DataCube& data, const SearchBasis& basis,
                         GaussNewtonOptions opts) {
  const ResidualFunction f = data_residual(model, basis, data);
  return gauss_newton(f, Vector::Zero(basis.size()), opts);
}

std::string GaussNewtonReport::to_text() const {
  std::ostringstream os;
  os.precision(10);
  os << "status = " << status << "\n";
  os << "initial_objective = " << (objectives.empty() ? 0.0 : objectives.front()) << "\n";
  for (std::size_t k = 0; k < ranks.size(); ++k) {
    os << "\n[iteration " << k + 1 << "]\n";
    if (k + 1 < objectives.size()) {
      os << "objective = " << objectives[k + 1] << "\n";
      os << "step_norm = " << step_norms[k] << "\n";
    } else {
      os << "objective = " << objectives.back() << "\n";
      os << "step_norm = 0\n";
    }
    os << "rank = " << ranks[k] << "\n";
    os << "condition = " << conditions[k] << "\n";
  }
  return os.str();
}

}  // namespace romscat
