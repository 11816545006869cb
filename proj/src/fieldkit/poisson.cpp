#include "offdiag/fieldkit/poisson.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <cmath>

namespace offdiag {

double poisson_residual(const PoissonResult& sol, const Field2Fn& rhs, const Rect& d) {
  double i1 = 1.0 / (d.h1() * d.h1()), i2 = 1.0 / (d.h2() * d.h2());
  double worst = 0.0;
  for (int i = 1; i < d.n1 - 1; ++i) {
    for (int j = 1; j < d.n2 - 1; ++j) {
      double lap = (sol.at(d, i - 1, j) - 2 * sol.at(d, i, j) + sol.at(d, i + 1, j)) * i1 +
                   (sol.at(d, i, j - 1) - 2 * sol.at(d, i, j) + sol.at(d, i, j + 1)) * i2;
      worst = std::max(worst, std::fabs(lap - rhs(d.x1(i), d.x2(j))));
    }
  }
  return worst;
}

PoissonResult solve_poisson_2d(const Field2Fn& rhs, const Rect& d, const Field2Fn& boundary,
                               const PoissonOptions& opts) {
  if (d.n1 < 3 || d.n2 < 3) throw PoissonError("poisson grid needs at least 3 nodes per axis");
  PoissonResult out;
  out.psi.assign(static_cast<std::size_t>(d.n1) * d.n2, 0.0);
  auto node = [&](int i, int j) -> double& { return out.psi[static_cast<std::size_t>(i) * d.n2 + j]; };
  for (int i = 0; i < d.n1; ++i) {
    node(i, 0) = boundary(d.x1(i), d.x2(0));
    node(i, d.n2 - 1) = boundary(d.x1(i), d.x2(d.n2 - 1));
  }
  for (int j = 0; j < d.n2; ++j) {
    node(0, j) = boundary(d.x1(0), d.x2(j));
    node(d.n1 - 1, j) = boundary(d.x1(d.n1 - 1), d.x2(j));
  }
  const int m1 = d.n1 - 2, m2 = d.n2 - 2;
  const int N = m1 * m2;
  double i1 = 1.0 / (d.h1() * d.h1()), i2 = 1.0 / (d.h2() * d.h2());
  auto unk = [&](int i, int j) { return (i - 1) * m2 + (j - 1); };

  // Assemble the negated operator so the matrix is symmetric positive definite.
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(N) * 5);
  Eigen::VectorXd b(N);
  for (int i = 1; i <= m1; ++i) {
    for (int j = 1; j <= m2; ++j) {
      int r = unk(i, j);
      trip.emplace_back(r, r, 2 * i1 + 2 * i2);
      double br = -rhs(d.x1(i), d.x2(j));
      const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
      for (int q = 0; q < 4; ++q) {
        int ii = i + di[q], jj = j + dj[q];
        double w = q < 2 ? i1 : i2;
        if (ii == 0 || jj == 0 || ii == d.n1 - 1 || jj == d.n2 - 1) {
          br += w * node(ii, jj);
        } else {
          trip.emplace_back(r, unk(ii, jj), -w);
        }
      }
      b(r) = br;
    }
  }
  Eigen::SparseMatrix<double> A(N, N);
  A.setFromTriplets(trip.begin(), trip.end());

  Eigen::VectorXd x;
  if (d.n1 * d.n2 <= opts.direct_limit) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    if (ldlt.info() != Eigen::Success) throw PoissonError("factorization failed");
    x = ldlt.solve(b);
    // One step of iterative refinement keeps the residual at round-off level.
    Eigen::VectorXd r = b - A * x;
    x += ldlt.solve(r);
    out.method = "direct";
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
    cg.setMaxIterations(opts.max_iterations);
    cg.setTolerance(1e-15);
    cg.compute(A);
    x = cg.solve(b);
    out.iterations = static_cast<int>(cg.iterations());
    out.method = "cg";
  }
  for (int i = 1; i <= m1; ++i)
    for (int j = 1; j <= m2; ++j) node(i, j) = x(unk(i, j));
  out.residual = poisson_residual(out, rhs, d);
  if (!(out.residual < opts.tolerance))
    throw PoissonError("poisson solve did not converge: residual " + std::to_string(out.residual) + " after " +
                       std::to_string(out.iterations) + " iterations");
  return out;
}

}  // namespace offdiag
