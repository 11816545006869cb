#pragma once
// Five-point Dirichlet solver for psi_11 + psi_22 = rhs on a rectangle.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace offdiag {

struct Rect {
  double x1lo = 0, x1hi = 1, x2lo = 0, x2hi = 1;
  int n1 = 17, n2 = 17;  // nodes per axis, boundary included

  double h1() const { return (x1hi - x1lo) / (n1 - 1); }
  double h2() const { return (x2hi - x2lo) / (n2 - 1); }
  double x1(int i) const { return x1lo + i * h1(); }
  double x2(int j) const { return x2lo + j * h2(); }
};

struct PoissonOptions {
  int direct_limit = 256 * 256;  // node count up to which the direct solve is used
  int max_iterations = 20000;
  double tolerance = 1e-10;      // max-norm of the discrete residual
};

struct PoissonResult {
  std::vector<double> psi;  // n1 * n2 values, x2 fastest
  double residual = 0.0;
  int iterations = 0;
  std::string method;

  double at(const Rect& r, int i, int j) const { return psi[static_cast<std::size_t>(i) * r.n2 + j]; }
};

class PoissonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Field2Fn = std::function<double(double, double)>;

PoissonResult solve_poisson_2d(const Field2Fn& rhs, const Rect& domain, const Field2Fn& boundary,
                               const PoissonOptions& opts = {});

/// Max-norm of the discrete five-point residual over interior nodes.
double poisson_residual(const PoissonResult& sol, const Field2Fn& rhs, const Rect& domain);

}  // namespace offdiag
