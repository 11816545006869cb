#pragma once
// Truncated multivariate Taylor jets over (x1, x2, t).
//
// A Jet stores the normalized Taylor coefficients c_a = (d^a f)/a! for every
// multi-index a of total degree <= order. Arithmetic is exact polynomial
// arithmetic truncated at the jet order, so mixed partials are symmetric by
// construction.

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace offdiag {

inline constexpr int kMaxJetOrder = 4;
inline constexpr int kJetSize = 35;  // C(4 + 3, 3)
inline constexpr int kJetDirs = 3;   // x1, x2, t

enum JetDir : int { kX1 = 0, kX2 = 1, kT = 2 };

struct MultiIndex {
  int n[3] = {0, 0, 0};
  int total() const { return n[0] + n[1] + n[2]; }
};

/// Number of coefficients of a jet of the given order.
constexpr int jet_size(int order) {
  return (order + 1) * (order + 2) * (order + 3) / 6;
}

/// Position of a multi-index in the graded coefficient layout.
int jet_index(int n1, int n2, int nt);
const MultiIndex& jet_multi_index(int idx);

class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

class Jet {
 public:
  Jet() : order_(kMaxJetOrder) { c_.fill(0.0); }
  Jet(double v, int order) : order_(order) {
    c_.fill(0.0);
    c_[0] = v;
  }

  static Jet constant(double v, int order) { return Jet(v, order); }
  static Jet variable(int dir, double v, int order);

  int order() const { return order_; }
  double value() const { return c_[0]; }

  /// Partial derivative d^(n1+n2+nt) / dx1^n1 dx2^n2 dt^nt.
  double partial(int n1, int n2, int nt) const;
  double d(int dir) const { return partial(dir == 0, dir == 1, dir == 2); }

  double coeff(int idx) const { return c_[static_cast<std::size_t>(idx)]; }
  double& coeff(int idx) { return c_[static_cast<std::size_t>(idx)]; }

  /// Partial derivative as a jet of order-1. Requires order >= 1.
  Jet derivative(int dir) const;

  /// Same jet truncated to a lower order.
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);
  Jet& operator/=(double s);

 private:
  int order_;
  std::array<double, kJetSize> c_;

  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet compose(const Jet& u, const double* derivs);
};

Jet operator-(const Jet& a);
Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(const Jet& a, double s);
Jet operator+(double s, const Jet& a);
Jet operator-(const Jet& a, double s);
Jet operator-(double s, const Jet& a);
Jet operator*(const Jet& a, double s);
Jet operator*(double s, const Jet& a);
Jet operator/(const Jet& a, double s);
Jet operator/(double s, const Jet& a);

/// f(u) given derivs[k] = f^(k)(u.value()) for k = 0..u.order().
Jet compose(const Jet& u, const double* derivs);

Jet exp(const Jet& u);
Jet log(const Jet& u);
Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet sqrt(const Jet& u);
Jet abs(const Jet& u);
Jet pow(const Jet& u, double p);
Jet reciprocal(const Jet& u);

}  // namespace offdiag
