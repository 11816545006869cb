#include "offdiag/fieldkit/jet.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace offdiag {

namespace {

struct Tables {
  std::array<MultiIndex, kJetSize> multi{};
  int lookup[kMaxJetOrder + 1][kMaxJetOrder + 1][kMaxJetOrder + 1];
  // Product triplets (i, j, k) with multi(i) + multi(j) = multi(k), sorted by k.
  std::vector<std::array<int, 3>> mul;
  // mul_end[order] = number of triplets whose target has degree <= order
  int mul_end[kMaxJetOrder + 1];

  Tables() {
    int idx = 0;
    for (int deg = 0; deg <= kMaxJetOrder; ++deg) {
      for (int a = deg; a >= 0; --a) {
        for (int b = deg - a; b >= 0; --b) {
          int c = deg - a - b;
          multi[idx].n[0] = a;
          multi[idx].n[1] = b;
          multi[idx].n[2] = c;
          lookup[a][b][c] = idx;
          ++idx;
        }
      }
    }
    for (int k = 0; k < kJetSize; ++k) {
      const auto& mk = multi[k];
      for (int i = 0; i < kJetSize; ++i) {
        const auto& mi = multi[i];
        if (mi.n[0] > mk.n[0] || mi.n[1] > mk.n[1] || mi.n[2] > mk.n[2]) continue;
        int j = lookup[mk.n[0] - mi.n[0]][mk.n[1] - mi.n[1]][mk.n[2] - mi.n[2]];
        mul.push_back({i, j, k});
      }
    }
    for (int order = 0; order <= kMaxJetOrder; ++order) {
      int limit = jet_size(order);
      mul_end[order] = static_cast<int>(
          std::count_if(mul.begin(), mul.end(), [&](const auto& t) { return t[2] < limit; }));
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

int jet_index(int n1, int n2, int nt) {
  if (n1 < 0 || n2 < 0 || nt < 0 || n1 + n2 + nt > kMaxJetOrder) return -1;
  return tables().lookup[n1][n2][nt];
}

const MultiIndex& jet_multi_index(int idx) { return tables().multi[static_cast<std::size_t>(idx)]; }

Jet Jet::variable(int dir, double v, int order) {
  Jet j(v, order);
  if (order >= 1) j.c_[static_cast<std::size_t>(jet_index(dir == 0, dir == 1, dir == 2))] = 1.0;
  return j;
}

double Jet::partial(int n1, int n2, int nt) const {
  if (n1 + n2 + nt > order_) throw std::out_of_range("jet partial beyond jet order");
  int idx = jet_index(n1, n2, nt);
  return c_[static_cast<std::size_t>(idx)] * factorial(n1) * factorial(n2) * factorial(nt);
}

Jet Jet::derivative(int dir) const {
  if (order_ < 1) throw std::logic_error("derivative of an order-0 jet");
  Jet r(0.0, order_ - 1);
  int n = jet_size(order_ - 1);
  for (int i = 0; i < n; ++i) {
    MultiIndex m = jet_multi_index(i);
    m.n[dir] += 1;
    int src = jet_index(m.n[0], m.n[1], m.n[2]);
    r.c_[static_cast<std::size_t>(i)] = m.n[dir] * c_[static_cast<std::size_t>(src)];
  }
  return r;
}

Jet Jet::truncated(int order) const {
  Jet r = *this;
  if (order >= order_) return r;
  r.order_ = order;
  for (int i = jet_size(order); i < kJetSize; ++i) r.c_[static_cast<std::size_t>(i)] = 0.0;
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  order_ = std::min(order_, o.order_);
  int n = jet_size(order_);
  for (int i = 0; i < n; ++i) c_[static_cast<std::size_t>(i)] += o.c_[static_cast<std::size_t>(i)];
  for (int i = n; i < kJetSize; ++i) c_[static_cast<std::size_t>(i)] = 0.0;
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  order_ = std::min(order_, o.order_);
  int n = jet_size(order_);
  for (int i = 0; i < n; ++i) c_[static_cast<std::size_t>(i)] -= o.c_[static_cast<std::size_t>(i)];
  for (int i = n; i < kJetSize; ++i) c_[static_cast<std::size_t>(i)] = 0.0;
  return *this;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }
Jet& Jet::operator/=(const Jet& o) { return *this = *this / o; }

Jet& Jet::operator+=(double s) {
  c_[0] += s;
  return *this;
}
Jet& Jet::operator-=(double s) {
  c_[0] -= s;
  return *this;
}
Jet& Jet::operator*=(double s) {
  for (auto& x : c_) x *= s;
  return *this;
}
Jet& Jet::operator/=(double s) {
  for (auto& x : c_) x /= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  int order = std::min(a.order_, b.order_);
  Jet r(0.0, order);
  const auto& t = tables();
  int end = t.mul_end[order];
  for (int q = 0; q < end; ++q) {
    const auto& tr = t.mul[static_cast<std::size_t>(q)];
    r.c_[static_cast<std::size_t>(tr[2])] +=
        a.c_[static_cast<std::size_t>(tr[0])] * b.c_[static_cast<std::size_t>(tr[1])];
  }
  return r;
}

Jet operator-(const Jet& a) { return a * -1.0; }
Jet operator+(const Jet& a, const Jet& b) {
  Jet r = a;
  return r += b;
}
Jet operator-(const Jet& a, const Jet& b) {
  Jet r = a;
  return r -= b;
}
Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
Jet operator+(const Jet& a, double s) {
  Jet r = a;
  return r += s;
}
Jet operator+(double s, const Jet& a) { return a + s; }
Jet operator-(const Jet& a, double s) {
  Jet r = a;
  return r -= s;
}
Jet operator-(double s, const Jet& a) { return (-a) + s; }
Jet operator*(const Jet& a, double s) {
  Jet r = a;
  return r *= s;
}
Jet operator*(double s, const Jet& a) { return a * s; }
Jet operator/(const Jet& a, double s) {
  Jet r = a;
  return r /= s;
}
Jet operator/(double s, const Jet& a) { return reciprocal(a) * s; }

Jet compose(const Jet& u, const double* derivs) {
  int order = u.order_;
  Jet delta = u;
  delta.c_[0] = 0.0;
  Jet r(derivs[0], order);
  Jet power(1.0, order);
  double kfact = 1.0;
  for (int k = 1; k <= order; ++k) {
    power = power * delta;
    kfact *= k;
    double coef = derivs[k] / kfact;
    if (coef == 0.0) continue;
    int n = jet_size(order);
    for (int i = 0; i < n; ++i) r.c_[static_cast<std::size_t>(i)] += coef * power.c_[static_cast<std::size_t>(i)];
  }
  return r;
}

Jet exp(const Jet& u) {
  double e = std::exp(u.value());
  double d[kMaxJetOrder + 1];
  for (auto& x : d) x = e;
  return compose(u, d);
}

Jet log(const Jet& u) {
  double v = u.value();
  if (!(v > 0.0)) throw DomainError("ln of non-positive value " + std::to_string(v));
  double d[kMaxJetOrder + 1];
  d[0] = std::log(v);
  double p = 1.0 / v;
  for (int k = 1; k <= kMaxJetOrder; ++k) {
    d[k] = p;
    p *= -static_cast<double>(k) / v;
  }
  return compose(u, d);
}

Jet sin(const Jet& u) {
  double s = std::sin(u.value()), c = std::cos(u.value());
  double d[kMaxJetOrder + 1] = {s, c, -s, -c, s};
  return compose(u, d);
}

Jet cos(const Jet& u) {
  double s = std::sin(u.value()), c = std::cos(u.value());
  double d[kMaxJetOrder + 1] = {c, -s, -c, s, c};
  return compose(u, d);
}

Jet pow(const Jet& u, double p) {
  double v = u.value();
  bool integral = std::floor(p) == p;
  if (!integral && v <= 0.0) throw DomainError("non-integer power of non-positive value " + std::to_string(v));
  if (v == 0.0 && p < u.order()) {
    if (!(integral && p >= 0.0)) throw DomainError("power singular at zero");
  }
  double d[kMaxJetOrder + 1];
  double falling = 1.0;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    d[k] = falling == 0.0 ? 0.0 : falling * std::pow(v, p - k);
    falling *= (p - k);
  }
  return compose(u, d);
}

Jet sqrt(const Jet& u) {
  if (u.value() < 0.0) throw DomainError("sqrt of negative value " + std::to_string(u.value()));
  if (u.value() == 0.0 && u.order() > 0) throw DomainError("sqrt not differentiable at zero");
  return pow(u, 0.5);
}

Jet abs(const Jet& u) {
  double v = u.value();
  if (v > 0.0) return u;
  if (v < 0.0) return -u;
  return Jet(0.0, u.order());
}

Jet reciprocal(const Jet& u) {
  double v = u.value();
  if (v == 0.0) throw DomainError("division by zero");
  double d[kMaxJetOrder + 1];
  double p = 1.0 / v;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    d[k] = p;
    p *= -static_cast<double>(k + 1) / v;
  }
  return compose(u, d);
}

}  // namespace offdiag
