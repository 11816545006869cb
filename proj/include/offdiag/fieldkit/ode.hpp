#pragma once
// Adaptive Runge-Kutta (Dormand-Prince 5(4)) initial value integration with
// dense output at requested nodes.

#include <functional>
#include <string>
#include <vector>

namespace offdiag {

/// Ordered samples of a named state vector.
struct Trajectory {
  std::vector<std::string> names;
  std::vector<double> s;
  std::vector<std::vector<double>> state;

  std::size_t size() const { return s.size(); }
  int column(const std::string& name) const;
  std::vector<double> series(const std::string& name) const;
  /// Appends a sample; the independent variable must stay strictly monotone.
  void push(double si, std::vector<double> yi);
};

struct OdeControl {
  double rtol = 1e-9;
  double atol = 1e-12;
  double initial_step = 1e-4;
  double min_step = 1e-13;     // relative to max(1, |s|)
  double blowup = 1e150;       // |y| beyond this counts as a singularity
  long max_steps = 5'000'000;
};

enum class OdeStatus { Completed, StepUnderflow, BlowUp, MaxSteps };

struct OdeResult {
  Trajectory traj;
  OdeStatus status = OdeStatus::Completed;
  double stop_s = 0.0;  // last reached value of the independent variable
  long steps = 0;
  std::string message;

  bool ok() const { return status == OdeStatus::Completed; }
};

using OdeRhs = std::function<void(double s, const std::vector<double>& y, std::vector<double>& dy)>;

/// Integrate from nodes.front() to nodes.back(); nodes must be strictly
/// monotone (decreasing nodes integrate backward). Samples are produced at
/// every node reached before a singularity.
OdeResult integrate_ivp(const OdeRhs& rhs, const std::vector<double>& y0, const std::vector<double>& nodes,
                        const std::vector<std::string>& names, const OdeControl& control = {});

/// Equally spaced nodes including both ends.
std::vector<double> linspace(double a, double b, int n);

}  // namespace offdiag
