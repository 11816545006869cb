#include "offdiag/fieldkit/ode.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace offdiag {

namespace odeint = boost::numeric::odeint;

int Trajectory::column(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

std::vector<double> Trajectory::series(const std::string& name) const {
  int c = column(name);
  if (c < 0) throw std::out_of_range("trajectory has no column " + name);
  std::vector<double> out;
  out.reserve(state.size());
  for (const auto& row : state) out.push_back(row[static_cast<std::size_t>(c)]);
  return out;
}

void Trajectory::push(double si, std::vector<double> yi) {
  if (yi.size() != names.size()) throw std::invalid_argument("state width does not match names");
  if (s.size() >= 2) {
    double dir = s[1] - s[0];
    if ((si - s.back()) * dir <= 0) throw std::invalid_argument("trajectory samples must be strictly monotone");
  } else if (s.size() == 1 && si == s[0]) {
    throw std::invalid_argument("trajectory samples must be strictly monotone");
  }
  s.push_back(si);
  state.push_back(std::move(yi));
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i == n - 1 ? b : a + (b - a) * i / (n - 1);
  return v;
}

namespace {

bool finite_and_bounded(const std::vector<double>& y, double limit) {
  for (double v : y)
    if (!std::isfinite(v) || std::fabs(v) > limit) return false;
  return true;
}

std::string where(double s) {
  std::ostringstream os;
  os.precision(12);
  os << s;
  return os.str();
}

}  // namespace

OdeResult integrate_ivp(const OdeRhs& rhs, const std::vector<double>& y0, const std::vector<double>& nodes,
                        const std::vector<std::string>& names, const OdeControl& control) {
  if (nodes.size() < 2) throw std::invalid_argument("integrate_ivp needs at least two nodes");
  const double dir = nodes.back() > nodes.front() ? 1.0 : -1.0;
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if ((nodes[i] - nodes[i - 1]) * dir <= 0) throw std::invalid_argument("nodes must be strictly monotone");

  OdeResult res;
  res.traj.names = names;
  res.traj.push(nodes.front(), y0);
  res.stop_s = nodes.front();

  using State = std::vector<double>;
  auto system = [&rhs](const State& y, State& dy, double s) {
    dy.resize(y.size());
    rhs(s, y, dy);
  };
  auto stepper = odeint::make_dense_output(control.atol, control.rtol, odeint::runge_kutta_dopri5<State>());
  stepper.initialize(y0, nodes.front(), dir * control.initial_step);

  State y(y0.size());
  std::size_t next = 1;
  try {
    while (next < nodes.size()) {
      while (next < nodes.size() && (nodes[next] - stepper.current_time()) * dir <= 0) {
        stepper.calc_state(nodes[next], y);
        res.traj.push(nodes[next], y);
        ++next;
      }
      if (next >= nodes.size()) break;
      if (++res.steps > control.max_steps) {
        res.status = OdeStatus::MaxSteps;
        res.message = "step budget exhausted near s = " + where(stepper.current_time());
        break;
      }
      double s_before = stepper.current_time();
      stepper.do_step(system);
      res.stop_s = stepper.current_time();
      if (!finite_and_bounded(stepper.current_state(), control.blowup)) {
        res.status = OdeStatus::BlowUp;
        res.stop_s = s_before;
        res.message = "solution blows up near s = " + where(stepper.current_time());
        break;
      }
      double taken = std::fabs(stepper.current_time() - s_before);
      double scale = std::max(1.0, std::fabs(s_before));
      if (taken < control.min_step * scale) {
        res.status = OdeStatus::StepUnderflow;
        res.message = "step size underflow near s = " + where(stepper.current_time());
        break;
      }
    }
  } catch (const odeint::step_adjustment_error&) {
    res.status = OdeStatus::StepUnderflow;
    res.message = "step size underflow near s = " + where(stepper.current_time());
  } catch (const odeint::no_progress_error&) {
    res.status = OdeStatus::StepUnderflow;
    res.message = "no progress near s = " + where(stepper.current_time());
  }
  if (res.status == OdeStatus::Completed) res.stop_s = nodes.back();
  return res;
}

}  // namespace offdiag
