#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "excidyn/errors.hpp"

namespace excidyn {

// Lorentzian bath parameters, all in rad/ps. `detuning` is the offset of the
// spectral peak below the qubit transition frequency omega0. gamma0 = 0 is
// the decoupled boundary (u stays exactly 1 on both evaluation routes).
struct BathSpec {
  double gamma0;       // relaxation rate, 1/tau_R
  double delta_omega;  // spectral FWHM, 2/tau_B
  double detuning = 0.0;
  double omega0 = 0.0;

  void validate() const {
    if (!(gamma0 >= 0.0) || !std::isfinite(gamma0))
      throw numeric_error("DomainError", "BathSpec: gamma0 must be >= 0");
    if (!(delta_omega > 0.0) || !std::isfinite(delta_omega))
      throw numeric_error("DomainError", "BathSpec: delta_omega must be positive");
    if (!std::isfinite(detuning) || !std::isfinite(omega0))
      throw numeric_error("DomainError", "BathSpec: non-finite parameter");
  }
};

// J(w) = (1/2pi) gamma0 (dw/2)^2 / ((omega0 - detuning - w)^2 + (dw/2)^2)
inline double spectral_density(const BathSpec& bath, double omega) {
  bath.validate();
  double half_width = bath.delta_omega / 2.0;
  double shift = bath.omega0 - bath.detuning - omega;
  return bath.gamma0 * half_width * half_width /
         (2.0 * std::numbers::pi * (shift * shift + half_width * half_width));
}

namespace detail {

// sinh(x)/x, series near the removable singularity. Even in x, so the result
// does not depend on the branch chosen for a square-root argument.
inline Complex sinhc(Complex x) {
  if (std::abs(x) < 1e-4) {
    Complex x2 = x * x;
    return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sinh(x) / x;
}

}  // namespace detail

// Closed-form excited-state amplitude for the Lorentzian bath:
//   u(t) = e^{-lam t/2} [cosh(xi t/2) + (lam/xi) sinh(xi t/2)],
//   lam  = dw/2 - i*detuning,  xi = sqrt(lam^2 - gamma0*dw).
// cosh and sinh/xi are even in xi, so the square-root branch is immaterial.
inline Complex amplitude_closed_form(const BathSpec& bath, double t_ps) {
  bath.validate();
  if (t_ps < 0.0)
    throw numeric_error("NegativeTime",
                        "amplitude_closed_form: t = " + std::to_string(t_ps));
  Complex lam(bath.delta_omega / 2.0, -bath.detuning);
  Complex xi = std::sqrt(lam * lam - bath.gamma0 * bath.delta_omega);
  Complex x = xi * (t_ps / 2.0);
  return std::exp(-lam * (t_ps / 2.0)) *
         (std::cosh(x) + lam * (t_ps / 2.0) * detail::sinhc(x));
}

enum class AmplitudeSource { closed_form, kernel_integration };

struct AmplitudeTrace {
  std::vector<double> times_ps;   // ascending
  std::vector<Complex> u_values;
  AmplitudeSource source = AmplitudeSource::closed_form;
  std::vector<std::string> warnings;
};

inline std::vector<double> uniform_grid(double t_final_ps, double dt_ps) {
  if (!(t_final_ps > 0.0) || !(dt_ps > 0.0))
    throw numeric_error("DomainError", "uniform_grid: need positive span and step");
  auto n = static_cast<std::size_t>(std::llround(t_final_ps / dt_ps));
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid[i] = static_cast<double>(i) * dt_ps;
  return grid;
}

inline AmplitudeTrace closed_form_trace(const BathSpec& bath,
                                        const std::vector<double>& t_grid) {
  AmplitudeTrace trace;
  trace.times_ps = t_grid;
  trace.source = AmplitudeSource::closed_form;
  trace.u_values.reserve(t_grid.size());
  for (double t : t_grid) trace.u_values.push_back(amplitude_closed_form(bath, t));
  return trace;
}

// Direct integration of the memory-kernel equation
//   du/dt = - integral_0^t f(t-s) u(s) ds,   f(tau) = (gamma0 dw/4) e^{-lam tau}.
// The running integral I(t) obeys the exact per-step recursion
//   I_{n+1} = e^{-lam h} I_n + increment,
// and both the increment and du/dt are closed with the trapezoidal rule, giving
// a second-order one-pass scheme (the implicit u_{n+1} is solved algebraically).
inline AmplitudeTrace amplitude_kernel_integration(
    const BathSpec& bath, const std::vector<double>& t_grid) {
  bath.validate();
  if (t_grid.size() < 2)
    throw numeric_error("DomainError",
                        "amplitude_kernel_integration: grid needs >= 2 points");
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
    if (!(t_grid[i + 1] > t_grid[i]))
      throw numeric_error("DomainError",
                          "amplitude_kernel_integration: grid not ascending");
  if (t_grid.front() != 0.0)
    throw numeric_error("DomainError",
                        "amplitude_kernel_integration: grid must start at 0");

  AmplitudeTrace trace;
  trace.times_ps = t_grid;
  trace.source = AmplitudeSource::kernel_integration;
  trace.u_values.resize(t_grid.size());

  double max_step = 0.0;
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
    max_step = std::max(max_step, t_grid[i + 1] - t_grid[i]);
  double recommended = 1e-3 * std::max(1.0 / bath.gamma0, 1.0 / bath.delta_omega);
  if (max_step > recommended)
    trace.warnings.push_back("GridTooCoarse: step " + std::to_string(max_step) +
                             " exceeds recommended " + std::to_string(recommended));

  Complex lam(bath.delta_omega / 2.0, -bath.detuning);
  double strength = bath.gamma0 * bath.delta_omega / 4.0;
  Complex u = 1.0;
  Complex integral = 0.0;
  trace.u_values[0] = u;
  for (std::size_t n = 0; n + 1 < t_grid.size(); ++n) {
    double h = t_grid[n + 1] - t_grid[n];
    Complex decay = std::exp(-lam * h);
    double quarter = strength * h * h / 4.0;
    Complex u_next = (u * (1.0 - quarter * decay) -
                      (strength * h / 2.0) * (1.0 + decay) * integral) /
                     (1.0 + quarter);
    integral = decay * integral + (h / 2.0) * (decay * u + u_next);
    u = u_next;
    trace.u_values[n + 1] = u;
  }
  return trace;
}

inline double excited_population(Complex u) {
  double p = std::norm(u);
  if (p > 1.0 + 2e-9)
    throw numeric_error("DomainError",
                        "excited_population: |u| exceeds 1, |u|^2 = " +
                            std::to_string(p));
  return std::min(std::max(p, 0.0), 1.0);
}

// dP = P_excited - P_ground = 2|u|^2 - 1 under |u|^2 + |v|^2 = 1.
inline double population_difference(Complex u) {
  return 2.0 * excited_population(u) - 1.0;
}

}  // namespace excidyn
