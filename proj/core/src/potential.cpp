#include "saddle/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace saddle {

using namespace constants;

StiffnessMatrix stiffness(double t, const TrapConfig& trap) {
  const double ig = trap.gaussian_fraction();
  const double mix = 2.0 * std::sqrt(trap.laguerre_fraction * ig);
  const double phase = 2.0 * (trap.phase + trap.rotation_rate * t);
  StiffnessMatrix k;
  k.kxx = ig - mix * std::cos(phase);
  k.kyy = ig + mix * std::cos(phase);
  k.kxy = 2.0 * mix * std::sin(phase);
  k.time = t;
  return k;
}

ForceCurvature force_and_curvature(const Eigen::Vector2d& position, double t,
                                   const TrapConfig& trap, const DerivedParams& derived) {
  ForceCurvature out;
  out.hessian = 2.0 * derived.v0 * stiffness(t, trap).quadratic_form();
  out.force = -out.hessian * position;
  return out;
}

namespace {

struct BeamGeometry {
  double w;     // spot size w(z)
  double inv_r; // 1 / R(z)
  double gouy;  // psi(z)
  double k;
};

BeamGeometry geometry(double z, const TrapConfig& trap) {
  const double w0 = trap.effective_waist();
  const double k = trap.wavenumber();
  const double zr = pi * w0 * w0 / trap.wavelength;
  const double ratio = z / zr;
  BeamGeometry g;
  g.w = w0 * std::sqrt(1.0 + ratio * ratio);
  g.inv_r = z / (z * z + zr * zr);
  g.gouy = std::atan(ratio);
  g.k = k;
  return g;
}

} // namespace

std::complex<double> lg_mode(int l, const FieldPoint& p, const TrapConfig& trap) {
  const BeamGeometry g = geometry(p.z, trap);
  const double rr = p.r * p.r;
  const double w2 = g.w * g.w;
  const int al = std::abs(l);
  double amplitude = 0.0;
  if (al == 0) {
    amplitude = std::sqrt(2.0 / pi) / g.w;
  } else if (al == 2) {
    amplitude = std::sqrt(1.0 / pi) * 2.0 * rr / (w2 * g.w);
  } else {
    throw std::invalid_argument("lg_mode: only l = 0, +-2 are used by the saddle beam");
  }
  const double phase = -g.k * rr * g.inv_r / 2.0 + l * p.phi + (al + 1) * g.gouy;
  return amplitude * std::exp(-rr / w2) * std::polar(1.0, phase);
}

double field_intensity(const FieldPoint& p, double theta, const TrapConfig& trap) {
  const double ig = trap.gaussian_fraction();
  const double half_l = 0.5 * trap.laguerre_fraction;
  const std::complex<double> e =
      std::sqrt(ig) * lg_mode(0, p, trap) +
      std::sqrt(half_l) * lg_mode(2, p, trap) * std::polar(1.0, -2.0 * theta) +
      std::sqrt(half_l) * lg_mode(-2, p, trap) * std::polar(1.0, 2.0 * theta);
  return std::norm(e);
}

FieldSample sample_field(const FieldPoint& p, double theta, const TrapConfig& trap) {
  return {p, field_intensity(p, theta, trap)};
}

double optical_potential(const FieldPoint& p, double theta, const TrapConfig& trap,
                         const DerivedParams& derived) {
  // E0^2 = 2P / (c eps0); U = -Re{alpha} |E|^2 / 4.
  const double e0_sq = 2.0 * trap.power / (c * epsilon0);
  return -0.25 * derived.polarizability_real * e0_sq * field_intensity(p, theta, trap);
}

double characteristic_length(const TrapConfig& trap) {
  const double ig = trap.gaussian_fraction();
  if (!(ig > 0.0))
    throw std::domain_error("characteristic_length: I_G = 0, I_L / I_G diverges");
  return trap.effective_waist() / std::sqrt(1.0 + 2.0 * std::sqrt(trap.laguerre_fraction / ig));
}

double trap_depth(const TrapConfig& trap, const DerivedParams& derived) {
  const double w0 = trap.effective_waist();
  auto u = [&](double r) {
    return optical_potential({r, pi / 2.0, 0.0}, 0.0, trap, derived);
  };
  const double u0 = u(0.0);

  // Coarse scan for the bracket of the first maximum, then golden section.
  constexpr int n = 2000;
  const double r_max = 3.0 * w0;
  int best = 0;
  double best_u = u0;
  for (int i = 1; i <= n; ++i) {
    const double ui = u(r_max * i / n);
    if (ui > best_u) {
      best_u = ui;
      best = i;
    }
  }
  if (best == 0) return 0.0;

  double a = r_max * std::max(best - 1, 0) / n;
  double b = r_max * std::min(best + 1, n) / n;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c1 = b - g * (b - a), c2 = a + g * (b - a);
  double f1 = u(c1), f2 = u(c2);
  for (int it = 0; it < 100 && (b - a) > 1e-15 * w0; ++it) {
    if (f1 > f2) {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - g * (b - a);
      f1 = u(c1);
    } else {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + g * (b - a);
      f2 = u(c2);
    }
  }
  const double barrier = std::max({best_u, f1, f2}) - u0;
  return barrier > 0.0 ? barrier : 0.0;
}

} // namespace saddle
