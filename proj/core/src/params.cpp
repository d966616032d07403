#include "saddle/params.hpp"

#include <cmath>

namespace saddle {

using namespace constants;

double TrapConfig::effective_waist() const {
  if (waist > 0.0) return waist;
  return wavelength / (pi * numerical_aperture);
}

QuadratureScales DerivedParams::scales(const ReferenceTweezer& ref) const {
  QuadratureScales s;
  s.position = {std::sqrt(2.0) * x_zpf, std::sqrt(2.0) * y_zpf};
  s.momentum = {std::sqrt(2.0) * p_zpf_x, std::sqrt(2.0) * p_zpf_y};
  s.frequency = {ref.frequency_x, ref.frequency_y};
  return s;
}

void validate(const ParticleParams& p) {
  if (!(p.radius > 0.0)) throw ConfigError("particle.radius must be > 0");
  if (!(p.density > 0.0)) throw ConfigError("particle.density must be > 0");
  if (!(p.relative_permittivity > 1.0))
    throw ConfigError("particle.relative_permittivity must be > 1");
}

void validate(const TrapConfig& t) {
  if (!(t.power > 0.0)) throw ConfigError("trap.power must be > 0");
  if (!(t.wavelength > 0.0)) throw ConfigError("trap.wavelength must be > 0");
  if (t.waist < 0.0) throw ConfigError("trap.waist must be > 0");
  if (t.waist == 0.0 && !(t.numerical_aperture > 0.0))
    throw ConfigError("trap.numerical_aperture must be > 0 when no waist is given");
  if (!(t.laguerre_fraction >= 0.0 && t.laguerre_fraction <= 1.0))
    throw ConfigError("trap.laguerre_fraction must lie in [0, 1]");
  if (!(t.gas_damping >= 0.0)) throw ConfigError("trap.gas_damping must be >= 0");
  if (!std::isfinite(t.rotation_rate))
    throw ConfigError("trap.rotation_rate must be finite");
}

void validate(const ReferenceTweezer& r) {
  if (!(r.frequency_x > 0.0 && r.frequency_y > 0.0))
    throw ConfigError("reference.frequency must be > 0");
  if (!(r.occupation_x >= 0.0 && r.occupation_y >= 0.0))
    throw ConfigError("reference.occupation must be >= 0");
}

double sphere_mass(const ParticleParams& p) {
  return 4.0 / 3.0 * pi * p.radius * p.radius * p.radius * p.density;
}

double clausius_mossotti(const ParticleParams& p) {
  const double eps = p.relative_permittivity;
  return 4.0 * pi * epsilon0 * p.radius * p.radius * p.radius * (eps - 1.0) / (eps + 2.0);
}

double geometric_factor(Axis axis) { return axis == Axis::x ? 0.2 : 0.4; }

double recoil_rate(const RecoilInputs& in, Axis axis) {
  if (!(in.oscillation_frequency > 0.0))
    throw std::invalid_argument("recoil_rate: oscillation frequency must be > 0");
  const double k = 2.0 * pi / in.wavelength;
  const double k5 = k * k * k * k * k;
  const double a2 = in.polarizability * in.polarizability;
  return geometric_factor(axis) * in.gaussian_fraction * in.power * k5 * a2 /
         (3.0 * pi * pi * epsilon0 * epsilon0 * in.mass * c * in.oscillation_frequency *
          in.waist * in.waist);
}

double localization_rate(double recoil_rate, double zpf) {
  if (recoil_rate < 0.0 || !(zpf > 0.0))
    throw std::invalid_argument("localization_rate: needs rate >= 0 and zpf > 0");
  return recoil_rate / (2.0 * zpf * zpf);
}

double absorbed_ratio(const TrapConfig& trap) { return 1.0 - trap.laguerre_fraction; }

DerivedParams derive(const ParticleParams& particle, const TrapConfig& trap,
                     const ReferenceTweezer& ref, std::optional<double> recoil_frequency) {
  validate(particle);
  validate(trap);
  validate(ref);
  if (particle.radius / trap.wavelength >= 0.2)
    throw ConfigError("particle.radius: dipole regime requires radius / wavelength < 0.2");

  DerivedParams d;
  d.mass = sphere_mass(particle);
  d.polarizability_real = clausius_mossotti(particle);

  const double w0 = trap.effective_waist();
  // Time-averaged dipole energy -Re{alpha}/4 |E|^2 expanded to second order
  // about the axis of the three-mode beam.
  d.v0 = 2.0 * d.polarizability_real * trap.power / (c * pi * epsilon0 * w0 * w0 * w0 * w0);

  d.x_zpf = std::sqrt(hbar / (2.0 * d.mass * ref.frequency_x));
  d.y_zpf = std::sqrt(hbar / (2.0 * d.mass * ref.frequency_y));
  d.p_zpf_x = hbar / (2.0 * d.x_zpf);
  d.p_zpf_y = hbar / (2.0 * d.y_zpf);

  const double ig = trap.gaussian_fraction();
  const double il = trap.laguerre_fraction;
  const double mix = 2.0 * std::sqrt(ig * il);
  d.omega_sq_x = 2.0 * d.v0 * (mix - ig) / d.mass;
  d.omega_sq_y = 2.0 * d.v0 * (mix + ig) / d.mass;

  RecoilInputs in{trap.power, ig, trap.wavelength, w0, d.polarizability_real, d.mass, 0.0};
  const double omega_x = recoil_frequency.value_or(ref.frequency_x);
  const double omega_y = recoil_frequency.value_or(ref.frequency_y);
  d.recoil_frequency = omega_x;
  in.oscillation_frequency = omega_x;
  d.recoil_rate_x = recoil_rate(in, Axis::x);
  in.oscillation_frequency = omega_y;
  d.recoil_rate_y = recoil_rate(in, Axis::y);
  d.localization_rate_x = localization_rate(d.recoil_rate_x, d.x_zpf);
  d.localization_rate_y = localization_rate(d.recoil_rate_y, d.y_zpf);
  d.absorbed_ratio = absorbed_ratio(trap);
  return d;
}

} // namespace saddle
