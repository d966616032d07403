#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace saddle {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double c = 299792458.0;             // m/s
inline constexpr double epsilon0 = 8.8541878128e-12; // F/m
inline constexpr double pi = std::numbers::pi;
} // namespace constants

/// Raised when an input block violates its invariants. The message names the
/// offending field so the CLI can report it verbatim.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class Axis { x = 0, y = 1 };

inline constexpr int index(Axis a) { return static_cast<int>(a); }

/// Dielectric sphere. Defaults are fused silica at telecom wavelengths.
struct ParticleParams {
  double radius = 50e-9;             // m
  double density = 1850.0;           // kg/m^3
  double relative_permittivity = 2.1;
};

struct TrapConfig {
  double power = 0.070;           // W
  double wavelength = 1.55e-6;    // m
  double waist = 0.0;             // m; 0 means "derive from numerical_aperture"
  double numerical_aperture = 0.6;
  double laguerre_fraction = 0.9; // I_L in [0, 1]
  double rotation_rate = 0.0;     // Omega [rad/s]
  double phase = 0.0;             // theta(t) = phase + Omega t
  double gas_damping = 0.0;       // gamma [1/s]
  double axial_recoil_factor = 0.0; // A in the z geometric factor; z is not simulated

  double gaussian_fraction() const { return 1.0 - laguerre_fraction; }
  /// Beam waist, falling back to the paraxial estimate lambda / (pi NA).
  double effective_waist() const;
  double wavenumber() const { return 2.0 * constants::pi / wavelength; }
};

/// The Gaussian tweezer the particle is prepared in before transfer. Its
/// zero-point scales define the internal quadrature units.
struct ReferenceTweezer {
  double frequency_x = 2.0 * constants::pi * 150e3; // rad/s
  double frequency_y = 2.0 * constants::pi * 150e3; // rad/s
  double occupation_x = 0.8;
  double occupation_y = 0.8;
};

/// Which oscillation frequency enters the recoil-rate formula.
enum class RecoilFrequency {
  reference, ///< the reference tweezer frequency (consistent with q_zpf in Lambda)
  beating,   ///< the saddle beating frequency, supplied by the caller
};

/// Conversion between SI phase-space coordinates and the internal
/// dimensionless quadratures X = x / (sqrt2 x_zpf), P = p / (sqrt2 p_zpf).
/// In these units the vacuum covariance is I/2 and [X, P] = i.
struct QuadratureScales {
  std::array<double, 2> position{}; // m per unit X (sqrt2 q_zpf)
  std::array<double, 2> momentum{}; // kg m/s per unit P (sqrt2 p_zpf)
  std::array<double, 2> frequency{}; // reference angular frequency per axis
};

struct DerivedParams {
  double mass = 0.0;               // kg
  double polarizability_real = 0.0; // C m^2 / V
  /// Quadratic potential scale [J/m^2]: V(x, y) = v0 (k- x^2 + k+ y^2 - kxy x y).
  double v0 = 0.0;
  double x_zpf = 0.0, y_zpf = 0.0;     // m
  double p_zpf_x = 0.0, p_zpf_y = 0.0; // kg m/s
  double recoil_rate_x = 0.0, recoil_rate_y = 0.0;             // phonons / s
  double localization_rate_x = 0.0, localization_rate_y = 0.0; // 1/(m^2 s)
  double absorbed_ratio = 0.0;
  /// Signed curvature frequencies squared at theta = 0. omega_sq_x is positive
  /// when the x axis is anti-trapping (its magnitude enters the threshold).
  double omega_sq_x = 0.0, omega_sq_y = 0.0; // rad^2/s^2
  double recoil_frequency = 0.0; // Omega_q used in the recoil formula [rad/s]

  QuadratureScales scales(const ReferenceTweezer& ref) const;
};

/// Inputs to the photon recoil rate, separated from the config structs so the
/// scaling laws can be probed one factor at a time.
struct RecoilInputs {
  double power = 0.0;
  double gaussian_fraction = 0.0;
  double wavelength = 0.0;
  double waist = 0.0;
  double polarizability = 0.0;
  double mass = 0.0;
  double oscillation_frequency = 0.0; // Omega_q
};

void validate(const ParticleParams& p);
void validate(const TrapConfig& t);
void validate(const ReferenceTweezer& r);

double sphere_mass(const ParticleParams& p);
/// Clausius-Mossotti polarizability 4 pi eps0 R^3 (eps - 1) / (eps + 2).
double clausius_mossotti(const ParticleParams& p);

/// Geometric recoil factor: 1/5 along x, 2/5 along y.
double geometric_factor(Axis axis);

/// Photon recoil heating rate [phonons/s] from the Gaussian component of the
/// beam. Standard dipole-scattering result: the Gaussian-mode peak intensity
/// I_G 2P/(pi w0^2) times the Rayleigh cross section k^4 |alpha|^2 /
/// (6 pi eps0^2) gives the scattered power, and each scattered photon deposits
/// C_q (hbar k)^2 / m of kinetic energy on average, so
///   Gamma_q = C_q I_G P k^5 |alpha|^2 / (3 pi^2 eps0^2 m c Omega_q w0^2).
double recoil_rate(const RecoilInputs& in, Axis axis);

/// Lambda_q = Gamma_q / (2 q_zpf^2). With this mapping the momentum diffusion
/// 2 hbar^2 Lambda_q equals 2 m hbar Omega_q Gamma_q, i.e. the mean energy
/// grows by one quantum hbar Omega_q per 1/Gamma_q.
double localization_rate(double recoil_rate, double zpf);

/// Dipole-limit absorbed-power ratio relative to a pure Gaussian beam.
double absorbed_ratio(const TrapConfig& trap);

/// Derive every quantity the dynamics needs. If `recoil_frequency` is given it
/// replaces the reference-tweezer frequency in the recoil formula.
DerivedParams derive(const ParticleParams& particle, const TrapConfig& trap,
                     const ReferenceTweezer& ref,
                     std::optional<double> recoil_frequency = std::nullopt);

} // namespace saddle
