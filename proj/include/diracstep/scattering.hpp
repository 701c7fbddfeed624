// Plane-wave scattering of a 1+1 dimensional Dirac particle off a step
// potential V(x) = V0 theta(x), particle incident from the left.
//
// All quantities are in natural units (hbar = c = 1). With the upper spinor
// component normalised to one, a plane wave of kinetic energy e and mass m
// has lower/upper ratio
//
//   f(e, m) = sqrt(e^2 - m^2) / (e + m),
//
// which gives the incident factor a = f(E, m0) and the transmitted factor
// b = f(E - V0, m0) for vector coupling or b = f(E, m0 + V0) for scalar
// coupling. Matching both components at the step gives
//
//   R = (a - b) / (a + b),   T = 2a / (a + b).
//
// The conserved current psi^dagger sigma_x psi of the wave (1, f) is 2 Re f,
// so the flux ratios are r = |R|^2 and t = (Re b / a) |T|^2. For real b the
// identity (a - b)^2 + 4ab = (a + b)^2 makes r + t = 1 exact.
//
// Branch conventions: a negative radicand takes +i sqrt(|.|) (decaying
// wave). In the Klein zone (V0 > E + m0, vector) the radicand is positive but
// e + m < 0, so b < 0, t < 0 and r > 1.
#pragma once

#include "diracstep/algebra.hpp"

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace diracstep::scattering {

enum class Coupling { Vector, Scalar, Pseudoscalar };
enum class Regime { Transmission, Evanescent, KleinZone };

std::string_view to_string(Coupling coupling);
std::string_view to_string(Regime regime);
std::optional<Coupling> parse_coupling(std::string_view text);

/// Matrix multiplying V(x) in the Hamiltonian: I, sigma_z or sigma_y.
algebra::ComplexMatrix coupling_matrix(Coupling coupling);

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Closed-form scattering is only available for vector and scalar coupling.
class UnsupportedCoupling : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters sitting on a pole of the transmitted factor (e + m = 0), or
/// with a + b = 0.
class SingularConfiguration : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct ScatteringQuery {
  double energy = 0.0;
  double step_height = 0.0;
  double mass = 1.0;
  Coupling coupling = Coupling::Vector;
};

struct ScatteringResult {
  double incident_factor = 0.0;                // a
  std::complex<double> transmitted_factor;     // b
  std::complex<double> reflection_amplitude;   // R
  std::complex<double> transmission_amplitude; // T
  double reflection = 0.0;                     // r
  double transmission = 0.0;                   // t
  Regime regime = Regime::Transmission;
};

struct Coefficients {
  double reflection = 0.0;
  double transmission = 0.0;
};

/// Throws PreconditionError unless every field is finite and energy > mass > 0.
void validate(const ScatteringQuery& query);

/// f(e, m) from the header comment. Throws SingularConfiguration when
/// e + m == 0; no other preconditions.
std::complex<double> kinematic_factor(double kinetic_energy, double mass);

/// a = sqrt(E^2 - m0^2) / (E + m0). Requires E >= m0 > 0.
double incident_factor(double energy, double mass);

/// b for vector (f(E - V0, m0)) or scalar (f(E, m0 + V0)) coupling. Only
/// finiteness is checked; the incident-side condition E > m0 is enforced by
/// amplitudes(). Throws UnsupportedCoupling for pseudoscalar.
std::complex<double> transmitted_factor(double energy, double step_height, double mass,
                                        Coupling coupling);

Coefficients coefficients(double a, std::complex<double> b, std::complex<double> reflection,
                          std::complex<double> transmission);

/// Equalities (|E - V0| = m0, E = |m0 + V0|) classify as Evanescent.
Regime classify_regime(const ScatteringQuery& query);

ScatteringResult amplitudes(const ScatteringQuery& query);

enum class SweepAxis { Energy, StepHeight, Mass };
std::string_view to_string(SweepAxis axis);
std::optional<SweepAxis> parse_sweep_axis(std::string_view text);

enum class RowStatus { Ok, Invalid, Singular };
std::string_view to_string(RowStatus status);

struct SweepRow {
  ScatteringQuery query;
  RowStatus status = RowStatus::Ok;
  std::optional<ScatteringResult> result;  // set iff status == Ok
  std::string message;                     // diagnostic for error rows
};

/// Uniform grid from..to inclusive, `steps` points, rows in grid order.
/// Points that violate the query preconditions or sit on a pole become error
/// rows. Throws PreconditionError for from >= to or steps < 2 and
/// UnsupportedCoupling for pseudoscalar.
std::vector<SweepRow> sweep(const ScatteringQuery& base, SweepAxis axis, double from, double to,
                            int steps);

}  // namespace diracstep::scattering
