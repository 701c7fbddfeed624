#include "diracstep/scattering.hpp"

#include <cmath>
#include <sstream>

namespace diracstep::scattering {

namespace {

void require_closed_form(Coupling coupling) {
  if (coupling == Coupling::Pseudoscalar) {
    throw UnsupportedCoupling(
        "no closed-form step scattering for pseudoscalar coupling; use the dynamics module");
  }
}

std::string describe(const ScatteringQuery& q) {
  std::ostringstream out;
  out << "E=" << q.energy << " V0=" << q.step_height << " m0=" << q.mass;
  return out.str();
}

}  // namespace

std::string_view to_string(Coupling coupling) {
  switch (coupling) {
    case Coupling::Vector: return "vector";
    case Coupling::Scalar: return "scalar";
    case Coupling::Pseudoscalar: return "pseudoscalar";
  }
  return "unknown";
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Transmission: return "transmission";
    case Regime::Evanescent: return "evanescent";
    case Regime::KleinZone: return "klein_zone";
  }
  return "unknown";
}

std::optional<Coupling> parse_coupling(std::string_view text) {
  if (text == "vector") return Coupling::Vector;
  if (text == "scalar") return Coupling::Scalar;
  if (text == "pseudoscalar") return Coupling::Pseudoscalar;
  return std::nullopt;
}

algebra::ComplexMatrix coupling_matrix(Coupling coupling) {
  switch (coupling) {
    case Coupling::Vector: return algebra::identity(2);
    case Coupling::Scalar: return algebra::pauli_z();
    case Coupling::Pseudoscalar: return algebra::pauli_y();
  }
  throw std::invalid_argument("unknown coupling");
}

void validate(const ScatteringQuery& query) {
  if (!std::isfinite(query.energy) || !std::isfinite(query.step_height) ||
      !std::isfinite(query.mass)) {
    throw PreconditionError("non-finite scattering parameter (" + describe(query) + ")");
  }
  if (!(query.mass > 0.0)) {
    throw PreconditionError("rest mass must satisfy m0 > 0 (" + describe(query) + ")");
  }
  if (!(query.energy > query.mass)) {
    throw PreconditionError("incident wave below threshold: requires E > m0 (" +
                            describe(query) + ")");
  }
}

std::complex<double> kinematic_factor(double kinetic_energy, double mass) {
  const double denominator = kinetic_energy + mass;
  if (denominator == 0.0) {
    throw SingularConfiguration("transmitted factor has a pole at e + m = 0 (e=" +
                                std::to_string(kinetic_energy) + ", m=" + std::to_string(mass) +
                                ")");
  }
  const double radicand = kinetic_energy * kinetic_energy - mass * mass;
  if (radicand >= 0.0) return {std::sqrt(radicand) / denominator, 0.0};
  return {0.0, std::sqrt(-radicand) / denominator};
}

double incident_factor(double energy, double mass) {
  if (!std::isfinite(energy) || !std::isfinite(mass) || !(mass > 0.0)) {
    throw PreconditionError("incident factor needs finite E and m0 > 0");
  }
  if (energy < mass) {
    throw PreconditionError("incident wave below threshold: requires E >= m0");
  }
  return kinematic_factor(energy, mass).real();
}

std::complex<double> transmitted_factor(double energy, double step_height, double mass,
                                        Coupling coupling) {
  require_closed_form(coupling);
  if (!std::isfinite(energy) || !std::isfinite(step_height) || !std::isfinite(mass)) {
    throw PreconditionError("transmitted factor needs finite parameters");
  }
  if (coupling == Coupling::Vector) return kinematic_factor(energy - step_height, mass);
  // Scalar: the step adds to the mass, m0 -> m0 + V0, and leaves E alone.
  return kinematic_factor(energy, mass + step_height);
}

Coefficients coefficients(double a, std::complex<double> b, std::complex<double> reflection,
                          std::complex<double> transmission) {
  if (b.real() == 0.0) return {1.0, 0.0};
  return {std::norm(reflection), b.real() / a * std::norm(transmission)};
}

Regime classify_regime(const ScatteringQuery& query) {
  require_closed_form(query.coupling);
  validate(query);
  const double m = query.mass;
  if (query.coupling == Coupling::Vector) {
    const double e = query.energy - query.step_height;
    if (e > m) return Regime::Transmission;
    if (e < -m) return Regime::KleinZone;
    return Regime::Evanescent;
  }
  return query.energy > std::abs(m + query.step_height) ? Regime::Transmission
                                                        : Regime::Evanescent;
}

ScatteringResult amplitudes(const ScatteringQuery& query) {
  require_closed_form(query.coupling);
  validate(query);

  ScatteringResult out;
  out.incident_factor = incident_factor(query.energy, query.mass);
  out.transmitted_factor =
      transmitted_factor(query.energy, query.step_height, query.mass, query.coupling);

  const std::complex<double> a = out.incident_factor;
  const std::complex<double> sum = a + out.transmitted_factor;
  if (sum == 0.0) {
    throw SingularConfiguration("a + b = 0, amplitudes undefined (" + describe(query) + ")");
  }
  out.reflection_amplitude = (a - out.transmitted_factor) / sum;
  out.transmission_amplitude = 2.0 * a / sum;

  const auto c = coefficients(out.incident_factor, out.transmitted_factor,
                              out.reflection_amplitude, out.transmission_amplitude);
  out.reflection = c.reflection;
  out.transmission = c.transmission;
  out.regime = classify_regime(query);
  return out;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Energy: return "E";
    case SweepAxis::StepHeight: return "V0";
    case SweepAxis::Mass: return "m0";
  }
  return "unknown";
}

std::optional<SweepAxis> parse_sweep_axis(std::string_view text) {
  if (text == "E") return SweepAxis::Energy;
  if (text == "V0") return SweepAxis::StepHeight;
  if (text == "m0") return SweepAxis::Mass;
  return std::nullopt;
}

std::string_view to_string(RowStatus status) {
  switch (status) {
    case RowStatus::Ok: return "ok";
    case RowStatus::Invalid: return "invalid";
    case RowStatus::Singular: return "singular";
  }
  return "unknown";
}

std::vector<SweepRow> sweep(const ScatteringQuery& base, SweepAxis axis, double from, double to,
                            int steps) {
  require_closed_form(base.coupling);
  if (!std::isfinite(from) || !std::isfinite(to) || !(from < to)) {
    throw PreconditionError("sweep range must satisfy from < to");
  }
  if (steps < 2) throw PreconditionError("sweep needs at least 2 steps");

  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    // Endpoint-exact grid: value(steps-1) == to.
    const double value = from + (to - from) * static_cast<double>(i) / (steps - 1);
    SweepRow row{base, RowStatus::Ok, std::nullopt, {}};
    switch (axis) {
      case SweepAxis::Energy: row.query.energy = value; break;
      case SweepAxis::StepHeight: row.query.step_height = value; break;
      case SweepAxis::Mass: row.query.mass = value; break;
    }
    try {
      row.result = amplitudes(row.query);
    } catch (const PreconditionError& e) {
      row.status = RowStatus::Invalid;
      row.message = e.what();
    } catch (const SingularConfiguration& e) {
      row.status = RowStatus::Singular;
      row.message = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace diracstep::scattering
