#include "diracstep/scattering.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace diracstep::scattering {
namespace {

using cd = std::complex<double>;

const double kSqrt5 = std::sqrt(5.0);

// ---------------------------------------------------------------------------
// Oracle: match plane-wave spinors at the step and measure fluxes directly.
//
// Left of the step: (1, a) e^{ikx} + R (1, -a) e^{-ikx}; right of it:
// T (1, b) e^{ik'x}. Continuity of both components gives a 2x2 linear system
// for (R, T), solved numerically here. Fluxes come from psi^dagger sigma_x psi.
// The lower/upper ratios are evaluated from the Hamiltonian eigenproblem
// rather than the closed form used by the library.

/// Lower/upper ratio of the eigenvector of sigma_x p + sigma_z m with energy e.
cd spinor_ratio(double e, cd p, double m) {
  // (m - e) u + p d = 0  =>  d/u = (e - m)/p
  return (e - m) / p;
}

struct OracleResult {
  cd reflection;
  cd transmission;
  double r;
  double t;
};

OracleResult match_at_step(double energy, double mass, double kinetic_right, double mass_right) {
  const double k = std::sqrt(energy * energy - mass * mass);
  const cd a = spinor_ratio(energy, k, mass);
  // Principal root for the transmitted momentum. When e + m < 0 the ratio
  // (e - m)/p is negative: the Klein-zone branch.
  const cd p_right = std::sqrt(cd(kinetic_right * kinetic_right - mass_right * mass_right));
  const cd b = p_right == 0.0 ? cd(0.0) : spinor_ratio(kinetic_right, p_right, mass_right);

  Eigen::Matrix2cd lhs;
  Eigen::Vector2cd rhs;
  // upper: 1 + R = T;  lower: a - a R = b T
  lhs << 1.0, -1.0, -a, -b;
  rhs << -1.0, -a;
  const Eigen::Vector2cd sol = lhs.fullPivLu().solve(rhs);

  auto flux = [](cd up, cd dn) { return 2.0 * (std::conj(up) * dn).real(); };
  const double incident = flux(1.0, a);
  return {sol(0), sol(1), -flux(sol(0), -a * sol(0)) / incident,
          flux(sol(1), b * sol(1)) / incident};
}

OracleResult oracle(const ScatteringQuery& q) {
  if (q.coupling == Coupling::Vector) {
    return match_at_step(q.energy, q.mass, q.energy - q.step_height, q.mass);
  }
  return match_at_step(q.energy, q.mass, q.energy, q.mass + q.step_height);
}

// ---------------------------------------------------------------------------

TEST(IncidentFactor, Examples) {
  EXPECT_NEAR(incident_factor(2.0, 1.0), std::sqrt(3.0) / 3.0, 1e-15);
  EXPECT_NEAR(incident_factor(2.0, 1.0), 0.5773503, 1e-7);
  EXPECT_EQ(incident_factor(1.0, 1.0), 0.0);
  EXPECT_NEAR(incident_factor(1.5, 1.0), kSqrt5 / 5.0, 1e-15);
  EXPECT_NEAR(incident_factor(1.5, 1.0), 0.4472136, 1e-7);
}

TEST(IncidentFactor, EqualsRatioForm) {
  for (double e : {1.01, 1.7, 3.0, 25.0}) {
    EXPECT_NEAR(incident_factor(e, 1.0), std::sqrt((e - 1.0) / (e + 1.0)), 1e-15);
    EXPECT_LT(incident_factor(e, 1.0), 1.0);
  }
}

TEST(IncidentFactor, RejectsBelowThresholdAndBadMass) {
  EXPECT_THROW(incident_factor(0.5, 1.0), PreconditionError);
  EXPECT_THROW(incident_factor(2.0, 0.0), PreconditionError);
  EXPECT_THROW(incident_factor(std::nan(""), 1.0), PreconditionError);
}

TEST(TransmittedFactor, ZeroStepReducesToIncident) {
  for (auto c : {Coupling::Vector, Coupling::Scalar}) {
    const cd b = transmitted_factor(1.7, 0.0, 1.0, c);
    EXPECT_EQ(b, cd(incident_factor(1.7, 1.0), 0.0));
  }
}

TEST(TransmittedFactor, KleinZoneIsNegative) {
  const cd b = transmitted_factor(1.5, 3.0, 1.0, Coupling::Vector);
  EXPECT_NEAR(b.real(), -kSqrt5, 1e-14);
  EXPECT_NEAR(b.real(), -2.2360680, 1e-7);
  EXPECT_EQ(b.imag(), 0.0);
}

TEST(TransmittedFactor, VectorEvanescentIsPositiveImaginary) {
  const cd b = transmitted_factor(1.5, 1.0, 1.0, Coupling::Vector);
  EXPECT_EQ(b.real(), 0.0);
  EXPECT_NEAR(b.imag(), std::sqrt(3.0) / 3.0, 1e-15);
  EXPECT_NEAR(b.imag(), 0.5773503, 1e-7);
}

TEST(TransmittedFactor, ScalarEvanescent) {
  const cd b = transmitted_factor(1.5, 3.0, 1.0, Coupling::Scalar);
  EXPECT_EQ(b.real(), 0.0);
  EXPECT_NEAR(b.imag(), std::sqrt(13.75) / 5.5, 1e-15);
  EXPECT_NEAR(b.imag(), 0.6741999, 1e-7);
}

TEST(TransmittedFactor, PseudoscalarRejected) {
  EXPECT_THROW(transmitted_factor(1.5, 1.0, 1.0, Coupling::Pseudoscalar), UnsupportedCoupling);
  EXPECT_THROW(amplitudes({1.5, 1.0, 1.0, Coupling::Pseudoscalar}), UnsupportedCoupling);
  EXPECT_THROW(classify_regime({1.5, 1.0, 1.0, Coupling::Pseudoscalar}), UnsupportedCoupling);
}

TEST(TransmittedFactor, PoleIsSingular) {
  // E - V0 = -m0 exactly.
  EXPECT_THROW(transmitted_factor(1.5, 2.5, 1.0, Coupling::Vector), SingularConfiguration);
  EXPECT_THROW(amplitudes({1.5, 2.5, 1.0, Coupling::Vector}), SingularConfiguration);
}

TEST(CouplingMatrix, LorentzStructures) {
  EXPECT_EQ(coupling_matrix(Coupling::Vector), algebra::identity(2));
  EXPECT_EQ(coupling_matrix(Coupling::Scalar), algebra::pauli_z());
  EXPECT_EQ(coupling_matrix(Coupling::Pseudoscalar), algebra::pauli_y());
}

TEST(Amplitudes, KleinZoneClosedForm) {
  const auto res = amplitudes({1.5, 3.0, 1.0, Coupling::Vector});
  EXPECT_NEAR(res.incident_factor, kSqrt5 / 5.0, 1e-12);
  EXPECT_NEAR(res.transmitted_factor.real(), -kSqrt5, 1e-12);
  EXPECT_NEAR(res.reflection_amplitude.real(), -1.5, 1e-12);
  EXPECT_NEAR(res.transmission_amplitude.real(), -0.5, 1e-12);
  EXPECT_EQ(res.reflection_amplitude.imag(), 0.0);
  EXPECT_NEAR(res.reflection, 2.25, 1e-12);
  EXPECT_NEAR(res.transmission, -1.25, 1e-12);
  EXPECT_EQ(res.regime, Regime::KleinZone);
}

TEST(Amplitudes, ZeroStepIsExact) {
  for (auto c : {Coupling::Vector, Coupling::Scalar}) {
    for (double e : {1.01, 1.5, 4.0}) {
      const auto res = amplitudes({e, 0.0, 1.0, c});
      EXPECT_EQ(res.reflection_amplitude, cd(0.0, 0.0));
      EXPECT_EQ(res.transmission_amplitude, cd(1.0, 0.0));
      EXPECT_EQ(res.reflection, 0.0);
      EXPECT_EQ(res.transmission, 1.0);
    }
  }
}

TEST(Amplitudes, EvanescentIsUnimodular) {
  const auto res = amplitudes({1.5, 1.0, 1.0, Coupling::Vector});
  EXPECT_NEAR(std::abs(res.reflection_amplitude), 1.0, 1e-15);
  EXPECT_EQ(res.reflection, 1.0);
  EXPECT_EQ(res.transmission, 0.0);
  EXPECT_EQ(res.regime, Regime::Evanescent);
}

TEST(Amplitudes, RejectsInvalidQueries) {
  EXPECT_THROW(amplitudes({0.5, 1.0, 1.0, Coupling::Vector}), PreconditionError);
  EXPECT_THROW(amplitudes({1.0, 1.0, 1.0, Coupling::Vector}), PreconditionError);
  EXPECT_THROW(amplitudes({2.0, 1.0, 0.0, Coupling::Vector}), PreconditionError);
  EXPECT_THROW(amplitudes({2.0, INFINITY, 1.0, Coupling::Vector}), PreconditionError);
}

TEST(Amplitudes, AgreeWithSpinorMatchingOracle) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> energy(1.0, 5.0);
  std::uniform_real_distribution<double> step(-8.0, 12.0);
  for (auto c : {Coupling::Vector, Coupling::Scalar}) {
    for (int i = 0; i < 2000; ++i) {
      const ScatteringQuery q{energy(rng) + 1e-3, step(rng), 1.0, c};
      ScatteringResult res;
      try {
        res = amplitudes(q);
      } catch (const SingularConfiguration&) {
        continue;
      }
      const auto ref = oracle(q);
      const double scale = 1.0 + std::abs(ref.reflection);
      ASSERT_NEAR(std::abs(res.reflection_amplitude - ref.reflection), 0.0, 1e-10 * scale)
          << "E=" << q.energy << " V0=" << q.step_height;
      ASSERT_NEAR(std::abs(res.transmission_amplitude - ref.transmission), 0.0, 1e-10 * scale);
      ASSERT_NEAR(res.reflection, ref.r, 1e-9 * scale * scale);
      ASSERT_NEAR(res.transmission, ref.t, 1e-9 * scale * scale);
    }
  }
}

TEST(Coefficients, TransmissionRegimeSumsToOne) {
  // Independent evaluation straight from the formulas.
  const double a = std::sqrt(4.0 - 1.0) / 3.0;
  const double b = std::sqrt(1.5 * 1.5 - 1.0) / 2.5;
  const double r_ref = std::pow((a - b) / (a + b), 2);
  const double t_ref = b / a * std::pow(2 * a / (a + b), 2);
  ASSERT_NEAR(r_ref + t_ref, 1.0, 1e-15);

  const auto res = amplitudes({2.0, 0.5, 1.0, Coupling::Vector});
  EXPECT_GT(res.reflection, 0.0);
  EXPECT_LT(res.reflection, 1.0);
  EXPECT_NEAR(res.reflection, r_ref, 1e-15);
  EXPECT_NEAR(res.transmission, t_ref, 1e-15);
  EXPECT_NEAR(res.reflection + res.transmission, 1.0, 1e-15);
}

TEST(Coefficients, KleinExample) {
  const auto c = coefficients(kSqrt5 / 5.0, -kSqrt5, -1.5, -0.5);
  EXPECT_NEAR(c.reflection, 2.25, 1e-15);
  EXPECT_NEAR(c.transmission, -1.25, 1e-14);
}

TEST(Coefficients, EvanescentGivesTotalReflection) {
  const auto c = coefficients(0.5, cd(0.0, 0.3), cd(0.6, 0.8), cd(1.6, 0.8));
  EXPECT_EQ(c.reflection, 1.0);
  EXPECT_EQ(c.transmission, 0.0);
}

TEST(ClassifyRegime, Examples) {
  EXPECT_EQ(classify_regime({1.5, 3.0, 1.0, Coupling::Vector}), Regime::KleinZone);
  EXPECT_EQ(classify_regime({1.5, 0.0, 1.0, Coupling::Vector}), Regime::Transmission);
  EXPECT_EQ(classify_regime({1.5, 3.0, 1.0, Coupling::Scalar}), Regime::Evanescent);
}

TEST(ClassifyRegime, EqualitiesAreEvanescent) {
  EXPECT_EQ(classify_regime({1.5, 0.5, 1.0, Coupling::Vector}), Regime::Evanescent);
  EXPECT_EQ(classify_regime({1.5, 2.5, 1.0, Coupling::Vector}), Regime::Evanescent);
  EXPECT_EQ(classify_regime({1.5, 0.5, 1.0, Coupling::Scalar}), Regime::Evanescent);
  // Boundary point is still computable where the factor has no pole.
  const auto edge = amplitudes({1.5, 0.5, 1.0, Coupling::Vector});
  EXPECT_EQ(edge.transmitted_factor, cd(0.0, 0.0));
  EXPECT_EQ(edge.reflection, 1.0);
  EXPECT_EQ(edge.transmission, 0.0);
}

TEST(ClassifyRegime, ScalarNeverKlein) {
  for (double v = -20.0; v <= 20.0; v += 0.37) {
    EXPECT_NE(classify_regime({1.8, v, 1.0, Coupling::Scalar}), Regime::KleinZone);
  }
}

// ---------------------------------------------------------------------------
// Properties

struct RegimeSampler {
  std::mt19937_64 rng{12345};
  std::uniform_real_distribution<double> mass{0.2, 3.0};
  std::uniform_real_distribution<double> unit{0.0, 1.0};

  /// Random query of the requested regime (rejection sampling).
  ScatteringQuery draw(Coupling coupling, Regime regime) {
    while (true) {
      const double m = mass(rng);
      const double e = m * (1.0 + 4.0 * unit(rng)) + 1e-9;
      const double v = m * (-12.0 + 24.0 * unit(rng));
      const ScatteringQuery q{e, v, m, coupling};
      if (!(e > m)) continue;
      if (classify_regime(q) == regime) return q;
    }
  }
};

TEST(Properties, UnitarityAndContinuity) {
  RegimeSampler sampler;
  const std::pair<Coupling, Regime> cases[] = {
      {Coupling::Vector, Regime::Transmission}, {Coupling::Vector, Regime::Evanescent},
      {Coupling::Vector, Regime::KleinZone},    {Coupling::Scalar, Regime::Transmission},
      {Coupling::Scalar, Regime::Evanescent}};
  for (const auto& [coupling, regime] : cases) {
    for (int i = 0; i < 2000; ++i) {
      const auto q = sampler.draw(coupling, regime);
      const auto res = amplitudes(q);
      const cd lhs = 1.0 + res.reflection_amplitude;
      ASSERT_LE(std::abs(lhs - res.transmission_amplitude),
                1e-14 * std::max(1.0, std::abs(res.transmission_amplitude)));
      if (res.transmitted_factor.real() != 0.0) {
        ASSERT_NEAR(res.reflection + res.transmission, 1.0, 1e-12);
      } else {
        ASSERT_NEAR(std::abs(res.reflection_amplitude), 1.0, 1e-12);
        ASSERT_EQ(res.transmission, 0.0);
      }
    }
  }
}

TEST(Properties, KleinEquivalenceAndScalarNoKlein) {
  const double m = 1.0;
  for (int i = 1; i <= 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const double e = m + 4.0 * m * i / 100.0;
      const double v = 10.0 * m * j / 99.0;
      const auto vec = amplitudes({e, v, m, Coupling::Vector});
      ASSERT_EQ(vec.reflection > 1.0, vec.regime == Regime::KleinZone) << "E=" << e << " V0=" << v;
      ASSERT_EQ(vec.regime == Regime::KleinZone, v > e + m);
      const auto sca = amplitudes({e, v, m, Coupling::Scalar});
      ASSERT_LE(sca.reflection, 1.0);
    }
  }
}

TEST(Properties, ScalarIsMassSubstitution) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double m = 0.1 + 3.0 * u(rng);
    const double e = m * (1.0 + 5.0 * u(rng));
    const double v = -10.0 + 20.0 * u(rng);
    if (e + m + v == 0.0) continue;
    EXPECT_EQ(transmitted_factor(e, v, m, Coupling::Scalar),
              transmitted_factor(e, 0.0, m + v, Coupling::Vector));
  }
}

// ---------------------------------------------------------------------------

TEST(Sweep, RejectsDegenerateRange) {
  const ScatteringQuery base{1.5, 0.0, 1.0, Coupling::Vector};
  EXPECT_THROW(sweep(base, SweepAxis::StepHeight, 0.0, 0.0, 5), PreconditionError);
  EXPECT_THROW(sweep(base, SweepAxis::StepHeight, 0.0, 1.0, 1), PreconditionError);
  EXPECT_THROW(sweep({1.5, 0.0, 1.0, Coupling::Pseudoscalar}, SweepAxis::StepHeight, 0.0, 1.0, 3),
               UnsupportedCoupling);
}

TEST(Sweep, StepHeightRegimes) {
  const auto rows = sweep({1.5, 0.0, 1.0, Coupling::Vector}, SweepAxis::StepHeight, 0.0, 4.0, 5);
  ASSERT_EQ(rows.size(), 5u);
  const Regime expected[] = {Regime::Transmission, Regime::Evanescent, Regime::Evanescent,
                             Regime::KleinZone, Regime::KleinZone};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].query.step_height, static_cast<double>(i));
    ASSERT_TRUE(rows[i].result);
    EXPECT_EQ(rows[i].result->regime, expected[i]);
  }
}

TEST(Sweep, EnergyAxisZeroStep) {
  const auto rows = sweep({0.0, 0.0, 1.0, Coupling::Vector}, SweepAxis::Energy, 1.1, 3.1, 3);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows.back().query.energy, 3.1);
  for (const auto& row : rows) {
    ASSERT_TRUE(row.result);
    EXPECT_EQ(row.result->reflection, 0.0);
  }
}

TEST(Sweep, ErrorRowsKeepGridOrder) {
  const auto rows = sweep({0.0, 0.0, 1.0, Coupling::Vector}, SweepAxis::Energy, 0.5, 2.0, 4);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].status, RowStatus::Invalid);  // E = 0.5
  EXPECT_EQ(rows[1].status, RowStatus::Invalid);  // E = 1.0, needs E > m0
  EXPECT_FALSE(rows[1].result);
  EXPECT_NE(rows[1].message.find("E > m0"), std::string::npos);
  EXPECT_EQ(rows[2].status, RowStatus::Ok);
  EXPECT_EQ(rows[3].status, RowStatus::Ok);

  const auto pole = sweep({1.5, 0.0, 1.0, Coupling::Vector}, SweepAxis::StepHeight, 0.0, 4.0, 401);
  int singular = 0;
  for (const auto& row : pole) singular += row.status == RowStatus::Singular;
  EXPECT_EQ(singular, 1);
  EXPECT_EQ(pole[250].status, RowStatus::Singular);
  EXPECT_EQ(pole[250].query.step_height, 2.5);
}

}  // namespace
}  // namespace diracstep::scattering
