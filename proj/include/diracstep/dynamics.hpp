// Split-step spectral evolution of a two-component spinor on a periodic grid
// under H = sigma_x p + sigma_z m0 + Gamma V(x), with Gamma = I (vector),
// sigma_z (scalar) or sigma_y (pseudoscalar). Natural units.
//
// Both substeps are exact 2x2 unitaries: the free part is diagonal in k, the
// potential part is diagonal in x. Strang ordering (V/2, free, V/2) gives a
// second-order, unconditionally stable scheme.
#pragma once

#include "diracstep/scattering.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace diracstep::dynamics {

using scattering::Coupling;
using Complex = std::complex<double>;

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite values appeared during evolution; `step()` is the step index.
class NumericalBreakdown : public std::runtime_error {
 public:
  NumericalBreakdown(const std::string& what, long step)
      : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// Uniform periodic grid x_j = left_edge + j dx, j in [0, N).
class Grid {
 public:
  /// N must be a power of two >= 256 and length must be positive.
  Grid(std::size_t points, double length, double left_edge);

  std::size_t points() const { return points_; }
  double length() const { return length_; }
  double left_edge() const { return left_edge_; }
  double right_edge() const { return left_edge_ + length_; }
  double dx() const { return length_ / static_cast<double>(points_); }
  double x(std::size_t j) const { return left_edge_ + static_cast<double>(j) * dx(); }

  /// Wavenumber of FFT bin j: 2 pi j' / L with j' in [-N/2, N/2).
  double wavenumber(std::size_t j) const;

 private:
  std::size_t points_;
  double length_;
  double left_edge_;
};

struct WavePacketState {
  Grid grid;
  std::vector<Complex> upper;
  std::vector<Complex> lower;
  double time = 0.0;

  explicit WavePacketState(Grid g)
      : grid(g), upper(g.points()), lower(g.points()) {}
};

struct PotentialProfile {
  enum class Kind { Zero, Step };

  Kind kind = Kind::Zero;
  double height = 0.0;
  double step_position = 0.0;
  double smoothing = 0.0;  // 0: sharp V0 theta(x - x_step); w > 0: V0 (1 + tanh((x - x_step)/w))/2
  Coupling coupling = Coupling::Vector;

  static PotentialProfile zero() { return {}; }
  static PotentialProfile step(double height, double position, double smoothing,
                               Coupling coupling);
  /// Same height everywhere; used to compare the Lorentz channels.
  static PotentialProfile constant(double height, Coupling coupling);

  double value_at(double x) const;
};

struct ObservableRecord {
  long step = 0;
  double time = 0.0;
  double norm = 0.0;
  double mean_x = 0.0;
  double p_left = 0.0;
  double p_right = 0.0;
  double current = 0.0;  // psi^dagger sigma_x psi at the grid point nearest the split
};

/// Lower/upper ratio k / (E(k) + m) of the positive-energy free spinor.
double positive_energy_ratio(double wavenumber, double mass);

/// Gaussian envelope exp(-(x - x_c)^2 / (4 sigma^2)) exp(i k_c x), projected
/// mode by mode onto the positive-energy free spinors of mass `mass` and
/// normalised to one. Requires sigma >= 4 dx, 5 sigma edge margins, k_c > 0
/// and mass >= 0.
WavePacketState gaussian_packet(const Grid& grid, double center, double wavenumber, double sigma,
                                double mass);

/// exp(-i H0 dt) applied exactly in momentum space, H0 = sigma_x k + sigma_z m.
WavePacketState free_half_step(const WavePacketState& state, double mass, double dt);

/// exp(-i Gamma V(x) dt) applied pointwise.
WavePacketState potential_half_step(const WavePacketState& state,
                                    const PotentialProfile& profile, double dt);

/// Where p_left / p_right are split: the step position, or mid-domain for
/// a Zero profile.
double split_point(const PotentialProfile& profile, const Grid& grid);

ObservableRecord measure(const WavePacketState& state, double x_split);

struct EvolveOptions {
  /// dt <= ratio * dx is enforced as an accuracy heuristic (the scheme is
  /// unconditionally stable). Set to infinity to lift it.
  double max_dt_over_dx = 0.5;
  /// Called on every recorded state, including step 0.
  std::function<void(const WavePacketState&, const ObservableRecord&)> on_record;
};

struct EvolveResult {
  WavePacketState state;
  std::vector<ObservableRecord> records;
};

/// Strang steps V(dt/2) free(dt) V(dt/2). Records step 0, every
/// record_every-th step and the final step. Throws NumericalBreakdown with
/// the offending step on NaN/Inf.
EvolveResult evolve(const WavePacketState& initial, const PotentialProfile& profile, double mass,
                    double dt, long n_steps, long record_every,
                    const EvolveOptions& options = {});

/// Reusable propagator holding the FFT plans and kernel tables for one
/// (grid, profile, mass, dt). Not copyable; not safe to share across threads.
class SplitStepPropagator {
 public:
  SplitStepPropagator(const Grid& grid, const PotentialProfile& profile, double mass, double dt);
  ~SplitStepPropagator();
  SplitStepPropagator(const SplitStepPropagator&) = delete;
  SplitStepPropagator& operator=(const SplitStepPropagator&) = delete;

  /// One Strang step; advances state.time by dt.
  void step(WavePacketState& state);
  void apply_free(WavePacketState& state, double dt);
  void apply_potential(WavePacketState& state, double dt) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace diracstep::dynamics
