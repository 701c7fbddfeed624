#include "diracstep/dynamics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>

namespace diracstep::dynamics {

namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Kernel {
  Complex u00, u01, u10, u11;
};

Kernel free_kernel(double k, double mass, double dt) {
  const double omega = std::hypot(k, mass);
  const double c = std::cos(omega * dt);
  // sin(omega dt) / omega, with the omega -> 0 limit dt.
  const double s = omega > 0.0 ? std::sin(omega * dt) / omega : dt;
  const Complex off{0.0, -s * k};
  return {Complex{c, -s * mass}, off, off, Complex{c, s * mass}};
}

Kernel potential_kernel(double v, Coupling coupling, double dt) {
  const double phase = v * dt;
  switch (coupling) {
    case Coupling::Vector: {
      const Complex p = std::polar(1.0, -phase);
      return {p, 0.0, 0.0, p};
    }
    case Coupling::Scalar:
      return {std::polar(1.0, -phase), 0.0, 0.0, std::polar(1.0, phase)};
    case Coupling::Pseudoscalar: {
      // cos I - i sin sigma_y = [[c, -s], [s, c]]
      const double c = std::cos(phase);
      const double s = std::sin(phase);
      return {c, -s, s, c};
    }
  }
  throw std::invalid_argument("unknown coupling");
}

inline void apply(const Kernel& u, Complex& up, Complex& dn) {
  const Complex a = up;
  const Complex b = dn;
  up = u.u00 * a + u.u01 * b;
  dn = u.u10 * a + u.u11 * b;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};

}  // namespace

Grid::Grid(std::size_t points, double length, double left_edge)
    : points_(points), length_(length), left_edge_(left_edge) {
  if (points < 256 || !is_power_of_two(points)) {
    throw PreconditionError("grid size must be a power of two >= 256, got " +
                            std::to_string(points));
  }
  if (!std::isfinite(length) || !(length > 0.0)) {
    throw PreconditionError("domain length must be positive");
  }
  if (!std::isfinite(left_edge)) throw PreconditionError("left edge must be finite");
}

double Grid::wavenumber(std::size_t j) const {
  const auto n = static_cast<long>(points_);
  auto shifted = static_cast<long>(j);
  if (shifted >= n / 2) shifted -= n;
  return 2.0 * std::numbers::pi * static_cast<double>(shifted) / length_;
}

PotentialProfile PotentialProfile::step(double height, double position, double smoothing,
                                        Coupling coupling) {
  if (!std::isfinite(height) || !std::isfinite(position) || !std::isfinite(smoothing) ||
      smoothing < 0.0) {
    throw PreconditionError("step needs finite height/position and smoothing >= 0");
  }
  return {Kind::Step, height, position, smoothing, coupling};
}

PotentialProfile PotentialProfile::constant(double height, Coupling coupling) {
  // A step placed at -infinity is the same everywhere.
  return {Kind::Step, height, -std::numeric_limits<double>::infinity(), 0.0, coupling};
}

double PotentialProfile::value_at(double x) const {
  if (kind == Kind::Zero) return 0.0;
  if (smoothing > 0.0) return height * 0.5 * (1.0 + std::tanh((x - step_position) / smoothing));
  return x >= step_position ? height : 0.0;
}

double positive_energy_ratio(double wavenumber, double mass) {
  const double denominator = std::hypot(wavenumber, mass) + mass;
  if (denominator == 0.0) return 1.0;  // massless k = 0: pick the right mover
  return wavenumber / denominator;
}

namespace {

// Forward/backward transforms of both spinor components over one buffer:
// upper in [0, N), lower in [N, 2N).
class SpectralTransform {
 public:
  explicit SpectralTransform(std::size_t points) : points_(points) {
    const auto n = static_cast<int>(points);
    buffer_.reset(fftw_alloc_complex(2 * points));
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_many_dft(1, &n, 2, buffer_.get(), nullptr, 1, n, buffer_.get(), nullptr,
                                  1, n, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_many_dft(1, &n, 2, buffer_.get(), nullptr, 1, n, buffer_.get(),
                                   nullptr, 1, n, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (forward_ == nullptr || backward_ == nullptr) {
      throw std::runtime_error("FFTW planning failed");
    }
  }

  ~SpectralTransform() {
    std::lock_guard lock(planner_mutex());
    if (forward_ != nullptr) fftw_destroy_plan(forward_);
    if (backward_ != nullptr) fftw_destroy_plan(backward_);
  }

  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  /// psi -> F^-1 U(k) F psi with a 2x2 kernel per FFT bin.
  template <class KernelAt>
  void map_modes(WavePacketState& state, KernelAt&& kernel_at) {
    Complex* up = reinterpret_cast<Complex*>(buffer_.get());
    Complex* dn = up + points_;
    std::copy(state.upper.begin(), state.upper.end(), up);
    std::copy(state.lower.begin(), state.lower.end(), dn);
    fftw_execute(forward_);
    for (std::size_t j = 0; j < points_; ++j) apply(kernel_at(j), up[j], dn[j]);
    fftw_execute(backward_);
    const double scale = 1.0 / static_cast<double>(points_);
    for (std::size_t j = 0; j < points_; ++j) {
      state.upper[j] = up[j] * scale;
      state.lower[j] = dn[j] * scale;
    }
  }

 private:
  std::size_t points_;
  std::unique_ptr<fftw_complex[], FftwFree> buffer_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace

struct SplitStepPropagator::Impl {
  Grid grid;
  PotentialProfile profile;
  double mass;
  double dt;
  SpectralTransform transform;
  std::vector<Kernel> free_full;       // exp(-i H0 dt) per mode
  std::vector<Kernel> potential_half;  // exp(-i Gamma V dt/2) per point

  Impl(const Grid& g, const PotentialProfile& p, double m, double step)
      : grid(g), profile(p), mass(m), dt(step), transform(g.points()) {
    free_full.reserve(grid.points());
    potential_half.reserve(grid.points());
    for (std::size_t j = 0; j < grid.points(); ++j) {
      free_full.push_back(free_kernel(grid.wavenumber(j), mass, dt));
      potential_half.push_back(
          potential_kernel(profile.value_at(grid.x(j)), profile.coupling, 0.5 * dt));
    }
  }

  void potential_step(WavePacketState& state, const std::vector<Kernel>& kernels) const {
    for (std::size_t j = 0; j < grid.points(); ++j) {
      apply(kernels[j], state.upper[j], state.lower[j]);
    }
  }
};

SplitStepPropagator::SplitStepPropagator(const Grid& grid, const PotentialProfile& profile,
                                         double mass, double dt)
    : impl_(std::make_unique<Impl>(grid, profile, mass, dt)) {}

SplitStepPropagator::~SplitStepPropagator() = default;

void SplitStepPropagator::step(WavePacketState& state) {
  impl_->potential_step(state, impl_->potential_half);
  impl_->transform.map_modes(state, [this](std::size_t j) -> const Kernel& { return impl_->free_full[j]; });
  impl_->potential_step(state, impl_->potential_half);
  state.time += impl_->dt;
}

void SplitStepPropagator::apply_free(WavePacketState& state, double dt) {
  if (dt == impl_->dt) {
    impl_->transform.map_modes(state, [this](std::size_t j) -> const Kernel& { return impl_->free_full[j]; });
  } else {
    impl_->transform.map_modes(state, [&](std::size_t j) {
      return free_kernel(impl_->grid.wavenumber(j), impl_->mass, dt);
    });
  }
}

void SplitStepPropagator::apply_potential(WavePacketState& state, double dt) const {
  if (dt == 0.5 * impl_->dt) {
    impl_->potential_step(state, impl_->potential_half);
    return;
  }
  for (std::size_t j = 0; j < impl_->grid.points(); ++j) {
    const Kernel u = potential_kernel(impl_->profile.value_at(impl_->grid.x(j)),
                                      impl_->profile.coupling, dt);
    apply(u, state.upper[j], state.lower[j]);
  }
}

namespace {

void check_same_grid(const WavePacketState& state) {
  if (state.upper.size() != state.grid.points() || state.lower.size() != state.grid.points()) {
    throw PreconditionError("state components do not match the grid size");
  }
}

void check_dt(double dt) {
  if (!std::isfinite(dt) || !(dt > 0.0)) throw PreconditionError("time step must be positive");
}

}  // namespace

WavePacketState gaussian_packet(const Grid& grid, double center, double wavenumber, double sigma,
                                double mass) {
  if (!std::isfinite(sigma) || sigma < 4.0 * grid.dx()) {
    throw PreconditionError("packet width sigma=" + std::to_string(sigma) +
                            " is unresolved: needs sigma >= 4 dx = " +
                            std::to_string(4.0 * grid.dx()));
  }
  if (!std::isfinite(center) || center - 5.0 * sigma < grid.left_edge() ||
      center + 5.0 * sigma > grid.right_edge()) {
    throw PreconditionError("packet center x_c=" + std::to_string(center) +
                            " must lie at least 5 sigma from both domain edges");
  }
  if (!std::isfinite(wavenumber) || !(wavenumber > 0.0)) {
    throw PreconditionError("central wavenumber k_c must be positive");
  }
  if (!std::isfinite(mass) || mass < 0.0) throw PreconditionError("mass must be >= 0");

  WavePacketState state(grid);
  for (std::size_t j = 0; j < grid.points(); ++j) {
    const double x = grid.x(j);
    const double envelope = std::exp(-(x - center) * (x - center) / (4.0 * sigma * sigma));
    state.upper[j] = std::polar(envelope, wavenumber * x);
  }

  // In k-space, put each mode onto the positive-energy spinor (1, ratio)/|.|.
  SpectralTransform transform(grid.points());
  transform.map_modes(state, [&](std::size_t j) {
    const double ratio = positive_energy_ratio(grid.wavenumber(j), mass);
    const double norm = std::sqrt(1.0 + ratio * ratio);
    // Upper input only: (up, dn) -> (up / norm, up ratio / norm).
    return Kernel{1.0 / norm, 0.0, ratio / norm, 0.0};
  });

  double total = 0.0;
  for (std::size_t j = 0; j < grid.points(); ++j) {
    total += std::norm(state.upper[j]) + std::norm(state.lower[j]);
  }
  const double scale = 1.0 / std::sqrt(total * grid.dx());
  for (std::size_t j = 0; j < grid.points(); ++j) {
    state.upper[j] *= scale;
    state.lower[j] *= scale;
  }
  return state;
}

WavePacketState free_half_step(const WavePacketState& state, double mass, double dt) {
  check_dt(dt);
  check_same_grid(state);
  SplitStepPropagator propagator(state.grid, PotentialProfile::zero(), mass, dt);
  WavePacketState out = state;
  propagator.apply_free(out, dt);
  return out;
}

WavePacketState potential_half_step(const WavePacketState& state,
                                    const PotentialProfile& profile, double dt) {
  check_dt(dt);
  check_same_grid(state);
  WavePacketState out = state;
  for (std::size_t j = 0; j < state.grid.points(); ++j) {
    apply(potential_kernel(profile.value_at(state.grid.x(j)), profile.coupling, dt), out.upper[j],
          out.lower[j]);
  }
  return out;
}

double split_point(const PotentialProfile& profile, const Grid& grid) {
  if (profile.kind == PotentialProfile::Kind::Step && std::isfinite(profile.step_position)) {
    return profile.step_position;
  }
  return grid.left_edge() + 0.5 * grid.length();
}

ObservableRecord measure(const WavePacketState& state, double x_split) {
  check_same_grid(state);
  const Grid& grid = state.grid;
  if (!(x_split >= grid.left_edge() && x_split <= grid.right_edge())) {
    throw PreconditionError("split point lies outside the domain");
  }
  const double dx = grid.dx();

  ObservableRecord rec;
  rec.time = state.time;
  double first_moment = 0.0;
  std::size_t nearest = 0;
  double nearest_distance = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < grid.points(); ++j) {
    const double x = grid.x(j);
    const double density = (std::norm(state.upper[j]) + std::norm(state.lower[j])) * dx;
    rec.norm += density;
    (x < x_split ? rec.p_left : rec.p_right) += density;
    first_moment += x * density;
    if (std::abs(x - x_split) < nearest_distance) {
      nearest_distance = std::abs(x - x_split);
      nearest = j;
    }
  }
  rec.mean_x = first_moment / rec.norm;
  rec.current = 2.0 * (std::conj(state.upper[nearest]) * state.lower[nearest]).real();
  return rec;
}

EvolveResult evolve(const WavePacketState& initial, const PotentialProfile& profile, double mass,
                    double dt, long n_steps, long record_every, const EvolveOptions& options) {
  check_dt(dt);
  check_same_grid(initial);
  if (n_steps < 1) throw PreconditionError("n_steps must be >= 1");
  if (record_every < 1) throw PreconditionError("record_every must be >= 1");
  if (!std::isfinite(mass) || mass < 0.0) throw PreconditionError("mass must be >= 0");
  const double limit = options.max_dt_over_dx * initial.grid.dx();
  if (dt > limit) {
    throw PreconditionError("dt=" + std::to_string(dt) + " exceeds the accuracy limit " +
                            std::to_string(options.max_dt_over_dx) + " dx = " +
                            std::to_string(limit));
  }

  EvolveResult result{initial, {}};
  const double x_split = split_point(profile, initial.grid);
  SplitStepPropagator propagator(initial.grid, profile, mass, dt);

  auto record = [&](long step) {
    ObservableRecord rec = measure(result.state, x_split);
    rec.step = step;
    if (!std::isfinite(rec.norm) || !std::isfinite(rec.mean_x)) {
      throw NumericalBreakdown("non-finite wave function at step " + std::to_string(step), step);
    }
    if (options.on_record) options.on_record(result.state, rec);
    result.records.push_back(rec);
  };

  record(0);
  for (long step = 1; step <= n_steps; ++step) {
    propagator.step(result.state);
    if (step % record_every == 0 || step == n_steps) {
      record(step);
    } else if (!std::isfinite(std::norm(result.state.upper[0]) +
                              std::norm(result.state.lower[0]))) {
      // One FFT mixes every point, so any NaN reaches index 0 within a step.
      throw NumericalBreakdown("non-finite wave function at step " + std::to_string(step), step);
    }
  }
  return result;
}

}  // namespace diracstep::dynamics
