#include "qtalbot/oracle.hpp"

#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "qtalbot/error.hpp"

namespace qtalbot {

namespace {

double fft_wavenumber(std::size_t m, std::size_t n, double h) {
  const auto mm = static_cast<double>(m);
  const auto nn = static_cast<double>(n);
  return 2.0 * std::numbers::pi * (m < (n + 1) / 2 ? mm : mm - nn) / (nn * h);
}

}  // namespace

FreeGaussian analytic_free_gaussian(const PacketSpec& spec, double T) {
  auto width = [T](double s0) {
    const double r = 2.0 * T / (s0 * s0);
    return s0 * std::sqrt(1.0 + r * r);
  };
  return {width(spec.sigma_x), width(spec.sigma_y), spec.x0 + 2.0 * spec.k * T, spec.y0};
}

PacketMoments packet_moments(const ComplexField& psi, const GridSpec& g) {
  double m0 = 0.0, mx = 0.0, my = 0.0, mxx = 0.0, myy = 0.0;
  for (std::size_t j = 0; j < g.ny; ++j) {
    const double y = g.y(j);
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double p = std::norm(psi[j * g.nx + i]);
      const double x = g.x(i);
      m0 += p;
      mx += p * x;
      my += p * y;
      mxx += p * x * x;
      myy += p * y * y;
    }
  }
  PacketMoments r;
  r.norm = m0 * g.dx * g.dy;
  if (!(m0 > 0.0)) return r;
  r.x = mx / m0;
  r.y = my / m0;
  r.sigma_x = std::sqrt(2.0 * std::max(mxx / m0 - r.x * r.x, 0.0));
  r.sigma_y = std::sqrt(2.0 * std::max(myy / m0 - r.y * r.y, 0.0));
  return r;
}

PacketMoments packet_moments(const WaveField& field) {
  return packet_moments(synchronized_psi(field), field.grid);
}

ComplexField gaussian_packet(const PacketSpec& spec, const GridSpec& g) {
  spec.validate();
  ComplexField psi(g.size());
  double total = 0.0;
  for (std::size_t j = 0; j < g.ny; ++j) {
    const double v = (g.y(j) - spec.y0) / spec.sigma_y;
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double xi = g.x(i) - spec.x0;
      const double u = xi / spec.sigma_x;
      const double env = std::exp(-0.5 * (u * u + v * v));
      psi[j * g.nx + i] = env * std::complex<double>(std::cos(spec.k * xi), std::sin(spec.k * xi));
      total += env * env;
    }
  }
  const double s = 1.0 / std::sqrt(total * g.dx * g.dy);
  for (auto& z : psi) z *= s;
  return psi;
}

double l2_distance(const ComplexField& a, const ComplexField& b, const GridSpec& grid) {
  if (a.size() != b.size() || a.size() != grid.size()) throw UsageError("fields differ in size");
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += std::norm(a[k] - b[k]);
  return std::sqrt(acc * grid.dx * grid.dy);
}

SpectralPropagator::SpectralPropagator(const OracleConfig& cfg, const PotentialStack& stack)
    : cfg_(cfg), stack_(std::make_unique<PotentialStack>(stack)) {
  stack_->validate();
  init();
  const GridSpec& g = cfg_.grid;
  // Periodic wrap must not introduce a jump in the potential.
  auto same = [](double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a) + std::abs(b)); };
  for (std::size_t j = 0; j < g.ny; ++j) {
    if (!same(total_potential(g.x(0), g.y(j), 0.0, *stack_), total_potential(g.x_last(), g.y(j), 0.0, *stack_))) {
      throw ConfigError("potential differs across the periodic seam in X");
    }
  }
  for (std::size_t i = 0; i < g.nx; ++i) {
    if (!same(total_potential(g.x(i), g.y(0), 0.0, *stack_), total_potential(g.x(i), g.y_last(), 0.0, *stack_))) {
      throw ConfigError("potential differs across the periodic seam in Y");
    }
  }
  fill_potential(0.0);
}

SpectralPropagator::SpectralPropagator(const OracleConfig& cfg, std::vector<double> potential)
    : cfg_(cfg), v_(std::move(potential)) {
  init();
  if (v_.size() != cfg_.grid.size()) throw UsageError("potential size does not match the grid");
  update_phases();
}

SpectralPropagator::~SpectralPropagator() = default;

void SpectralPropagator::init() {
  const GridSpec& g = cfg_.grid;
  g.validate();
  if (g.nx > kOracleMaxSide || g.ny > kOracleMaxSide) {
    throw ConfigError("oracle lattices are limited to 256 x 256");
  }
  if (!(cfg_.dT > 0.0)) throw ConfigError("oracle time step must be positive");
  kinetic_.resize(g.size());
  outer_.resize(g.size());
  const double kx_cut = (2.0 / 3.0) * std::numbers::pi / g.dx;
  const double ky_cut = (2.0 / 3.0) * std::numbers::pi / g.dy;
  for (std::size_t j = 0; j < g.ny; ++j) {
    const double ky = fft_wavenumber(j, g.ny, g.dy);
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double kx = fft_wavenumber(i, g.nx, g.dx);
      kinetic_[j * g.nx + i] = kx * kx + ky * ky;
      outer_[j * g.nx + i] = std::abs(kx) > kx_cut || std::abs(ky) > ky_cut;
    }
  }
  fft_ = std::make_unique<detail::Fft2d>(g.nx, g.ny);
  const double inv = 1.0 / static_cast<double>(g.size());
  kphase_.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) kphase_[k] = std::polar(inv, -cfg_.dT * kinetic_[k]);
}

void SpectralPropagator::update_phases() {
  vphase_.resize(v_.size());
  for (std::size_t k = 0; k < v_.size(); ++k) vphase_[k] = std::polar(1.0, -0.5 * cfg_.dT * v_[k]);
}

void SpectralPropagator::fill_potential(double T) {
  const GridSpec& g = cfg_.grid;
  v_.resize(g.size());
  for (std::size_t j = 0; j < g.ny; ++j) {
    for (std::size_t i = 0; i < g.nx; ++i) v_[j * g.nx + i] = total_potential(g.x(i), g.y(j), T, *stack_);
  }
  update_phases();
}

void SpectralPropagator::step(ComplexField& psi, double T) {
  const GridSpec& g = cfg_.grid;
  if (psi.size() != g.size()) throw UsageError("wave function size does not match the oracle grid");
  const double dT = cfg_.dT;
  if (stack_ && !stack_->fields.empty()) fill_potential(T + 0.5 * dT);

  auto* buf = fft_->data();
  for (std::size_t k = 0; k < psi.size(); ++k) buf[k] = psi[k] * vphase_[k];
  fft_->forward();

  if (cfg_.alias_check_interval > 0 && steps_taken_ % cfg_.alias_check_interval == 0) {
    double outer = 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k < fft_->size(); ++k) {
      const double p = std::norm(buf[k]);
      total += p;
      if (outer_[k]) outer += p;
    }
    if (total > 0.0 && outer > cfg_.alias_tolerance * total) {
      throw ResolutionError("oracle spectrum reaches the outer k band (fraction " +
                            std::to_string(outer / total) + ")");
    }
  }

  for (std::size_t k = 0; k < fft_->size(); ++k) buf[k] *= kphase_[k];
  fft_->backward();
  for (std::size_t k = 0; k < psi.size(); ++k) psi[k] = buf[k] * vphase_[k];
  ++steps_taken_;
}

void SpectralPropagator::advance(ComplexField& psi, double T0, long long steps) {
  for (long long s = 0; s < steps; ++s) step(psi, T0 + static_cast<double>(s) * cfg_.dT);
}

double SpectralPropagator::outer_band_fraction(const ComplexField& psi) {
  auto* buf = fft_->data();
  std::copy(psi.begin(), psi.end(), buf);
  fft_->forward();
  double outer = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < fft_->size(); ++k) {
    const double p = std::norm(buf[k]);
    total += p;
    if (outer_[k]) outer += p;
  }
  return total > 0.0 ? outer / total : 0.0;
}

void spectral_step(ComplexField& psi, double T, const PotentialStack& stack, const OracleConfig& cfg) {
  SpectralPropagator(cfg, stack).step(psi, T);
}

}  // namespace qtalbot
