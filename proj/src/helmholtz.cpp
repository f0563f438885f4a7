#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include "bdiv/error.hpp"
#include "bdiv/operators.hpp"
#include "bdiv/reduce.hpp"
#include "bdiv/variational.hpp"

namespace bdiv::variational {
namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

/// Real-to-complex transform pair over a periodic grid. Spectrum layout is
/// FFTW's: the last axis keeps n/2 + 1 modes.
class Spectrum {
public:
  explicit Spectrum(const Grid& g) : grid_(g) {
    d_ = g.dim();
    for (int a = 0; a < d_; ++a) dims_[a] = static_cast<int>(g.n(a));
    complex_size_ = g.size() / g.n(d_ - 1) * (g.n(d_ - 1) / 2 + 1);
    real_ = fftw_alloc_real(g.size());
    spec_ = fftw_alloc_complex(complex_size_);
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_r2c(d_, dims_, real_, spec_, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r(d_, dims_, spec_, real_, FFTW_ESTIMATE);
  }
  ~Spectrum() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(real_);
    fftw_free(spec_);
  }
  Spectrum(const Spectrum&) = delete;
  Spectrum& operator=(const Spectrum&) = delete;

  void forward(const ScalarField& f) {
    std::copy(f.values().begin(), f.values().end(), real_);
    fftw_execute(forward_);
  }
  /// Inverse transform including the 1/N normalization.
  ScalarField backward() {
    fftw_execute(backward_);
    ScalarField out(grid_);
    const double inv = 1.0 / static_cast<double>(grid_.size());
    for (std::size_t k = 0; k < grid_.size(); ++k) out[k] = real_[k] * inv;
    return out;
  }

  std::size_t complex_size() const { return complex_size_; }
  std::complex<double>& at(std::size_t k) { return reinterpret_cast<std::complex<double>&>(spec_[k]); }

  /// Signed integer frequency per axis of spectrum entry k.
  std::array<long, kMaxDim> frequency(std::size_t k) const {
    std::array<long, kMaxDim> out{0, 0, 0};
    const std::size_t last = grid_.n(d_ - 1) / 2 + 1;
    out[d_ - 1] = static_cast<long>(k % last);
    k /= last;
    for (int a = d_ - 2; a >= 0; --a) {
      const auto n = static_cast<long>(grid_.n(a));
      const auto i = static_cast<long>(k % grid_.n(a));
      k /= grid_.n(a);
      out[a] = (i <= n / 2) ? i : i - n;
    }
    return out;
  }

private:
  Grid grid_;
  int d_ = 0;
  int dims_[kMaxDim]{};
  std::size_t complex_size_ = 0;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace

VectorField helmholtz_solve(const ScalarField& f, const HelmholtzOptions& opts) {
  const Grid& g = f.grid();
  require(g.all_periodic(), "helmholtz_solve needs a periodic grid");
  double fmax = 0.0;
  for (double x : f.values()) fmax = std::max(fmax, std::abs(x));
  if (fmax == 0.0) return VectorField(g);
  if (opts.strict_mean) {
    const double mean = pairwise_sum(f.values()) / static_cast<double>(g.size());
    require(std::abs(mean) <= 1e-12 * fmax, "helmholtz_solve: data is not mean-zero");
  }

  const int d = g.dim();
  Spectrum s(g);
  s.forward(f);

  if (opts.symbol == Symbol::discrete) {
    for (std::size_t k = 0; k < s.complex_size(); ++k) {
      const auto freq = s.frequency(k);
      double sym = 0.0;
      for (int a = 0; a < d; ++a) {
        const double half = std::numbers::pi * static_cast<double>(freq[a]) / static_cast<double>(g.n(a));
        const double sn = std::sin(half);
        sym -= 4.0 * sn * sn / (g.h(a) * g.h(a));
      }
      s.at(k) = (sym == 0.0) ? 0.0 : s.at(k) / sym;
    }
    return forward_gradient(s.backward());
  }

  // continuum symbol: u_i = i xi_i phi, phi = -f / |xi|^2
  std::vector<std::complex<double>> phi(s.complex_size());
  std::vector<std::array<long, kMaxDim>> freqs(s.complex_size());
  for (std::size_t k = 0; k < s.complex_size(); ++k) {
    freqs[k] = s.frequency(k);
    double xi2 = 0.0;
    for (int a = 0; a < d; ++a) {
      const double xi = 2.0 * std::numbers::pi * static_cast<double>(freqs[k][a]) / (g.hi(a) - g.lo(a));
      xi2 += xi * xi;
    }
    phi[k] = (xi2 == 0.0) ? 0.0 : -s.at(k) / xi2;
  }
  std::vector<ScalarField> comps;
  for (int a = 0; a < d; ++a) {
    const auto n = static_cast<long>(g.n(a));
    for (std::size_t k = 0; k < s.complex_size(); ++k) {
      const long fa = freqs[k][a];
      const bool nyquist = (n % 2 == 0) && (fa == n / 2 || fa == -n / 2);
      const double xi = 2.0 * std::numbers::pi * static_cast<double>(fa) / (g.hi(a) - g.lo(a));
      s.at(k) = nyquist ? 0.0 : std::complex<double>(0.0, xi) * phi[k];
    }
    comps.push_back(s.backward());
  }
  return VectorField(std::move(comps));
}

}  // namespace bdiv::variational
