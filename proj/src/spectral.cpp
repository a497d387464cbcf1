#include "dmnls/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "dmnls/parallel.hpp"

namespace dmnls {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// FFTW planning is not thread-safe; execution with fftw_execute_dft is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int n, int sign, bool in_place) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(n, sign, in_place);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const auto count = static_cast<std::size_t>(n) * n;
    fftw_complex* a = fftw_alloc_complex(count);
    fftw_complex* b = in_place ? a : fftw_alloc_complex(count);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED | (in_place ? 0u : FFTW_PRESERVE_INPUT);
    fftw_plan plan = fftw_plan_dft_2d(n, n, a, b, sign, flags);
    if (!in_place) fftw_free(b);
    fftw_free(a);
    if (plan == nullptr) throw std::runtime_error("FFTW planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::tuple<int, int, bool>, fftw_plan> plans_;
};

void run_dft(const SpectralGrid& grid, std::span<const Complex> in, std::span<Complex> out,
             int sign) {
  if (in.size() != grid.size() || out.size() != grid.size()) {
    throw std::invalid_argument("DFT buffer size does not match grid");
  }
  const bool in_place = in.data() == out.data();
  fftw_plan plan = PlanCache::instance().get(grid.n(), sign, in_place);
  // FFTW takes non-const input; the plan preserves it for out-of-place runs.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, src, dst);
}

void require_same_grid(const ComplexField& a, const ComplexField& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("fields live on different grids");
}

void require_finite(const ComplexField& f, const char* op) {
  if (!f.is_finite()) throw std::domain_error(std::string(op) + ": non-finite input field");
}

}  // namespace

SpectralGrid::SpectralGrid(int n, double length) : n_(n), length_(length) {
  if (n < 8 || !is_power_of_two(n)) {
    throw std::invalid_argument("grid size n must be a power of two >= 8, got " +
                                std::to_string(n));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("grid length must be positive and finite");
  }
  dx_ = length / n;
  k_.resize(n);
  const double dk = 2.0 * std::numbers::pi / length;
  for (int i = 0; i < n; ++i) k_[i] = dk * (i < n / 2 ? i : i - n);
}

SpectralGrid make_grid(int n, double length) { return SpectralGrid(n, length); }

ComplexField::ComplexField(SpectralGrid grid)
    : grid_(std::move(grid)), values_(grid_.size(), Complex{}) {}

ComplexField::ComplexField(SpectralGrid grid, std::vector<Complex> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("field values do not match grid shape");
  }
  if (!is_finite()) throw std::invalid_argument("field values must be finite");
}

bool ComplexField::is_finite() const noexcept {
  for (const Complex& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

ComplexField& ComplexField::operator*=(Complex c) {
  for (Complex& v : values_) v *= c;
  return *this;
}

ComplexField& ComplexField::operator+=(const ComplexField& other) {
  return add_scaled(1.0, other);
}

ComplexField& ComplexField::operator-=(const ComplexField& other) {
  return add_scaled(-1.0, other);
}

ComplexField& ComplexField::add_scaled(Complex c, const ComplexField& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += c * other.values_[i];
  return *this;
}

ComplexField operator*(Complex c, ComplexField f) { return f *= c; }
ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }

double inner_real(const ComplexField& f, const ComplexField& g) {
  require_same_grid(f, g);
  const auto a = f.values();
  const auto b = g.values();
  std::vector<double> terms(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    terms[i] = a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  }
  return f.grid().cell_area() * pairwise_sum(terms);
}

double l2_norm(const ComplexField& f) { return std::sqrt(inner_real(f, f)); }

FieldNorms field_norms(const ComplexField& f) {
  require_finite(f, "field_norms");
  const SpectralGrid& grid = f.grid();
  const int n = grid.n();
  std::vector<Complex> spectrum(grid.size());
  forward_dft(grid, f.values(), spectrum);
  std::vector<double> mass_terms(grid.size());
  std::vector<double> kin_terms(grid.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * n + j;
      mass_terms[idx] = std::norm(f.values()[idx]);
      kin_terms[idx] = grid.k_squared(i, j) * std::norm(spectrum[idx]);
    }
  }
  const double nn = static_cast<double>(grid.size());
  return {grid.cell_area() * pairwise_sum(mass_terms),
          grid.cell_area() / nn * pairwise_sum(kin_terms)};
}

double spectral_mass(const ComplexField& f) {
  const SpectralGrid& grid = f.grid();
  std::vector<Complex> spectrum(grid.size());
  forward_dft(grid, f.values(), spectrum);
  std::vector<double> terms(spectrum.size());
  for (std::size_t i = 0; i < spectrum.size(); ++i) terms[i] = std::norm(spectrum[i]);
  return grid.cell_area() / static_cast<double>(grid.size()) * pairwise_sum(terms);
}

std::vector<Complex> free_phase_axis(const SpectralGrid& grid, double r) {
  const auto k = grid.wavenumbers();
  std::vector<Complex> axis(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) axis[i] = std::polar(1.0, -r * k[i] * k[i]);
  return axis;
}

void apply_free_phase(const SpectralGrid& grid, std::span<const Complex> axis,
                      std::span<Complex> spectrum) {
  const int n = grid.n();
  for (int i = 0; i < n; ++i) {
    Complex* row = spectrum.data() + static_cast<std::size_t>(i) * n;
    const Complex ai = axis[i];
    for (int j = 0; j < n; ++j) row[j] *= ai * axis[j];
  }
}

void forward_dft(const SpectralGrid& grid, std::span<const Complex> in, std::span<Complex> out) {
  run_dft(grid, in, out, FFTW_FORWARD);
}

void backward_dft(const SpectralGrid& grid, std::span<const Complex> in, std::span<Complex> out) {
  run_dft(grid, in, out, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (Complex& v : out) v *= scale;
}

ComplexField propagate(const ComplexField& f, double r) {
  require_finite(f, "propagate");
  if (r == 0.0) return f;
  const SpectralGrid& grid = f.grid();
  std::vector<Complex> spectrum(grid.size());
  forward_dft(grid, f.values(), spectrum);
  apply_free_phase(grid, free_phase_axis(grid, r), spectrum);
  ComplexField out(grid);
  backward_dft(grid, spectrum, out.values());
  return out;
}

ComplexField laplacian(const ComplexField& f) {
  require_finite(f, "laplacian");
  const SpectralGrid& grid = f.grid();
  const int n = grid.n();
  std::vector<Complex> spectrum(grid.size());
  forward_dft(grid, f.values(), spectrum);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) spectrum[static_cast<std::size_t>(i) * n + j] *= -grid.k_squared(i, j);
  }
  ComplexField out(grid);
  backward_dft(grid, spectrum, out.values());
  return out;
}

ComplexField sample_function(const SpectralGrid& grid,
                             const std::function<Complex(double, double)>& rule) {
  ComplexField out(grid);
  const int n = grid.n();
  for (int i = 0; i < n; ++i) {
    const double x = grid.coordinate(i);
    for (int j = 0; j < n; ++j) {
      const Complex v = rule(x, grid.coordinate(j));
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        std::ostringstream msg;
        msg << "sample_function: non-finite value at grid index (" << i << ", " << j << ")";
        throw std::domain_error(msg.str());
      }
      out(i, j) = v;
    }
  }
  return out;
}

double tail_mass_fraction(const ComplexField& f, double radius) {
  const SpectralGrid& grid = f.grid();
  const int n = grid.n();
  std::vector<double> all(grid.size());
  std::vector<double> tail(grid.size(), 0.0);
  const double r2 = radius * radius;
  for (int i = 0; i < n; ++i) {
    const double x = grid.coordinate(i);
    for (int j = 0; j < n; ++j) {
      const double y = grid.coordinate(j);
      const std::size_t idx = static_cast<std::size_t>(i) * n + j;
      all[idx] = std::norm(f.values()[idx]);
      if (x * x + y * y > r2) tail[idx] = all[idx];
    }
  }
  const double total = pairwise_sum(all);
  return total > 0.0 ? pairwise_sum(tail) / total : 0.0;
}

ComplexField translate(const ComplexField& f, double shift_x, double shift_y) {
  const SpectralGrid& grid = f.grid();
  const int n = grid.n();
  const auto k = grid.wavenumbers();
  std::vector<Complex> spectrum(grid.size());
  forward_dft(grid, f.values(), spectrum);
  for (int i = 0; i < n; ++i) {
    // The Nyquist mode is not symmetric; drop its shift phase to keep real fields real.
    const Complex px = (i == n / 2) ? Complex{std::cos(k[i] * shift_x)} : std::polar(1.0, -k[i] * shift_x);
    for (int j = 0; j < n; ++j) {
      const Complex py = (j == n / 2) ? Complex{std::cos(k[j] * shift_y)} : std::polar(1.0, -k[j] * shift_y);
      spectrum[static_cast<std::size_t>(i) * n + j] *= px * py;
    }
  }
  ComplexField out(grid);
  backward_dft(grid, spectrum, out.values());
  return out;
}

ComplexField regrid(const ComplexField& f, double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("regrid factor must be positive");
  const SpectralGrid& g = f.grid();
  std::vector<Complex> values(f.values().begin(), f.values().end());
  return ComplexField(SpectralGrid(g.n(), g.length() * factor), std::move(values));
}

}  // namespace dmnls
