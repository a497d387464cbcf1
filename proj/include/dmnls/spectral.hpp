#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dmnls {

using Complex = std::complex<double>;

/// Periodic square [-L/2, L/2)^2 sampled with n points per axis.
///
/// Wavenumbers follow the DFT layout 2*pi/L * {0, 1, ..., n/2-1, -n/2, ..., -1}
/// so Fourier multipliers are diagonal in the FFT output ordering.
class SpectralGrid {
 public:
  /// Throws std::invalid_argument unless n is a power of two >= 8 and length > 0.
  SpectralGrid(int n, double length);

  int n() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double dx() const noexcept { return dx_; }
  double cell_area() const noexcept { return dx_ * dx_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_; }
  std::span<const double> wavenumbers() const noexcept { return k_; }

  /// Physical coordinate of index i along either axis.
  double coordinate(int i) const noexcept { return -0.5 * length_ + i * dx_; }
  double k_squared(int i, int j) const noexcept { return k_[i] * k_[i] + k_[j] * k_[j]; }

  bool operator==(const SpectralGrid& other) const noexcept {
    return n_ == other.n_ && length_ == other.length_;
  }

 private:
  int n_;
  double length_;
  double dx_;
  std::vector<double> k_;
};

SpectralGrid make_grid(int n, double length);

/// n x n complex samples on a SpectralGrid, row-major with the first index
/// along x. Entries are required to be finite.
class ComplexField {
 public:
  explicit ComplexField(SpectralGrid grid);
  /// Throws std::invalid_argument on a size mismatch or a non-finite entry.
  ComplexField(SpectralGrid grid, std::vector<Complex> values);

  const SpectralGrid& grid() const noexcept { return grid_; }
  std::span<const Complex> values() const noexcept { return values_; }
  std::span<Complex> values() noexcept { return values_; }

  Complex operator()(int i, int j) const noexcept { return values_[index(i, j)]; }
  Complex& operator()(int i, int j) noexcept { return values_[index(i, j)]; }

  bool is_finite() const noexcept;

  ComplexField& operator*=(Complex c);
  ComplexField& operator+=(const ComplexField& other);
  ComplexField& operator-=(const ComplexField& other);
  /// this += c * other
  ComplexField& add_scaled(Complex c, const ComplexField& other);

 private:
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * grid_.n() + j;
  }

  SpectralGrid grid_;
  std::vector<Complex> values_;
};

ComplexField operator*(Complex c, ComplexField f);
ComplexField operator+(ComplexField a, const ComplexField& b);
ComplexField operator-(ComplexField a, const ComplexField& b);

/// Re \int f conj(g) dx.
double inner_real(const ComplexField& f, const ComplexField& g);
/// ||f||_{L^2}.
double l2_norm(const ComplexField& f);

struct FieldNorms {
  double mass = 0.0;     // ||f||_2^2
  double kinetic = 0.0;  // ||grad f||_2^2
};

FieldNorms field_norms(const ComplexField& f);

/// Free Schroedinger evolution e^{i r Delta} f, i.e. the multiplier e^{-i r |k|^2}.
ComplexField propagate(const ComplexField& f, double r);
ComplexField laplacian(const ComplexField& f);

/// Samples rule(x, y) at every grid point; throws std::domain_error naming the
/// first index where the rule is not finite.
ComplexField sample_function(const SpectralGrid& grid,
                             const std::function<Complex(double, double)>& rule);

/// Fraction of the mass located at |x| > radius.
double tail_mass_fraction(const ComplexField& f, double radius);

/// Mass computed from the DFT coefficients (Parseval route).
double spectral_mass(const ComplexField& f);

/// f(x - shift), exact for band-limited fields.
ComplexField translate(const ComplexField& f, double shift_x, double shift_y);

/// Same samples on a grid whose side is scaled by `factor`. The result represents
/// x -> f(x / factor).
ComplexField regrid(const ComplexField& f, double factor);

// Fourier-space layer shared by the functional evaluators. Forward is
// unnormalized, backward carries the 1/n^2 factor.
void forward_dft(const SpectralGrid& grid, std::span<const Complex> in, std::span<Complex> out);
void backward_dft(const SpectralGrid& grid, std::span<const Complex> in, std::span<Complex> out);

/// Per-axis factors of the multiplier e^{-i r |k|^2}: the full multiplier at
/// mode (i, j) is axis[i] * axis[j].
std::vector<Complex> free_phase_axis(const SpectralGrid& grid, double r);
void apply_free_phase(const SpectralGrid& grid, std::span<const Complex> axis,
                      std::span<Complex> spectrum);

}  // namespace dmnls
