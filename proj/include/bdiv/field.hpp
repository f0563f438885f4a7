#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bdiv/grid.hpp"

namespace bdiv {

/// Real values at the cell centers of a Grid.
class ScalarField {
public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double fill = 0.0);
  ScalarField(const Grid& grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool all_finite() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double c);

private:
  Grid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double c, ScalarField a);

/// d scalar components sharing one grid. Component i is the flux across the
/// upper face of each cell along axis i (the backward-difference divergence
/// reads v_i[x] - v_i[x - e_i]).
class VectorField {
public:
  VectorField() = default;
  explicit VectorField(const Grid& grid);
  explicit VectorField(std::vector<ScalarField> components);

  const Grid& grid() const { return grid_; }
  int dim() const { return static_cast<int>(components_.size()); }

  ScalarField& operator[](int i) { return components_[i]; }
  const ScalarField& operator[](int i) const { return components_[i]; }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator*=(double c);

  /// max over cells of the Euclidean magnitude of (v_1[x], ..., v_d[x]).
  double max_magnitude() const;
  /// max over cells and components of |v_i[x]|.
  double max_component() const;
  double max_abs(int component) const;

private:
  Grid grid_;
  std::vector<ScalarField> components_;
};

/// Boolean cell flags, same layout as ScalarField.
class RegionMask {
public:
  RegionMask() = default;
  explicit RegionMask(const Grid& grid, bool fill = false);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return flags_.size(); }

  bool operator[](std::size_t k) const { return flags_[k] != 0; }
  void set(std::size_t k, bool v) { flags_[k] = v ? 1 : 0; }

  std::size_t count() const;
  double measure() const { return static_cast<double>(count()) * grid_.cell_volume(); }

private:
  Grid grid_;
  std::vector<std::uint8_t> flags_;
};

/// f * chi_mask
ScalarField restrict_to(const ScalarField& f, const RegionMask& mask);

}  // namespace bdiv
