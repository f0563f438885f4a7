#include "bdiv/field.hpp"

#include <algorithm>
#include <cmath>

#include "bdiv/error.hpp"

namespace bdiv {

ScalarField::ScalarField(const Grid& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  require(values_.size() == grid_.size(), "value count does not match grid size");
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require(grid_ == o.grid_, "fields live on different grids");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require(grid_ == o.grid_, "fields live on different grids");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double c, ScalarField a) { return a *= c; }

VectorField::VectorField(const Grid& grid) : grid_(grid) {
  components_.assign(grid.dim(), ScalarField(grid));
}

VectorField::VectorField(std::vector<ScalarField> components) : components_(std::move(components)) {
  require(!components_.empty(), "vector field needs at least one component");
  grid_ = components_.front().grid();
  require(static_cast<int>(components_.size()) == grid_.dim(),
          "vector field needs one component per grid axis");
  for (const auto& c : components_) require(c.grid() == grid_, "vector components live on different grids");
}

VectorField& VectorField::operator+=(const VectorField& o) {
  require(grid_ == o.grid_, "vector fields live on different grids");
  for (int i = 0; i < dim(); ++i) components_[i] += o.components_[i];
  return *this;
}

VectorField& VectorField::operator*=(double c) {
  for (auto& comp : components_) comp *= c;
  return *this;
}

double VectorField::max_magnitude() const {
  double best = 0.0;
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    double s = 0.0;
    for (const auto& c : components_) s += c[k] * c[k];
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

double VectorField::max_component() const {
  double best = 0.0;
  for (int i = 0; i < dim(); ++i) best = std::max(best, max_abs(i));
  return best;
}

double VectorField::max_abs(int component) const {
  double best = 0.0;
  for (double v : components_[component].values()) best = std::max(best, std::abs(v));
  return best;
}

RegionMask::RegionMask(const Grid& grid, bool fill) : grid_(grid), flags_(grid.size(), fill ? 1 : 0) {}

std::size_t RegionMask::count() const {
  return static_cast<std::size_t>(std::count(flags_.begin(), flags_.end(), std::uint8_t{1}));
}

ScalarField restrict_to(const ScalarField& f, const RegionMask& mask) {
  require(f.grid() == mask.grid(), "mask and field live on different grids");
  ScalarField out(f.grid());
  for (std::size_t k = 0; k < f.size(); ++k)
    if (mask[k]) out[k] = f[k];
  return out;
}

}  // namespace bdiv
