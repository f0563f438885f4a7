#pragma once

#include <limits>
#include <string>

#include "bdiv/field.hpp"

namespace bdiv::norms {

enum class TvVariant { isotropic, anisotropic };

/// Which norm to evaluate; see evaluate().
struct NormKind {
  enum class Tag { lp, lorentz, weak_lp_set, morrey, tv, linf };
  Tag tag = Tag::linf;
  double p = 2.0;
  double q = 2.0;
  TvVariant variant = TvVariant::isotropic;

  static NormKind Lp(double p) { return {Tag::lp, p, p, TvVariant::isotropic}; }
  static NormKind Lorentz(double p, double q) { return {Tag::lorentz, p, q, TvVariant::isotropic}; }
  static NormKind WeakLpSet(double p) { return {Tag::weak_lp_set, p, p, TvVariant::isotropic}; }
  static NormKind Morrey() { return {Tag::morrey, 1.0, 1.0, TvVariant::isotropic}; }
  static NormKind TV(TvVariant v) { return {Tag::tv, 1.0, 1.0, v}; }
  static NormKind Linf() { return {}; }

  std::string label() const;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// (sum |f|^p * cellvol)^(1/p); p = kInf gives max |f|. Rejects p < 1.
double lp_norm(const ScalarField& f, double p);

/// Rearrangement form of the Lorentz L^{p,q} quasi-norm,
/// (int_0^inf (t^{1/p} f*(t))^q dt/t)^{1/q}, integrated exactly for the
/// piecewise-constant decreasing rearrangement of a cell field.
/// Rejects p or q outside [1, inf).
double lorentz_norm(const ScalarField& f, double p, double q);

/// sup_E |E|^{-(p-1)/p} int_E |f|, the set-based weak-L^p norm. The
/// supremum is attained on super-level sets, so only the k largest cells
/// are scanned for every k. Requires p > 1.
double weak_lp_setnorm(const ScalarField& f, double p);

/// Same, but also returns the cell count k of the maximizing set.
struct WeakLpResult {
  double value = 0.0;
  std::size_t cells = 0;
};
WeakLpResult weak_lp_setnorm_detail(const ScalarField& f, double p);

/// sup over balls centred at cell centres with radii j * min(h), j >= 1,
/// of R^{1-d} int_{B cap box} |f|. This is a lower bound of the continuum
/// Morrey norm. Cost is O(N * prod(2 n_i)).
double morrey_norm(const ScalarField& f);

/// Discrete total variation with forward differences (same boundary
/// convention as forward_gradient). Anisotropic sums |D_i g| over axes,
/// isotropic takes the Euclidean magnitude per cell.
double tv_norm(const ScalarField& g, TvVariant variant);

/// Derivative of v -> ||v||_2^p for Y = L2: p ||v||^{p-2} v. Rejects v = 0.
ScalarField frechet_derivative(const ScalarField& v, double p);

double evaluate(const ScalarField& f, const NormKind& kind);

}  // namespace bdiv::norms
