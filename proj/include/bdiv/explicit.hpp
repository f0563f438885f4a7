#pragma once

#include <vector>

#include "bdiv/field.hpp"

namespace bdiv::split {

/// One line integral int |f_axis| along `axis`, for the line whose other
/// coordinates flatten to `line` (row-major over the remaining axes).
struct LineCertificate {
  int axis = 0;
  std::size_t line = 0;
  double value = 0.0;
  double bound = 0.0;
};

/// f = parts[0] + ... + parts[d-1], u_i the running primitive of parts[i]
/// along axis i, so div u = f. masks is empty for weighted splits.
struct SplitResult {
  std::vector<ScalarField> parts;
  std::vector<RegionMask> masks;
  VectorField u;
  std::vector<LineCertificate> certificates;
  bool complete = true;

  /// Largest value / bound over all certificates (0 when there are none).
  double worst_certificate_ratio() const;
};

/// Per-pass record of the strip decomposition.
struct StripPass {
  double residual_measure = 0.0;  ///< |Omega^k| before the pass
  std::size_t rows_kept = 0;      ///< |A'| in cells
  std::size_t cols_kept = 0;      ///< |B'| in cells
  double tau = 0.0;
};

struct StripDecompositionTrace {
  std::vector<StripPass> passes;
  double final_measure = 0.0;  ///< |Omega^K| after the last pass
};

/// E_H / E_V: sum of |f| * h along the line in direction `axis` whose
/// other coordinate has index `index`. 2-D grids only.
double line_energy(const ScalarField& f, int axis, std::size_t index);

/// Weighted 2-D split with alpha = V/(H+V), beta = H/(H+V), where V(x)^2
/// and H(y)^2 are the column and row sums of f^2. Guarantees
/// max|u_i| <= ||f||_{L2}.
SplitResult split_onestep_2d(const ScalarField& f);

/// Disjoint variant: f_1 = f on {H(y) <= V(x)}, f_2 = f on {V(x) < H(y)}.
SplitResult split_disjoint_2d(const ScalarField& f);

/// Disjoint d-axis split (d <= 3) built by thresholding along the first
/// axis and recursing on the remainder slice by slice. Every axis-j line
/// integral of |f_j| is at most ||f||_{L^d}.
SplitResult split_inductive_nd(const ScalarField& f);

inline constexpr int kStripDefaultMaxIter = 64;

/// Row/column strip decomposition for weak-L2 data on a 2-D box. Line
/// integrals of |f_1| along rows and |f_2| along columns are bounded by
/// tau times the set-based weak-L2 norm of f. Rejects tau <= 1. When
/// max_iter passes leave cells unassigned, result.complete is false and
/// those cells belong to no part.
std::pair<SplitResult, StripDecompositionTrace> decompose_weak_l2(const ScalarField& f, double tau,
                                                                  int max_iter = kStripDefaultMaxIter);

}  // namespace bdiv::split
