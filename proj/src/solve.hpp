#pragma once

// Method dispatch behind the C API: runs one construction or solver and
// packages fields, certificates and a JSON report with a verification block.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdiv/explicit.hpp"
#include "bdiv/field.hpp"
#include "bdiv/variational.hpp"

namespace bdiv::service {

using Json = nlohmann::ordered_json;

struct SolveRequest {
  std::string method;  ///< onestep2d | disjoint2d | inductive | weakl2 | helmholtz | flambda | twostep | hier-p2 | hier-p1
  double tau = 2.0;
  int max_iter = split::kStripDefaultMaxIter;
  std::optional<double> lambda;
  int p = 2;
  double eta = 0.0;
  double gamma = 0.0;
  int levels = 20;
  double stop_residual = 1e-3;
  bool continuum = false;
  bool strict_mean = false;
  variational::VariationalConfig inner;
};

struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

struct Solution {
  std::string method;
  VectorField u;
  ScalarField residual;  ///< f - div u
  std::vector<ScalarField> parts;
  std::vector<split::LineCertificate> certificates;
  std::vector<Check> checks;
  Json report;
  std::string trace_csv;  ///< per-level or per-pass table, empty when not applicable
  bool converged = true;

  bool verified() const;
};

/// Throws InvalidArgument for unknown methods or bad parameters.
Solution solve(const ScalarField& f, const SolveRequest& req);

std::string certificates_csv(const std::vector<split::LineCertificate>& certs);

Json to_json(const variational::SolverReport& r);
Json to_json(const variational::HierarchyTrace& t);
Json to_json(const std::vector<Check>& checks);
Json grid_json(const Grid& g);

}  // namespace bdiv::service
