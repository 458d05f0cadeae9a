#pragma once

#include "monolab/normgeom.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace monolab {

/// Sampling parameters a verdict was produced at.
struct Resolution {
  int density = 0;
  double tol = 0.0;
  std::vector<double> radii;
  std::vector<double> lambdas;
  std::string note;
};

/// Analysis outcome. FAIL always carries a witness that re-validates under
/// direct arithmetic; PASS from sampling-based probes is resolution-limited
/// unless `certified` is set.
struct Verdict {
  enum class Status { Pass, Fail, Inconclusive };

  Status status = Status::Inconclusive;
  bool certified = false;
  std::string name;

  std::optional<std::pair<GraphPoint, GraphPoint>> witness_pair;
  std::optional<GraphPoint> witness_point;
  std::optional<Vec> witness_query; // a probe query (e.g. unsolvable y*)
  std::optional<Vec> witness_w, witness_z; // coderivative directions

  std::optional<double> sigma_hat;
  std::optional<double> r_hat;
  std::optional<double> ell_hat;
  std::optional<double> value;

  Resolution resolution;
  std::string detail;
  std::vector<Verdict> parts; // sub-verdicts of combined analyses

  bool pass() const { return status == Status::Pass; }
  bool fail() const { return status == Status::Fail; }
};

const char* status_name(Verdict::Status s);

} // namespace monolab
