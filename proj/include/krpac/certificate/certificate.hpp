#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "krpac/dependency/dependency_matrix.hpp"
#include "krpac/dependency/oscillation.hpp"

namespace krpac::certificate {

/// Upper end of the admissible confidence range, exp(-1/e).
double max_confidence();

struct CertificateInput {
  std::size_t m = 1;       ///< training sample size
  std::size_t d = 1;       ///< structure size
  double diameter = 1.0;   ///< ||rho||
  Eigen::MatrixXd D;       ///< any nonnegative d x d matrix
  dependency::OscillationVector oscillation;
  double kl = 0.0;
  double delta = 0.05;
  double xi = 0.0;              ///< bad-set mass bound
  double empirical_risk = 0.0;  ///< R_m

  /// ParameterError on any violated invariant, including delta outside
  /// (0, exp(-1/e)).
  void validate() const;
};

struct BetaStep {
  std::size_t j = 0;
  double delta_j = 0.0;
  double beta_j = 0.0;
};

struct CertificateReport {
  dependency::ScaleMode mode = dependency::ScaleMode::paper;
  double empirical_risk = 0.0;
  double xi = 0.0;
  double gap = 0.0;
  double total = 0.0;          ///< R_m + gap + xi, unclamped
  double total_clamped = 0.0;  ///< total clamped to [0, 1 + xi]
  bool vacuous = false;        ///< total > 1 + xi
  double d_delta_norm = 0.0;      ///< ||D delta||_2
  double gamma_delta_norm = 0.0;  ///< ||Gamma delta||_2
  double complexity = 0.0;        ///< log(1/delta) + KL
  double beta_star = 0.0;
  double oracle_gap = 0.0;      ///< gap at the unconstrained optimum beta*
  std::size_t j_star = 0;
  double proof_path_gap = 0.0;  ///< gap at beta_{j*} with confidence delta_{j*}
  std::vector<BetaStep> beta_schedule;  ///< j = 0..j*+1
};

/// ||Gamma delta||_2 for the given scale mode.
double gamma_delta_norm(const CertificateInput& input, dependency::ScaleMode mode);

CertificateReport certify(const CertificateInput& input,
                          dependency::ScaleMode mode = dependency::ScaleMode::paper);

/// delta_j = delta 2^{-(j+1)}, beta_j = 2^j sqrt(8 m log(1/delta)) / ||Gamma delta||
/// for j = 0..j_max. DegenerateError for a zero norm.
std::vector<BetaStep> beta_schedule(double delta, std::size_t m, double gamma_delta_norm,
                                    std::size_t j_max);

/// floor(log2(1 + KL / log(1/delta)) / 2).
std::size_t j_star(double kl, double delta);

/// sqrt(8 m (log(1/delta) + KL)) / ||Gamma delta||.
double beta_star(double kl, double delta, std::size_t m, double gamma_delta_norm);

/// beta ||Gamma delta||^2 / (8 m) + (log(1/delta) + KL) / beta.
double tuned_gap(double beta, double kl, double delta, std::size_t m, double gamma_delta_norm);

/// Neighbourhood matrix with D_ij = 1 when (j - i) mod d < c: every site
/// depends on itself and the next c - 1 sites, cyclically.
Eigen::MatrixXd neighbourhood_matrix(std::size_t d, std::size_t c);

nlohmann::json to_json(const CertificateReport& report);

}  // namespace krpac::certificate
