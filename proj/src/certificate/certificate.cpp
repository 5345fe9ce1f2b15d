#include "krpac/certificate/certificate.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "krpac/errors.hpp"

namespace krpac::certificate {

double max_confidence() { return std::exp(-std::exp(-1.0)); }

void CertificateInput::validate() const {
  if (!(delta > 0.0 && delta < max_confidence())) {
    throw ParameterError(fmt::format("confidence delta = {} outside (0, {:.5f})", delta, max_confidence()));
  }
  if (m == 0) throw ParameterError("sample count m must be positive");
  if (d == 0) throw ParameterError("structure size d must be positive");
  if (!std::isfinite(diameter) || diameter < 0.0) {
    throw ParameterError(fmt::format("metric diameter must be finite and nonnegative, got {}", diameter));
  }
  if (static_cast<std::size_t>(D.rows()) != d || static_cast<std::size_t>(D.cols()) != d) {
    throw DimensionMismatch(fmt::format("D is {}x{}, expected {}x{}", D.rows(), D.cols(), d, d));
  }
  if (!D.allFinite() || (D.array() < 0.0).any()) throw ParameterError("D must be finite and nonnegative");
  if (oscillation.size() != d) {
    throw DimensionMismatch(fmt::format("oscillation vector has {} entries, expected {}", oscillation.size(), d));
  }
  if (!std::isfinite(kl) || kl < 0.0) throw ParameterError(fmt::format("KL must be finite and nonnegative, got {}", kl));
  if (!(xi >= 0.0 && xi <= 1.0)) throw ParameterError(fmt::format("xi must lie in [0, 1], got {}", xi));
  if (!(empirical_risk >= 0.0 && empirical_risk <= 1.0)) {
    throw ParameterError(fmt::format("empirical risk must lie in [0, 1], got {}", empirical_risk));
  }
}

double gamma_delta_norm(const CertificateInput& input, dependency::ScaleMode mode) {
  const double scale = mode == dependency::ScaleMode::paper
                           ? input.diameter / static_cast<double>(input.d)
                           : input.diameter;
  return scale * (input.D * input.oscillation.as_vector()).norm();
}

std::vector<BetaStep> beta_schedule(double delta, std::size_t m, double norm, std::size_t j_max) {
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DegenerateError(fmt::format("beta schedule needs a positive norm, got {}", norm));
  }
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError(fmt::format("delta = {} outside (0, 1)", delta));
  const double base = std::sqrt(8.0 * static_cast<double>(m) * std::log(1.0 / delta)) / norm;
  std::vector<BetaStep> steps;
  for (std::size_t j = 0; j <= j_max; ++j) {
    const double scale = std::ldexp(1.0, static_cast<int>(j));
    steps.push_back({j, delta / (2.0 * scale), scale * base});
  }
  return steps;
}

std::size_t j_star(double kl, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError(fmt::format("delta = {} outside (0, 1)", delta));
  if (!(kl >= 0.0)) throw ParameterError(fmt::format("KL must be nonnegative, got {}", kl));
  return static_cast<std::size_t>(std::floor(0.5 * std::log2(1.0 + kl / std::log(1.0 / delta))));
}

double beta_star(double kl, double delta, std::size_t m, double norm) {
  return std::sqrt(8.0 * static_cast<double>(m) * (std::log(1.0 / delta) + kl)) / norm;
}

double tuned_gap(double beta, double kl, double delta, std::size_t m, double norm) {
  return beta * norm * norm / (8.0 * static_cast<double>(m)) + (std::log(1.0 / delta) + kl) / beta;
}

CertificateReport certify(const CertificateInput& input, dependency::ScaleMode mode) {
  input.validate();
  CertificateReport r;
  r.mode = mode;
  r.empirical_risk = input.empirical_risk;
  r.xi = input.xi;
  r.d_delta_norm = (input.D * input.oscillation.as_vector()).norm();
  r.gamma_delta_norm = gamma_delta_norm(input, mode);
  r.complexity = std::log(1.0 / input.delta) + input.kl;
  r.gap = 2.0 * r.gamma_delta_norm * std::sqrt(r.complexity / (2.0 * static_cast<double>(input.m)));
  r.total = input.empirical_risk + r.gap + input.xi;
  r.total_clamped = std::clamp(r.total, 0.0, 1.0 + input.xi);
  r.vacuous = r.total > 1.0 + input.xi;
  r.j_star = j_star(input.kl, input.delta);
  if (r.gamma_delta_norm > 0.0) {
    r.beta_star = beta_star(input.kl, input.delta, input.m, r.gamma_delta_norm);
    r.oracle_gap = tuned_gap(r.beta_star, input.kl, input.delta, input.m, r.gamma_delta_norm);
    r.beta_schedule = beta_schedule(input.delta, input.m, r.gamma_delta_norm, r.j_star + 1);
    const BetaStep& step = r.beta_schedule[r.j_star];
    r.proof_path_gap = tuned_gap(step.beta_j, input.kl, step.delta_j, input.m, r.gamma_delta_norm);
  }
  return r;
}

Eigen::MatrixXd neighbourhood_matrix(std::size_t d, std::size_t c) {
  if (c == 0 || c > d) throw ParameterError(fmt::format("neighbourhood size {} outside [1, {}]", c, d));
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < c; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>((i + k) % d)) = 1.0;
    }
  }
  return m;
}

nlohmann::json to_json(const CertificateReport& r) {
  nlohmann::json schedule = nlohmann::json::array();
  for (const BetaStep& s : r.beta_schedule) {
    schedule.push_back({{"j", s.j}, {"delta_j", s.delta_j}, {"beta_j", s.beta_j}});
  }
  return {{"mode", dependency::to_string(r.mode)},
          {"empirical_risk", r.empirical_risk},
          {"xi", r.xi},
          {"gap", r.gap},
          {"total", r.total},
          {"total_clamped", r.total_clamped},
          {"vacuous", r.vacuous},
          {"d_delta_norm", r.d_delta_norm},
          {"gamma_delta_norm", r.gamma_delta_norm},
          {"complexity", r.complexity},
          {"beta_star", r.beta_star},
          {"oracle_gap", r.oracle_gap},
          {"j_star", r.j_star},
          {"proof_path_gap", r.proof_path_gap},
          {"beta_schedule", schedule}};
}

}  // namespace krpac::certificate
