#include "krpac/concentration/mgf.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "krpac/errors.hpp"
#include "krpac/parallel.hpp"

namespace krpac::concentration {

std::vector<MgfPoint> empirical_mgf(std::span<const double> values, std::span<const double> lambdas) {
  const std::size_t n = values.size();
  if (n < 2) throw EmptySampleError(fmt::format("empirical MGF needs at least 2 samples, got {}", n));
  const double nd = static_cast<double>(n);
  double total = 0.0;
  for (double v : values) total += v;
  const double fbar = total / nd;

  std::vector<MgfPoint> points;
  points.reserve(lambdas.size());
  for (double lambda : lambdas) {
    MgfPoint p;
    p.lambda = lambda;
    if (lambda == 0.0) {
      points.push_back(p);
      continue;
    }
    // exp(lambda (f_k - fbar)) = exp(lambda f_k) exp(-lambda fbar); the jackknife reuses the
    // uncentred terms e_k = exp(lambda (f_k - fbar)) with leave-one-out means.
    double sum = 0.0;
    std::vector<double> e(n);
    for (std::size_t k = 0; k < n; ++k) {
      e[k] = std::exp(lambda * (values[k] - fbar));
      sum += e[k];
    }
    const double mean = sum / nd;
    double ss = 0.0;
    for (double v : e) ss += (v - mean) * (v - mean);
    const double var = ss / (nd - 1.0);
    p.estimate = mean;
    p.std_error = std::sqrt(var / nd);

    // Leave-one-out estimate: centre at fbar_(k), average the other n-1 terms.
    double loo_total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double fbar_k = (total - values[k]) / (nd - 1.0);
      const double shift = std::exp(lambda * (fbar - fbar_k));
      loo_total += (sum - e[k]) * shift / (nd - 1.0);
    }
    p.jackknife_bias = (nd - 1.0) * (loo_total / nd - mean);
    points.push_back(p);
  }
  return points;
}

std::vector<MgfPoint> empirical_mgf(const dependency::ScalarFunction& f, const Sampler& sampler,
                                    std::span<const double> lambdas, std::size_t n,
                                    std::uint64_t seed) {
  if (n < 2) throw EmptySampleError(fmt::format("empirical MGF needs at least 2 samples, got {}", n));
  const SampleMatrix samples = sampler(n, seed);
  if (static_cast<std::size_t>(samples.rows()) != n) {
    throw DimensionMismatch(fmt::format("sampler returned {} rows, expected {}", samples.rows(), n));
  }
  std::vector<double> values(n);
  for_each_chunk(n, kChunkSize, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) values[k] = f(row_span(samples, static_cast<Eigen::Index>(k)));
  });
  return empirical_mgf(values, lambdas);
}

double gamma_delta_norm_sq(const dependency::DependencyMatrix& gamma,
                           const dependency::OscillationVector& osc) {
  if (static_cast<std::size_t>(gamma.gamma.cols()) != osc.size()) {
    throw DimensionMismatch(fmt::format("Gamma has {} columns, oscillation vector has {} entries",
                                        gamma.gamma.cols(), osc.size()));
  }
  return (gamma.gamma * osc.as_vector()).squaredNorm();
}

double mgf_bound(double lambda, double norm_sq) { return std::exp(lambda * lambda * norm_sq / 8.0); }

double mgf_bound(double lambda, const dependency::DependencyMatrix& gamma,
                 const dependency::OscillationVector& osc) {
  return mgf_bound(lambda, gamma_delta_norm_sq(gamma, osc));
}

double concentration_tail(double t, double norm_sq) {
  if (!(t >= 0.0)) throw ParameterError(fmt::format("tail level must be nonnegative, got {}", t));
  if (norm_sq <= 0.0) return t > 0.0 ? 0.0 : 1.0;
  return std::min(1.0, 2.0 * std::exp(-2.0 * t * t / norm_sq));
}

double concentration_tail(double t, const dependency::DependencyMatrix& gamma,
                          const dependency::OscillationVector& osc) {
  return concentration_tail(t, gamma_delta_norm_sq(gamma, osc));
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int l = -5; l <= 5; ++l) grid.push_back(l);
  return grid;
}

std::vector<MgfCheckRow> compare_with_bounds(std::span<const MgfPoint> points, double norm_sq_paper,
                                             double norm_sq_conservative) {
  std::vector<MgfCheckRow> rows;
  rows.reserve(points.size());
  for (const MgfPoint& p : points) {
    MgfCheckRow row;
    row.point = p;
    row.bound_paper = mgf_bound(p.lambda, norm_sq_paper);
    row.bound_conservative = mgf_bound(p.lambda, norm_sq_conservative);
    row.paper_holds = p.estimate <= row.bound_paper + 3.0 * p.std_error;
    row.conservative_holds = p.estimate <= row.bound_conservative + 3.0 * p.std_error;
    rows.push_back(row);
  }
  return rows;
}

std::string mgf_csv(std::span<const MgfCheckRow> rows) {
  std::string out = "lambda,empirical,std_error,bound_paper_mode,bound_conservative_mode\n";
  for (const MgfCheckRow& r : rows) {
    out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.point.lambda, r.point.estimate,
                       r.point.std_error, r.bound_paper, r.bound_conservative);
  }
  return out;
}

}  // namespace krpac::concentration
