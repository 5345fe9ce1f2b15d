#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "krpac/dependency/dependency_matrix.hpp"
#include "krpac/dependency/oscillation.hpp"
#include "krpac/types.hpp"

namespace krpac::concentration {

/// Produces n rows deterministically from a seed, e.g. a conditioned pushforward.
using Sampler = std::function<SampleMatrix(std::size_t n, std::uint64_t seed)>;

struct MgfPoint {
  double lambda = 0.0;
  double estimate = 1.0;    ///< mean of exp(lambda (f - fbar)), fbar the in-sample mean
  double std_error = 0.0;
  double jackknife_bias = 0.0;  ///< jackknife estimate of the bias from centring at fbar
};

/// Centred empirical MGF of f under the sampler's law. Throws EmptySampleError for n < 2.
std::vector<MgfPoint> empirical_mgf(const dependency::ScalarFunction& f, const Sampler& sampler,
                                    std::span<const double> lambdas, std::size_t n,
                                    std::uint64_t seed);

/// Same on precomputed values f(z_k).
std::vector<MgfPoint> empirical_mgf(std::span<const double> values, std::span<const double> lambdas);

/// ||Gamma delta||_2^2.
double gamma_delta_norm_sq(const dependency::DependencyMatrix& gamma,
                           const dependency::OscillationVector& osc);

/// exp(lambda^2 ||Gamma delta||^2 / 8).
double mgf_bound(double lambda, const dependency::DependencyMatrix& gamma,
                 const dependency::OscillationVector& osc);
double mgf_bound(double lambda, double gamma_delta_norm_sq);

/// min(1, 2 exp(-2 t^2 / ||Gamma delta||^2)).
double concentration_tail(double t, const dependency::DependencyMatrix& gamma,
                          const dependency::OscillationVector& osc);
double concentration_tail(double t, double gamma_delta_norm_sq);

/// Integer grid -5..5.
std::vector<double> default_lambda_grid();

struct MgfCheckRow {
  MgfPoint point;
  double bound_paper = 0.0;
  double bound_conservative = 0.0;
  bool paper_holds = true;         ///< estimate <= bound_paper + 3 std_error
  bool conservative_holds = true;  ///< estimate <= bound_conservative + 3 std_error
};

/// Compares the empirical MGF against both scale modes of the bound.
std::vector<MgfCheckRow> compare_with_bounds(std::span<const MgfPoint> points, double norm_sq_paper,
                                             double norm_sq_conservative);

/// lambda,empirical,std_error,bound_paper_mode,bound_conservative_mode
std::string mgf_csv(std::span<const MgfCheckRow> rows);

}  // namespace krpac::concentration
