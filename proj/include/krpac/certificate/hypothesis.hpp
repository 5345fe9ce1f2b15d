#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "krpac/dependency/metric.hpp"
#include "krpac/dependency/oscillation.hpp"
#include "krpac/transport/good_set.hpp"
#include "krpac/types.hpp"

namespace krpac::certificate {

enum class LossKind { zero, clipped_absolute, zero_one_threshold };

std::string to_string(LossKind kind);
LossKind parse_loss_kind(const std::string& name);

/// Parameters (w, b) of a site-wise affine predictor.
struct Theta {
  double w = 0.0;
  double b = 0.0;
};

/// Affine predictors yhat_i = clip(w x_i + b, 0, 1) with |w| <= W, on sites
/// Z = X x Y = [0,1] x [0,1]. A structured point is stored interleaved as
/// (x_1, y_1, ..., x_d, y_d).
struct HypothesisClassSpec {
  double weight_bound = 1.0;  ///< W
  LossKind loss = LossKind::clipped_absolute;
  double threshold = 0.5;  ///< zero-one-threshold loss: 1{|yhat - y| > threshold}

  double predict(const Theta& theta, double x) const;
  double pointwise_loss(double yhat, double y) const;
  /// Lipschitz constant of the pointwise loss in yhat and in y; infinite for zero-one.
  double loss_lipschitz() const;
  /// (1/d) sum_i loss(yhat_i, y_i) for one structured point.
  double structured_loss(const Theta& theta, std::span<const double> point) const;
};

/// Analytic bound delta_i = Lip(loss) max(W, 1) / d under the component-sum
/// metric on X x Y. The good set only shrinks the supremum, so it is accepted
/// and ignored. ParameterError for W = inf or a non-Lipschitz loss.
dependency::OscillationVector oscillation_vector(const HypothesisClassSpec& cls, std::size_t d,
                                                 const dependency::Metric& metric,
                                                 const transport::GoodSetSpec* good = nullptr);

/// Diagonal Gaussian over (w, b). Zero variances give a point mass.
struct GaussianPredictorDist {
  Theta mean;
  Theta variance{1.0, 1.0};

  Theta sample(std::mt19937_64& engine) const;
};

/// KL(posterior || prior) for diagonal Gaussians. ParameterError on a
/// nonpositive variance on either side.
double kl_gaussian(const GaussianPredictorDist& posterior, const GaussianPredictorDist& prior);

/// Posterior probability of |w| > W.
double posterior_mass_outside_bound(const GaussianPredictorDist& posterior, double weight_bound);

/// Mean structured loss over m data rows and n_theta posterior draws.
/// Rows are interleaved points of length 2d. EmptySampleError for empty data.
double empirical_risk(const GaussianPredictorDist& posterior, const SampleMatrix& data,
                      const HypothesisClassSpec& cls, std::size_t n_theta, std::uint64_t seed);

/// Per-row structured loss with an independent posterior draw for every row;
/// the mean estimates the risk of the stochastic predictor under the data law.
std::vector<double> stochastic_losses(const GaussianPredictorDist& posterior,
                                      const SampleMatrix& data, const HypothesisClassSpec& cls,
                                      std::uint64_t seed);

HypothesisClassSpec class_from_json(const nlohmann::json& j);
GaussianPredictorDist gaussian_from_json(const nlohmann::json& j);

}  // namespace krpac::certificate
