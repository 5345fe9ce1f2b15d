#include "krpac/certificate/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "krpac/errors.hpp"
#include "krpac/parallel.hpp"

namespace krpac::certificate {

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::zero:
      return "zero";
    case LossKind::clipped_absolute:
      return "clipped_absolute";
    case LossKind::zero_one_threshold:
      return "zero_one_threshold";
  }
  return "unknown";
}

LossKind parse_loss_kind(const std::string& name) {
  if (name == "zero") return LossKind::zero;
  if (name == "clipped_absolute") return LossKind::clipped_absolute;
  if (name == "zero_one_threshold") return LossKind::zero_one_threshold;
  throw ConfigError(fmt::format("unknown loss '{}'", name));
}

double HypothesisClassSpec::predict(const Theta& theta, double x) const {
  return std::clamp(theta.w * x + theta.b, 0.0, 1.0);
}

double HypothesisClassSpec::pointwise_loss(double yhat, double y) const {
  switch (loss) {
    case LossKind::zero:
      return 0.0;
    case LossKind::clipped_absolute:
      return std::min(1.0, std::abs(yhat - y));
    case LossKind::zero_one_threshold:
      return std::abs(yhat - y) > threshold ? 1.0 : 0.0;
  }
  return 0.0;
}

double HypothesisClassSpec::loss_lipschitz() const {
  switch (loss) {
    case LossKind::zero:
      return 0.0;
    case LossKind::clipped_absolute:
      return 1.0;
    case LossKind::zero_one_threshold:
      return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

double HypothesisClassSpec::structured_loss(const Theta& theta, std::span<const double> point) const {
  if (point.empty() || point.size() % 2 != 0) {
    throw DimensionMismatch(fmt::format("structured point must have even positive length, got {}", point.size()));
  }
  const std::size_t d = point.size() / 2;
  double sum = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    sum += pointwise_loss(predict(theta, point[2 * i]), point[2 * i + 1]);
  }
  return sum / static_cast<double>(d);
}

dependency::OscillationVector oscillation_vector(const HypothesisClassSpec& cls, std::size_t d,
                                                 const dependency::Metric& metric,
                                                 const transport::GoodSetSpec*) {
  if (d == 0) throw ParameterError("dimension must be positive");
  if (!std::isfinite(cls.weight_bound) || cls.weight_bound < 0.0) {
    throw ParameterError(fmt::format("weight bound must be finite and nonnegative, got {}", cls.weight_bound));
  }
  const double lip = cls.loss_lipschitz();
  if (!std::isfinite(lip)) {
    throw ParameterError(fmt::format("loss '{}' has no finite Lipschitz constant", to_string(cls.loss)));
  }
  if (metric.kind() != dependency::MetricKind::component_sum || metric.block_size() != 2) {
    throw ParameterError("the affine class needs the component-sum metric on X x Y");
  }
  const double value = lip * std::max(cls.weight_bound, 1.0) / static_cast<double>(d);
  return dependency::OscillationVector(std::vector<double>(d, value));
}

Theta GaussianPredictorDist::sample(std::mt19937_64& engine) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  Theta t;
  t.w = mean.w + std::sqrt(variance.w) * normal(engine);
  t.b = mean.b + std::sqrt(variance.b) * normal(engine);
  return t;
}

namespace {

void check_variance(double v, const char* what) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw ParameterError(fmt::format("{} variance must be positive, got {}", what, v));
  }
}

double kl_1d(double mq, double vq, double mp, double vp) {
  const double diff = mq - mp;
  return 0.5 * (vq / vp + diff * diff / vp - 1.0 + std::log(vp / vq));
}

}  // namespace

double kl_gaussian(const GaussianPredictorDist& posterior, const GaussianPredictorDist& prior) {
  check_variance(prior.variance.w, "prior");
  check_variance(prior.variance.b, "prior");
  check_variance(posterior.variance.w, "posterior");
  check_variance(posterior.variance.b, "posterior");
  return kl_1d(posterior.mean.w, posterior.variance.w, prior.mean.w, prior.variance.w) +
         kl_1d(posterior.mean.b, posterior.variance.b, prior.mean.b, prior.variance.b);
}

double posterior_mass_outside_bound(const GaussianPredictorDist& posterior, double weight_bound) {
  const double mu = posterior.mean.w;
  const double var = posterior.variance.w;
  if (var <= 0.0) return std::abs(mu) > weight_bound ? 1.0 : 0.0;
  const double s = std::sqrt(2.0 * var);
  // P(w > W) + P(w < -W)
  return 0.5 * std::erfc((weight_bound - mu) / s) + 0.5 * std::erfc((weight_bound + mu) / s);
}

double empirical_risk(const GaussianPredictorDist& posterior, const SampleMatrix& data,
                      const HypothesisClassSpec& cls, std::size_t n_theta, std::uint64_t seed) {
  if (data.rows() == 0) throw EmptySampleError("empirical risk needs at least one data point");
  if (n_theta == 0) throw EmptySampleError("empirical risk needs at least one parameter draw");
  std::vector<double> per_theta(n_theta);
  for_each_chunk(n_theta, kChunkSize, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    std::mt19937_64 engine = chunk_engine(seed, chunk);
    for (std::size_t t = begin; t < end; ++t) {
      const Theta theta = posterior.sample(engine);
      double sum = 0.0;
      for (Eigen::Index r = 0; r < data.rows(); ++r) sum += cls.structured_loss(theta, row_span(data, r));
      per_theta[t] = sum / static_cast<double>(data.rows());
    }
  });
  double total = 0.0;
  for (double v : per_theta) total += v;
  return total / static_cast<double>(n_theta);
}

std::vector<double> stochastic_losses(const GaussianPredictorDist& posterior,
                                      const SampleMatrix& data, const HypothesisClassSpec& cls,
                                      std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(data.rows());
  if (n == 0) throw EmptySampleError("risk estimate needs at least one data point");
  std::vector<double> losses(n);
  for_each_chunk(n, kChunkSize, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    std::mt19937_64 engine = chunk_engine(seed, chunk);
    for (std::size_t r = begin; r < end; ++r) {
      losses[r] = cls.structured_loss(posterior.sample(engine), row_span(data, static_cast<Eigen::Index>(r)));
    }
  });
  return losses;
}

HypothesisClassSpec class_from_json(const nlohmann::json& j) {
  HypothesisClassSpec cls;
  cls.weight_bound = j.value("weight_bound", cls.weight_bound);
  cls.loss = parse_loss_kind(j.value("loss", std::string("clipped_absolute")));
  cls.threshold = j.value("threshold", cls.threshold);
  return cls;
}

GaussianPredictorDist gaussian_from_json(const nlohmann::json& j) {
  GaussianPredictorDist g;
  const auto mean = j.at("mean");
  const auto var = j.at("variance");
  if (mean.size() != 2 || var.size() != 2) throw ConfigError("Gaussian needs [w, b] mean and variance");
  g.mean = {mean[0].get<double>(), mean[1].get<double>()};
  g.variance = {var[0].get<double>(), var[1].get<double>()};
  return g;
}

}  // namespace krpac::certificate
