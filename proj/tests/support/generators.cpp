#include "generators.hpp"

#include <random>

namespace krpac::testing {

namespace {

transport::MapPtr make_random(std::size_t d, std::uint64_t seed, bool separable) {
  std::mt19937_64 engine(seed);
  std::uniform_int_distribution<std::size_t> prefix_degree(0, 3);
  std::uniform_int_distribution<std::size_t> density_degree(1, 4);
  std::uniform_real_distribution<double> coefficient(0.2, 2.0);
  std::vector<transport::MonotoneComponent> comps;
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<std::size_t> degrees;
    std::size_t count = 1;
    for (std::size_t k = 0; k < i; ++k) {
      degrees.push_back(separable ? 0 : prefix_degree(engine));
      count *= degrees.back() + 1;
    }
    degrees.push_back(density_degree(engine));
    count *= degrees.back() + 1;
    std::vector<double> coeffs(count);
    for (double& c : coeffs) c = coefficient(engine);
    comps.emplace_back(std::move(degrees), std::move(coeffs));
  }
  return std::make_shared<transport::BernsteinMap>(std::move(comps));
}

}  // namespace

transport::MapPtr random_bernstein_map(std::size_t d, std::uint64_t seed) { return make_random(d, seed, false); }

transport::MapPtr separable_bernstein_map(std::size_t d, std::uint64_t seed) { return make_random(d, seed, true); }

transport::MapPtr square_map() {
  std::vector<transport::MonotoneComponent> comps;
  comps.emplace_back(std::vector<std::size_t>{1}, std::vector<double>{0.0, 2.0});
  return std::make_shared<transport::BernsteinMap>(std::move(comps));
}

transport::MapPtr averaging_map() {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 0.0, 0.5, 0.5;
  return std::make_shared<transport::LinearTriangularMap>(a, Eigen::VectorXd::Zero(2),
                                                          std::vector<Interval>(2, kUnitInterval));
}

transport::MapPtr shift_half_map() {
  Eigen::MatrixXd a(1, 1);
  a << 0.5;
  Eigen::VectorXd b(1);
  b << 0.5;
  return std::make_shared<transport::LinearTriangularMap>(a, b, std::vector<Interval>{kUnitInterval});
}

void reflect(std::span<const double> in, std::span<double> out) {
  for (std::size_t k = 0; k < in.size(); ++k) out[k] = 1.0 - in[k];
}

}  // namespace krpac::testing
