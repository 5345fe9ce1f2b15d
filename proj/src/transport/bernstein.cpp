#include "krpac/transport/bernstein.hpp"

#include <vector>

#include "krpac/errors.hpp"

namespace krpac::transport::bernstein {

void basis(std::size_t degree, double t, std::span<double> out) {
  // Triangle recursion B_k^{r} = (1 - t) B_k^{r-1} + t B_{k-1}^{r-1}.
  const double s = 1.0 - t;
  out[0] = 1.0;
  for (std::size_t r = 1; r <= degree; ++r) {
    out[r] = t * out[r - 1];
    for (std::size_t k = r - 1; k > 0; --k) out[k] = s * out[k] + t * out[k - 1];
    out[0] *= s;
  }
}

double evaluate(std::span<const double> coefficients, double t) {
  // de Casteljau.
  std::vector<double> b(coefficients.begin(), coefficients.end());
  const double s = 1.0 - t;
  for (std::size_t r = 1; r < b.size(); ++r)
    for (std::size_t k = 0; k + r < b.size(); ++k) b[k] = s * b[k] + t * b[k + 1];
  return b.empty() ? 0.0 : b[0];
}

double normalized_integral(std::span<const double> coefficients, double t) {
  // int_0^t sum_k c_k B_k^m = 1/(m+1) sum_{j=1}^{m+1} (c_0 + .. + c_{j-1}) B_j^{m+1}(t);
  // the total over [0,1] is (c_0 + .. + c_m)/(m+1).
  const std::size_t m = coefficients.size() - 1;
  std::vector<double> partial(m + 2, 0.0);
  for (std::size_t j = 1; j <= m + 1; ++j) partial[j] = partial[j - 1] + coefficients[j - 1];
  const double total = partial[m + 1];
  if (!(total > 0.0)) throw DegenerateError("Bernstein density with zero total mass");
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return evaluate(partial, t) / total;
}

}  // namespace krpac::transport::bernstein
