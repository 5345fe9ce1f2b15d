#pragma once

#include <cstddef>
#include <span>

// Bernstein basis helpers on [0, 1]. The basis of degree m has m + 1 members
// B_k^m(t) = C(m, k) t^k (1 - t)^(m - k), k = 0..m.
namespace krpac::transport::bernstein {

/// Writes B_0^m(t) .. B_m^m(t) into out (size m + 1).
void basis(std::size_t degree, double t, std::span<double> out);

/// Evaluates sum_k coefficients[k] B_k^m(t) with m = coefficients.size() - 1.
double evaluate(std::span<const double> coefficients, double t);

/// Normalized antiderivative: int_0^t p / int_0^1 p for the nonnegative
/// polynomial p with the given Bernstein coefficients. Requires a positive
/// coefficient sum.
double normalized_integral(std::span<const double> coefficients, double t);

}  // namespace krpac::transport::bernstein
