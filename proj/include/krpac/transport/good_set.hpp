#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "krpac/transport/reference.hpp"
#include "krpac/transport/triangular_map.hpp"

namespace krpac::transport {

/// Closed axis-aligned box.
struct Box {
  std::vector<Interval> sides;

  std::size_t dimension() const { return sides.size(); }
  bool contains(std::span<const double> z) const;
};

/// The good set A^c in reference coordinates: a union of boxes, or a plain
/// membership predicate (usable for rejection sampling only).
class GoodSetSpec {
 public:
  static GoodSetSpec from_boxes(std::vector<Box> boxes);
  static GoodSetSpec from_predicate(std::size_t dimension,
                                    std::function<bool(std::span<const double>)> predicate);

  bool is_box_union() const { return !predicate_; }
  std::size_t dimension() const { return dimension_; }
  const std::vector<Box>& boxes() const { return boxes_; }
  bool contains(std::span<const double> z) const;

  /// Reference probability of the set (box unions only).
  double reference_mass(const ReferenceMeasure& ref) const;

 private:
  std::size_t dimension_ = 0;
  std::vector<Box> boxes_;
  std::function<bool(std::span<const double>)> predicate_;
};

/// KR map pushing ref onto ref restricted to the good set, built by sequential
/// inversion of the conditional CDFs of the box union. Throws DegenerateError
/// for a null good set and ParameterError for predicate-only sets.
MapPtr restrict_reference(const ReferenceMeasure& ref, const GoodSetSpec& good);

}  // namespace krpac::transport
