#include "krpac/transport/good_set.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <utility>

#include <fmt/format.h>

#include "krpac/errors.hpp"

namespace krpac::transport {

bool Box::contains(std::span<const double> z) const {
  if (z.size() != sides.size()) return false;
  for (std::size_t i = 0; i < sides.size(); ++i)
    if (!sides[i].contains(z[i])) return false;
  return true;
}

GoodSetSpec GoodSetSpec::from_boxes(std::vector<Box> boxes) {
  GoodSetSpec spec;
  if (!boxes.empty()) spec.dimension_ = boxes.front().dimension();
  for (const Box& b : boxes) {
    if (b.dimension() != spec.dimension_ || b.dimension() == 0)
      throw DimensionMismatch("good set: boxes must share a positive dimension");
    for (const Interval& s : b.sides)
      if (std::isnan(s.lower) || std::isnan(s.upper) || s.lower > s.upper)
        throw ParameterError("good set: box side with lower > upper");
  }
  spec.boxes_ = std::move(boxes);
  return spec;
}

GoodSetSpec GoodSetSpec::from_predicate(std::size_t dimension,
                                        std::function<bool(std::span<const double>)> predicate) {
  if (!predicate) throw ParameterError("good set: empty predicate");
  GoodSetSpec spec;
  spec.dimension_ = dimension;
  spec.predicate_ = std::move(predicate);
  return spec;
}

bool GoodSetSpec::contains(std::span<const double> z) const {
  if (predicate_) return predicate_(z);
  return std::any_of(boxes_.begin(), boxes_.end(), [&](const Box& b) { return b.contains(z); });
}

namespace {

struct Cell {
  std::vector<Interval> sides;
  std::vector<double> suffix_mass;  // suffix_mass[i] = prod_{j > i} mass(sides[j])
};

constexpr std::size_t kMaxCells = 2'000'000;

double representative(const Interval& s) {
  if (std::isfinite(s.lower) && std::isfinite(s.upper)) return 0.5 * (s.lower + s.upper);
  if (std::isfinite(s.lower)) return s.lower + 1.0;
  if (std::isfinite(s.upper)) return s.upper - 1.0;
  return 0.0;
}

// Disjoint grid cells covering the box union inside the reference support.
std::vector<Cell> decompose(const ReferenceMeasure& ref, const std::vector<Box>& boxes) {
  const std::size_t d = boxes.front().dimension();
  const Interval support = ref.support();
  std::vector<std::vector<Interval>> axis(d);
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> cuts{support.lower, support.upper};
    for (const Box& b : boxes)
      for (double v : {b.sides[i].lower, b.sides[i].upper})
        if (v > support.lower && v < support.upper) cuts.push_back(v);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) axis[i].push_back({cuts[k], cuts[k + 1]});
    total *= axis[i].size();
    if (total > kMaxCells) throw ParameterError("good set: box union too fragmented");
  }

  std::vector<Cell> cells;
  std::vector<std::size_t> index(d, 0);
  Point probe(d);
  for (std::size_t n = 0; n < total; ++n) {
    Cell cell;
    cell.sides.resize(d);
    double mass = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      cell.sides[i] = axis[i][index[i]];
      probe[i] = representative(cell.sides[i]);
      mass *= ref.mass(cell.sides[i]);
    }
    if (mass > 0.0 &&
        std::any_of(boxes.begin(), boxes.end(), [&](const Box& b) { return b.contains(probe); })) {
      cell.suffix_mass.assign(d, 1.0);
      for (std::size_t i = d - 1; i > 0; --i)
        cell.suffix_mass[i - 1] = cell.suffix_mass[i] * ref.mass(cell.sides[i]);
      cells.push_back(std::move(cell));
    }
    for (std::size_t i = d; i-- > 0;) {
      if (++index[i] < axis[i].size()) break;
      index[i] = 0;
    }
  }
  return cells;
}

class BoxRestrictionMap final : public TriangularMap {
 public:
  BoxRestrictionMap(ReferenceMeasure ref, std::vector<Cell> cells)
      : ref_(ref), cells_(std::move(cells)) {}

  std::size_t dimension() const override { return ref_.dimension(); }
  Interval domain(std::size_t) const override { return ref_.support(); }

  void forward_prefix(std::span<const double> z, std::span<double> out) const override {
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = solve(i, out.first(i), z[i]);
  }

 private:
  // Inverts the conditional CDF of coordinate i given the output prefix. The
  // conditional mass is piecewise linear in ref.cdf(t) over grid intervals.
  double solve(std::size_t i, std::span<const double> prefix, double z) const {
    std::map<std::pair<double, double>, double> weights;
    for (const Cell& c : cells_) {
      bool active = true;
      for (std::size_t j = 0; j < i && active; ++j) active = c.sides[j].contains(prefix[j]);
      if (active) weights[{c.sides[i].lower, c.sides[i].upper}] += c.suffix_mass[i];
    }
    double total = 0.0;
    for (const auto& [side, w] : weights) total += w * ref_.mass({side.first, side.second});
    if (!(total > 0.0))
      throw DegenerateError(fmt::format("restricted map: prefix outside the good set at "
                                        "coordinate {}",
                                        i));

    const double target = ref_.cdf(z) * total;
    double acc = 0.0;
    std::size_t k = 0;
    for (const auto& [side, w] : weights) {
      const double m = w * ref_.mass({side.first, side.second});
      ++k;
      if (m <= 0.0 && k < weights.size()) continue;
      if (acc + m >= target || k == weights.size()) {
        const double u = ref_.cdf(side.first) + (target - acc) / w;
        return std::clamp(ref_.quantile(u), side.first, side.second);
      }
      acc += m;
    }
    return weights.rbegin()->first.second;
  }

  ReferenceMeasure ref_;
  std::vector<Cell> cells_;
};

}  // namespace

double GoodSetSpec::reference_mass(const ReferenceMeasure& ref) const {
  if (!is_box_union()) throw ParameterError("reference_mass needs a box-union good set");
  if (boxes_.empty()) return 0.0;
  double s = 0.0;
  for (const Cell& c : decompose(ref, boxes_)) s += c.suffix_mass[0] * ref.mass(c.sides[0]);
  return s;
}

MapPtr restrict_reference(const ReferenceMeasure& ref, const GoodSetSpec& good) {
  if (!good.is_box_union())
    throw ParameterError("restrict_reference supports box-union good sets only");
  if (good.boxes().empty()) throw DegenerateError("restrict_reference: empty good set");
  if (good.dimension() != ref.dimension())
    throw DimensionMismatch("restrict_reference: good set and reference dimensions differ");
  auto cells = decompose(ref, good.boxes());
  double mass = 0.0;
  for (const Cell& c : cells) mass += c.suffix_mass[0] * ref.mass(c.sides[0]);
  if (!(mass > 0.0)) throw DegenerateError("restrict_reference: good set has zero mass");
  return std::make_shared<BoxRestrictionMap>(ref, std::move(cells));
}

}  // namespace krpac::transport
