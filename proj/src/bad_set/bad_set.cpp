#include "krpac/bad_set/bad_set.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "krpac/certificate/certificate.hpp"
#include "krpac/dependency/lipschitz.hpp"
#include "krpac/errors.hpp"
#include "krpac/parallel.hpp"

namespace krpac::bad_set {

void BadSetCandidate::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ParameterError(fmt::format("candidate epsilon = {} outside (0, 1)", epsilon));
  }
  if (lipschitz.rows() != lipschitz.cols()) throw ParameterError("candidate L must be square");
  if (!lipschitz.allFinite() || (lipschitz.array() < 0.0).any()) {
    throw ParameterError("candidate L must be finite and nonnegative");
  }
}

double hoeffding_upper_bound(std::size_t count, std::size_t n, double epsilon) {
  if (n == 0) throw EmptySampleError("Hoeffding bound needs n >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ParameterError(fmt::format("epsilon = {} outside (0, 1)", epsilon));
  }
  if (count > n) throw ParameterError(fmt::format("count {} exceeds n {}", count, n));
  const double nd = static_cast<double>(n);
  return std::min(1.0, static_cast<double>(count) / nd + std::sqrt(std::log(2.0 / epsilon) / (2.0 * nd)));
}

PointEvidence point_evidence(std::span<const double> x, const MembershipContext& ctx) {
  const transport::TriangularMap& map = *ctx.map;
  const std::size_t bs = ctx.metric.block_size();
  const std::size_t dim = map.dimension();
  if (x.size() != dim || dim % bs != 0) {
    throw DimensionMismatch(fmt::format("point of length {} for a map of dimension {} with block size {}",
                                        x.size(), dim, bs));
  }
  const std::size_t sites = dim / bs;
  PointEvidence ev;
  ev.excess = Eigen::MatrixXd::Zero(sites, sites);
  const Point zx = transport::invert_prefix(map, x);

  Point z(dim);
  Point out_x(dim);
  Point out_p(dim);
  for (std::size_t i = 0; i + 1 < sites; ++i) {
    const std::size_t head = (i + 1) * bs;
    const std::size_t tail = dim - head;
    const SampleMatrix tau = transport::sample_reference(ctx.ref.marginal(tail), ctx.n_mc, mix_seed(ctx.seed, i));
    const std::span<const double> xi_block = x.subspan(i * bs, bs);

    // Outputs at the point itself.
    std::vector<double> base(ctx.n_mc * dim);
    for (std::size_t k = 0; k < ctx.n_mc; ++k) {
      std::copy(zx.begin(), zx.begin() + static_cast<std::ptrdiff_t>(head), z.begin());
      const auto t = row_span(tau, static_cast<Eigen::Index>(k));
      std::copy(t.begin(), t.end(), z.begin() + static_cast<std::ptrdiff_t>(head));
      map.forward_prefix(z, out_x);
      std::copy(out_x.begin(), out_x.end(), base.begin() + static_cast<std::ptrdiff_t>(k * dim));
    }

    for (const Point& probe : ctx.probes) {
      if (probe.size() != bs) throw DimensionMismatch("probe has wrong block size");
      const double rho = ctx.metric.distance(xi_block, probe);
      if (rho < dependency::kDegenerateDistance) {
        ++ev.degenerate_probes;
        continue;
      }
      Point xp(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(head));
      std::copy(probe.begin(), probe.end(), xp.begin() + static_cast<std::ptrdiff_t>(i * bs));
      Point zp;
      try {
        zp = transport::invert_prefix(map, xp);
      } catch (const NoRootError&) {
        ++ev.degenerate_probes;
        continue;
      }
      ++ev.usable_probes;
      std::vector<double> sum(sites, 0.0);
      std::vector<double> sum_sq(sites, 0.0);
      for (std::size_t k = 0; k < ctx.n_mc; ++k) {
        std::copy(zp.begin(), zp.end(), z.begin());
        const auto t = row_span(tau, static_cast<Eigen::Index>(k));
        std::copy(t.begin(), t.end(), z.begin() + static_cast<std::ptrdiff_t>(head));
        map.forward_prefix(z, out_p);
        for (std::size_t j = i + 1; j < sites; ++j) {
          const double v = ctx.metric.distance(
              std::span<const double>(base.data() + k * dim + j * bs, bs),
              std::span<const double>(out_p.data() + j * bs, bs));
          sum[j] += v;
          sum_sq[j] += v * v;
        }
      }
      const double n = static_cast<double>(ctx.n_mc);
      for (std::size_t j = i + 1; j < sites; ++j) {
        const double mean = sum[j] / n;
        const double var = ctx.n_mc > 1 ? std::max(0.0, (sum_sq[j] - n * mean * mean) / (n - 1.0)) : 0.0;
        const double lower = (mean - 2.0 * std::sqrt(var / n)) / rho;
        auto& cell = ev.excess(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        cell = std::max(cell, lower);
      }
    }
  }
  return ev;
}

bool is_bad(const PointEvidence& evidence, const Eigen::MatrixXd& lipschitz) {
  if (lipschitz.rows() != evidence.excess.rows() || lipschitz.cols() != evidence.excess.cols()) {
    throw DimensionMismatch(fmt::format("L is {}x{}, evidence is {}x{}", lipschitz.rows(), lipschitz.cols(),
                                        evidence.excess.rows(), evidence.excess.cols()));
  }
  for (Eigen::Index i = 0; i < lipschitz.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < lipschitz.cols(); ++j) {
      if (evidence.excess(i, j) > lipschitz(i, j)) return true;
    }
  }
  return false;
}

MembershipResult membership(std::span<const double> x, const Eigen::MatrixXd& lipschitz,
                            const MembershipContext& ctx) {
  const PointEvidence ev = point_evidence(x, ctx);
  MembershipResult r;
  r.bad = is_bad(ev, lipschitz);
  r.degenerate_probes = ev.degenerate_probes;
  r.all_probes_degenerate = ev.usable_probes == 0;
  return r;
}

void estimate_xi(const SampleMatrix& sample, BadSetCandidate& candidate, const MembershipFn& member) {
  candidate.validate();
  const auto n = static_cast<std::size_t>(sample.rows());
  if (n == 0) throw EmptySampleError("estimate_xi needs at least one sample");
  std::vector<char> flags(n, 0);
  for_each_chunk(n, kChunkSize, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) flags[r] = member(row_span(sample, static_cast<Eigen::Index>(r))) ? 1 : 0;
  });
  candidate.violations = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 1));
  candidate.sample_size = n;
  candidate.xi = hoeffding_upper_bound(candidate.violations, n, candidate.epsilon);
}

void estimate_xi(const SampleMatrix& sample, BadSetCandidate& candidate, const MembershipContext& ctx) {
  estimate_xi(sample, candidate, [&](std::span<const double> x) {
    return membership(x, candidate.lipschitz, ctx).bad;
  });
}

namespace {

void check_budget(const std::vector<BadSetCandidate>& candidates, double total_epsilon) {
  if (candidates.empty()) throw ParameterError("no bad-set candidates");
  double sum = 0.0;
  for (const BadSetCandidate& c : candidates) {
    c.validate();
    sum += c.epsilon;
  }
  if (std::abs(sum - total_epsilon) > 1e-12) {
    throw ParameterError(fmt::format("candidate budgets sum to {:.15g}, expected {:.15g}", sum, total_epsilon));
  }
}

SelectionReport finish_selection(std::vector<BadSetCandidate>& candidates, const CertificateContext& cert) {
  SelectionReport report;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const BadSetCandidate& c = candidates[k];
    certificate::CertificateInput in;
    in.m = cert.m;
    in.d = static_cast<std::size_t>(c.lipschitz.rows());
    in.diameter = cert.diameter;
    in.D = dependency::build_D(c.lipschitz);
    in.oscillation = cert.oscillation;
    in.kl = cert.kl;
    in.delta = cert.delta;
    in.xi = *c.xi;
    in.empirical_risk = cert.empirical_risk;
    const certificate::CertificateReport r = certificate::certify(in, cert.mode);
    report.candidates.push_back({c.violations, *c.xi, r.gap, r.total});
    if (r.total < report.candidates[report.chosen].total) report.chosen = k;
  }
  return report;
}

}  // namespace

SelectionReport select_candidate(std::vector<BadSetCandidate>& candidates, const SampleMatrix& sample,
                                 const CandidateMembership& member, const CertificateContext& cert,
                                 double total_epsilon) {
  check_budget(candidates, total_epsilon);
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    estimate_xi(sample, candidates[k], [&](std::span<const double> x) { return member(k, x); });
  }
  return finish_selection(candidates, cert);
}

SelectionReport select_candidate(std::vector<BadSetCandidate>& candidates, const SampleMatrix& sample,
                                 const MembershipContext& ctx, const CertificateContext& cert,
                                 double total_epsilon) {
  check_budget(candidates, total_epsilon);
  const auto n = static_cast<std::size_t>(sample.rows());
  if (n == 0) throw EmptySampleError("candidate selection needs at least one sample");
  // The evidence does not depend on L, so it is computed once per point.
  std::vector<PointEvidence> evidence(n);
  for_each_chunk(n, 16, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) evidence[r] = point_evidence(row_span(sample, static_cast<Eigen::Index>(r)), ctx);
  });
  for (BadSetCandidate& c : candidates) {
    std::size_t count = 0;
    for (const PointEvidence& ev : evidence) count += is_bad(ev, c.lipschitz) ? 1 : 0;
    c.violations = count;
    c.sample_size = n;
    c.xi = hoeffding_upper_bound(count, n, c.epsilon);
  }
  SelectionReport report = finish_selection(candidates, cert);
  for (const PointEvidence& ev : evidence) report.degenerate_probes += ev.degenerate_probes;
  return report;
}

std::vector<BadSetCandidate> banded_candidates(std::size_t d, std::span<const double> caps,
                                               std::span<const std::size_t> widths,
                                               double total_epsilon) {
  if (caps.empty() || widths.empty()) throw ParameterError("banded candidates need caps and widths");
  const double eps = total_epsilon / static_cast<double>(caps.size() * widths.size());
  std::vector<BadSetCandidate> out;
  for (double cap : caps) {
    for (std::size_t w : widths) {
      BadSetCandidate c;
      c.lipschitz = Eigen::MatrixXd::Zero(d, d);
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d && j - i <= w; ++j) {
          c.lipschitz(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cap;
        }
      }
      c.epsilon = eps;
      c.label = fmt::format("band cap={} width={}", cap, w);
      c.validate();
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<BadSetCandidate> candidates_from_json(const nlohmann::json& j, std::size_t d) {
  if (!j.is_array() || j.empty()) throw ConfigError("candidates must be a nonempty JSON array");
  std::vector<BadSetCandidate> out;
  for (const auto& item : j) {
    BadSetCandidate c;
    c.epsilon = item.at("epsilon").get<double>();
    const auto& l = item.at("L");
    if (l.is_object()) {
      const auto& band = l.at("band");
      const double cap = band.at("cap").get<double>();
      const std::size_t width = band.at("width").get<std::size_t>();
      std::vector<double> caps{cap};
      std::vector<std::size_t> widths{width};
      c.lipschitz = banded_candidates(d, caps, widths, 0.5)[0].lipschitz;
      c.label = fmt::format("band cap={} width={}", cap, width);
    } else {
      c.lipschitz = dependency::matrix_from_json(l);
      if (static_cast<std::size_t>(c.lipschitz.rows()) != d) {
        throw ConfigError(fmt::format("candidate L has {} rows, expected {}", c.lipschitz.rows(), d));
      }
      c.label = "dense";
    }
    c.validate();
    out.push_back(std::move(c));
  }
  return out;
}

nlohmann::json to_json(const SelectionReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const CandidateReport& c : report.candidates) {
    rows.push_back({{"count", c.violations}, {"xi", c.xi}, {"gap", c.gap}, {"total", c.total}});
  }
  return {{"chosen", report.chosen}, {"candidates", rows}, {"degenerate_probes", report.degenerate_probes}};
}

}  // namespace krpac::bad_set
