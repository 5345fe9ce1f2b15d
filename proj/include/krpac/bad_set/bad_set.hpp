#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "krpac/dependency/dependency_matrix.hpp"
#include "krpac/dependency/metric.hpp"
#include "krpac/dependency/oscillation.hpp"
#include "krpac/transport/reference.hpp"
#include "krpac/transport/triangular_map.hpp"

namespace krpac::bad_set {

/// Candidate Lipschitz matrix L^(k) with its share eps_k of the error budget.
struct BadSetCandidate {
  Eigen::MatrixXd lipschitz;
  double epsilon = 0.05;
  std::optional<double> xi;
  std::size_t violations = 0;
  std::size_t sample_size = 0;
  std::string label;

  /// ParameterError unless eps in (0, 1) and L is square, finite and nonnegative.
  void validate() const;
};

/// min(1, count/n + sqrt(log(2/eps) / (2n))).
double hoeffding_upper_bound(std::size_t count, std::size_t n, double epsilon);

/// Data-space predicate "x is in the bad set of this candidate".
using MembershipFn = std::function<bool(std::span<const double>)>;

/// Everything the transport-based membership test needs. Probes are site
/// values (blocks of metric.block_size() scalars) substituted for x_i.
struct MembershipContext {
  transport::MapPtr map;
  transport::ReferenceMeasure ref{transport::ReferenceKind::uniform_unit_cube, 1};
  dependency::Metric metric = dependency::Metric::absolute();
  std::vector<Point> probes;
  std::size_t n_mc = 256;
  std::uint64_t seed = 0;
};

/// Per-point evidence: excess(i, j) is the largest (ratio - 2 std_error) over
/// probes for the stability ratio of sites (i, j), i < j; zero elsewhere.
struct PointEvidence {
  Eigen::MatrixXd excess;
  std::size_t degenerate_probes = 0;  ///< probes skipped (rho ~ 0 or not invertible)
  std::size_t usable_probes = 0;
};

/// Evaluates the stability ratios at x against every probe. The tau draws for
/// site i depend only on (seed, i), so the result is deterministic per point.
/// Throws NoRootError when x itself is not invertible.
PointEvidence point_evidence(std::span<const double> x, const MembershipContext& ctx);

/// x is bad for L iff some excess(i, j) > L(i, j).
bool is_bad(const PointEvidence& evidence, const Eigen::MatrixXd& lipschitz);

struct MembershipResult {
  bool bad = false;
  std::size_t degenerate_probes = 0;
  bool all_probes_degenerate = false;
};

MembershipResult membership(std::span<const double> x, const Eigen::MatrixXd& lipschitz,
                            const MembershipContext& ctx);

/// Counts members among the sample rows and sets xi, violations and sample_size.
/// EmptySampleError for an empty sample.
void estimate_xi(const SampleMatrix& sample, BadSetCandidate& candidate, const MembershipFn& member);
void estimate_xi(const SampleMatrix& sample, BadSetCandidate& candidate, const MembershipContext& ctx);

/// Terms of the certificate shared by every candidate.
struct CertificateContext {
  std::size_t m = 1;
  double diameter = 1.0;
  dependency::OscillationVector oscillation;
  double kl = 0.0;
  double delta = 0.05;
  double empirical_risk = 0.0;
  dependency::ScaleMode mode = dependency::ScaleMode::paper;
};

struct CandidateReport {
  std::size_t violations = 0;
  double xi = 0.0;
  double gap = 0.0;
  double total = 0.0;  ///< R_m + gap + xi
};

struct SelectionReport {
  std::size_t chosen = 0;
  std::vector<CandidateReport> candidates;
  std::size_t degenerate_probes = 0;
};

/// Membership of row x for candidate k.
using CandidateMembership = std::function<bool(std::size_t, std::span<const double>)>;

/// Estimates xi for every candidate, evaluates R_m + gap + xi and returns the
/// argmin (ties to the smallest index). ParameterError unless the eps_k are in
/// (0, 1) and sum to total_epsilon within 1e-12.
SelectionReport select_candidate(std::vector<BadSetCandidate>& candidates, const SampleMatrix& sample,
                                 const CandidateMembership& member, const CertificateContext& cert,
                                 double total_epsilon);
SelectionReport select_candidate(std::vector<BadSetCandidate>& candidates, const SampleMatrix& sample,
                                 const MembershipContext& ctx, const CertificateContext& cert,
                                 double total_epsilon);

/// Banded matrices L_ij = cap for 0 < j - i <= width, one per (cap, width),
/// sharing total_epsilon equally.
std::vector<BadSetCandidate> banded_candidates(std::size_t d, std::span<const double> caps,
                                               std::span<const std::size_t> widths,
                                               double total_epsilon);

/// [{"L": [[...]] | {"band": {"cap": c, "width": w}}, "epsilon": e}, ...]
std::vector<BadSetCandidate> candidates_from_json(const nlohmann::json& j, std::size_t d);

nlohmann::json to_json(const SelectionReport& report);

}  // namespace krpac::bad_set
