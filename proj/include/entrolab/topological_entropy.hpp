#ifndef ENTROLAB_TOPOLOGICAL_ENTROPY_HPP
#define ENTROLAB_TOPOLOGICAL_ENTROPY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entrolab/group.hpp"
#include "entrolab/report.hpp"

namespace entrolab {

// A labeling of a finite subset by letter indices, aligned with the shape's
// canonical order.
struct Pattern {
    FiniteSubset shape;
    std::vector<int> labels;

    Pattern(FiniteSubset shape_, std::vector<int> labels_);
};

// Alphabet labelings of the group avoiding finitely many forbidden patterns,
// with the translation action.
struct Subshift {
    GroupSpec group;
    std::vector<std::string> alphabet;
    std::vector<Pattern> forbidden;

    Subshift(GroupSpec group_, std::vector<std::string> alphabet_,
             std::vector<Pattern> forbidden_);

    std::size_t num_letters() const { return alphabet.size(); }
    bool is_full_shift() const { return forbidden.empty(); }
    // All forbidden shapes are singletons or consecutive pairs over Z, so
    // interval counts are exact via the transfer matrix.
    bool is_one_step_over_z() const;
};

struct PatternCount {
    std::uint64_t count = 0;
    // Exact for full shifts and one-step Z subshifts on intervals; otherwise
    // local admissibility over-counts, an upper bound for the true N.
    BoundKind kind = BoundKind::Exact;
};

// Number of labelings of F with no forbidden translate fully inside F.
PatternCount admissible_pattern_count(const Subshift& s, const FiniteSubset& f,
                                      const Limits& limits = {});

// Count of distinct projections of admissible F-patterns under a letter
// merge; letter_classes[i] is the class of letter i. Used for cover
// coarsening comparisons.
std::uint64_t projected_pattern_count(const Subshift& s, const FiniteSubset& f,
                                      const std::vector<int>& letter_classes,
                                      const Limits& limits = {});

// Per-F values log(N)/|F| with running minimum; an upper bound for the
// letter-cover entropy.
EstimateReport naive_topological_entropy_estimate(const Subshift& s, const Schedule& schedule,
                                                  const Limits& limits = {});

// A point of the subshift known on the ball of a given radius.
class SymbolicPoint {
public:
    SymbolicPoint(const Subshift& s, int radius, std::vector<int> labels,
                  const Limits& limits = {});
    // Trusted constructor for batch builders that have already checked
    // admissibility; domain must be ball(group, radius).
    static SymbolicPoint unchecked(const GroupSpec& spec, int radius, FiniteSubset domain,
                                   std::vector<int> labels);

    int radius() const { return radius_; }
    const FiniteSubset& domain() const { return domain_; }
    const std::vector<int>& labels() const { return labels_; }
    int label_at(std::size_t domain_index) const { return labels_[domain_index]; }

private:
    SymbolicPoint(GroupSpec spec, int radius, FiniteSubset domain, std::vector<int> labels)
        : spec_(spec), radius_(radius), domain_(std::move(domain)), labels_(std::move(labels)) {}

    GroupSpec spec_;
    int radius_;
    FiniteSubset domain_;
    std::vector<int> labels_;
};

// First-disagreement ultrametric value 2^(-i*) with its truncation
// uncertainty: the true distance lies in [value, value + uncertainty].
struct MetricValue {
    double value = 0.0;
    double uncertainty = 0.0;
};

MetricValue point_metric(const SymbolicPoint& x, const SymbolicPoint& y);

// max over gamma in F of d(gamma x, gamma y); requires the truncation radius
// to cover every translate.
MetricValue dynamical_pseudometric(const SymbolicPoint& x, const SymbolicPoint& y,
                                   const FiniteSubset& f);

// Finite (pseudo)metric space with validated axioms.
class FiniteMetricSpace {
public:
    FiniteMetricSpace(std::vector<std::string> point_labels, std::vector<std::vector<double>> dist);

    std::size_t size() const { return labels_.size(); }
    double dist(std::size_t i, std::size_t j) const { return dist_[i * labels_.size() + j]; }
    const std::vector<std::string>& point_labels() const { return labels_; }

    static constexpr double kTriangleTolerance = 1e-12;

private:
    std::vector<std::string> labels_;
    std::vector<double> dist_; // row-major
};

enum class SolveMode { Exact, Greedy };

struct ExtremalSetResult {
    std::size_t value = 0;
    std::vector<std::size_t> witness;
    BoundKind kind = BoundKind::Exact; // Lower/Upper when greedy
};

// Maximal cardinality of a subset with pairwise distances >= eps. Exact mode
// is a branch-and-bound maximum independent set, capped at 24 points; greedy
// returns a maximal separated set in point order, a lower-bound witness.
ExtremalSetResult separation_number(const FiniteMetricSpace& m, double eps, SolveMode mode);

// Minimal cardinality of a subset within distance eps of every point. Exact
// mode is a branch-and-bound minimum dominating set with the same cap;
// greedy returns an upper-bound witness.
ExtremalSetResult spanning_number(const FiniteMetricSpace& m, double eps, SolveMode mode);

struct SeparationProbeRow {
    std::string label;
    std::size_t f_size = 0;
    std::size_t sample_size = 0;
    std::size_t sep = 0;
    BoundKind sep_kind = BoundKind::Exact;
    double value_nats = 0.0;
};

struct SeparationProbeReport {
    std::vector<SeparationProbeRow> rows;
    EstimateReport cover_estimate; // cross-listed for comparison
    bool exhaustive_sample = false;
    int radius = 0;
    std::vector<std::string> notes;
};

// Separation-number probe on a deterministic sample of truncated points.
// Neither a certified upper nor lower bound of the entropy: the true value
// takes a sup over eps and an inf over all finite F on the full space.
SeparationProbeReport entropy_via_separation(const Subshift& s, double eps,
                                             const Schedule& schedule, int radius,
                                             std::size_t sample_budget, std::uint64_t seed,
                                             const Limits& limits = {});

} // namespace entrolab

#endif
