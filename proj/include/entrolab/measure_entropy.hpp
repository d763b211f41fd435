#ifndef ENTROLAB_MEASURE_ENTROPY_HPP
#define ENTROLAB_MEASURE_ENTROPY_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "entrolab/group.hpp"
#include "entrolab/report.hpp"

namespace entrolab {

// Probability vector; entries >= 0, total within 1e-12 of one.
class Distribution {
public:
    explicit Distribution(std::vector<double> probs);

    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    const std::vector<double>& probs() const { return probs_; }

    static constexpr double kMassTolerance = 1e-12;

private:
    std::vector<double> probs_;
};

// H(p) = -sum p log p in nats, with 0 log 0 = 0.
double shannon_entropy(const Distribution& p);

// Joint mass matrix indexed (cell of alpha, cell of beta).
class JointDistribution {
public:
    explicit JointDistribution(std::vector<std::vector<double>> matrix);

    std::size_t rows() const { return matrix_.size(); }
    std::size_t cols() const { return matrix_.empty() ? 0 : matrix_.front().size(); }
    double at(std::size_t i, std::size_t j) const { return matrix_[i][j]; }

    Distribution row_marginal() const; // distribution of alpha
    Distribution col_marginal() const; // distribution of beta
    JointDistribution transposed() const;

    // Throws if the marginals disagree with the given ones beyond tol.
    void check_marginals(const Distribution& alpha, const Distribution& beta,
                         double tol = 1e-12) const;

private:
    std::vector<std::vector<double>> matrix_;
};

// H(alpha | beta), rows conditioned on columns; zero-mass columns contribute 0.
double conditional_entropy(const JointDistribution& j);

// Finite labeled partition of the shift space into cylinders read off
// base_coordinates (currently a single coordinate; cells <-> letters).
struct Partition {
    std::vector<std::string> labels;
    Distribution cell_measure;
    FiniteSubset base_coordinates;

    Partition(std::vector<std::string> labels_, Distribution measure_, FiniteSubset coords_);

    std::size_t cell_count() const { return labels.size(); }

    // Letter partition at the identity coordinate.
    static Partition letters(const GroupSpec& spec, std::vector<std::string> labels,
                             Distribution measure);
};

struct BernoulliMeasure {
    Distribution base;
};

// Full probability table over letter labelings of a declared finite domain.
// probs is indexed by the mixed-radix odometer over the domain's canonical
// order (first domain coordinate = most significant digit).
struct ExplicitCylinderMeasure {
    FiniteSubset domain;
    std::size_t num_letters;
    std::vector<double> probs;
    // Declared invariance checks: for each gamma, the table's marginals on
    // {s in D : gamma s in D} and its translate must agree within 1e-9.
    std::vector<GroupElement> consistency_checks;

    static constexpr double kTableTolerance = 1e-9;
};

class ShiftMeasure {
public:
    static ShiftMeasure bernoulli(const GroupSpec& spec, Distribution base);
    static ShiftMeasure explicit_cylinder(const GroupSpec& spec, ExplicitCylinderMeasure table);

    const GroupSpec& spec() const { return spec_; }
    bool is_bernoulli() const { return std::holds_alternative<BernoulliMeasure>(kind_); }
    const BernoulliMeasure& as_bernoulli() const { return std::get<BernoulliMeasure>(kind_); }
    const ExplicitCylinderMeasure& as_explicit() const {
        return std::get<ExplicitCylinderMeasure>(kind_);
    }
    std::size_t num_letters() const;

private:
    ShiftMeasure(GroupSpec spec, std::variant<BernoulliMeasure, ExplicitCylinderMeasure> kind)
        : spec_(spec), kind_(std::move(kind)) {}

    GroupSpec spec_;
    std::variant<BernoulliMeasure, ExplicitCylinderMeasure> kind_;
};

// The join of alpha's translates over F: cells are the positive-measure
// functions F -> cells(alpha), labeled by '|'-joined component labels in
// canonical F order.
Partition join_partition(const ShiftMeasure& m, const Partition& alpha, const FiniteSubset& f,
                         const Limits& limits = {});

// Per-F normalized join entropies H(alpha^F)/|F| with their running minimum.
// The final value is an upper bound for the partition's dynamical entropy,
// never the infimum itself.
EstimateReport naive_measure_entropy_estimate(const ShiftMeasure& m, const Partition& alpha,
                                              const Schedule& schedule, const Limits& limits = {});

struct AmplificationRow {
    std::string label;
    std::size_t f_size = 0;
    std::size_t wf_size = 0;
    Rational ratio;                        // |WF| / |F|
    double analytic_value = 0.0;           // ratio * H(alpha), exact for Bernoulli
    std::optional<double> enumerated_value; // H(alpha^{WF}) / |F| when under cap
    bool agrees = true;                     // |analytic - enumerated| <= tolerance
};

struct AmplificationReport {
    std::vector<AmplificationRow> rows;
    double tolerance = 1e-9;
    std::vector<std::string> notes;
};

// For Bernoulli measures H(alpha^{WF}) = |WF| H(alpha) exactly, so the
// normalized entropy of alpha^W along F equals the expansion ratio times
// H(alpha); rows carry both routes and their agreement.
AmplificationReport amplified_entropy_check(const ShiftMeasure& m, const Partition& alpha,
                                            const FiniteSubset& w, const Schedule& schedule,
                                            const Limits& limits = {});

struct ProductSystemRow {
    std::string label;
    std::size_t f_size = 0;
    double product_value = 0.0;    // per-F entropy of the product system
    double sum_of_parts = 0.0;     // sum of the factors' per-F entropies
    bool agrees = true;
};

struct ProductSystemReport {
    std::vector<ProductSystemRow> rows;
    double tolerance = 1e-9;
};

// Direct-product additivity, testable per F for Bernoulli factors.
ProductSystemReport product_system_entropy(const ShiftMeasure& m1, const Partition& alpha1,
                                           const ShiftMeasure& m2, const Partition& alpha2,
                                           const Schedule& schedule, const Limits& limits = {});

} // namespace entrolab

#endif
