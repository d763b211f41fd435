#include "entrolab/measure_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace entrolab {

namespace {

double plogp(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

void check_pow_cap(std::size_t base, std::size_t count, std::size_t cap, const char* what) {
    // base^count <= cap, without overflow.
    std::size_t total = 1;
    for (std::size_t i = 0; i < count; ++i) {
        if (base != 0 && total > cap / base)
            throw ResourceError(std::string(what) + ": joined cell count exceeds cap (" +
                                std::to_string(cap) + ")");
        total *= base;
    }
}

// Coordinates the joined partition reads: union of gamma * c0 over F.
std::vector<GroupElement> translated_coordinates(const Partition& alpha, const FiniteSubset& f) {
    const GroupElement& c0 = alpha.base_coordinates[0];
    std::vector<GroupElement> coords;
    coords.reserve(f.size());
    for (const GroupElement& g : f.elements()) coords.push_back(multiply(g, c0));
    return coords;
}

} // namespace

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw ArgumentError("Distribution: empty probability vector");
    for (double p : probs_)
        if (!(p >= 0.0)) throw ArgumentError("Distribution: negative or NaN probability");
    double total = kahan_sum(probs_);
    if (std::abs(total - 1.0) > kMassTolerance)
        throw ArgumentError("Distribution: probabilities sum to " + std::to_string(total) +
                            ", not 1");
}

double shannon_entropy(const Distribution& p) {
    KahanAccumulator acc;
    for (double x : p.probs()) acc.add(plogp(x));
    double h = -acc.value();
    return h < 0.0 ? 0.0 : h;
}

JointDistribution::JointDistribution(std::vector<std::vector<double>> matrix)
    : matrix_(std::move(matrix)) {
    if (matrix_.empty() || matrix_.front().empty())
        throw ArgumentError("JointDistribution: empty matrix");
    std::size_t width = matrix_.front().size();
    KahanAccumulator total;
    for (const auto& row : matrix_) {
        if (row.size() != width) throw ArgumentError("JointDistribution: ragged matrix");
        for (double p : row) {
            if (!(p >= 0.0)) throw ArgumentError("JointDistribution: negative or NaN entry");
            total.add(p);
        }
    }
    if (std::abs(total.value() - 1.0) > Distribution::kMassTolerance)
        throw ArgumentError("JointDistribution: total mass is " + std::to_string(total.value()) +
                            ", not 1");
}

Distribution JointDistribution::row_marginal() const {
    std::vector<double> sums(rows(), 0.0);
    for (std::size_t i = 0; i < rows(); ++i) sums[i] = kahan_sum(matrix_[i]);
    return Distribution(std::move(sums));
}

Distribution JointDistribution::col_marginal() const {
    std::vector<double> sums(cols(), 0.0);
    for (std::size_t j = 0; j < cols(); ++j) {
        KahanAccumulator acc;
        for (std::size_t i = 0; i < rows(); ++i) acc.add(matrix_[i][j]);
        sums[j] = acc.value();
    }
    return Distribution(std::move(sums));
}

JointDistribution JointDistribution::transposed() const {
    std::vector<std::vector<double>> t(cols(), std::vector<double>(rows(), 0.0));
    for (std::size_t i = 0; i < rows(); ++i)
        for (std::size_t j = 0; j < cols(); ++j) t[j][i] = matrix_[i][j];
    return JointDistribution(std::move(t));
}

void JointDistribution::check_marginals(const Distribution& alpha, const Distribution& beta,
                                        double tol) const {
    if (alpha.size() != rows() || beta.size() != cols())
        throw ArgumentError("JointDistribution: marginal sizes do not match matrix shape");
    Distribution r = row_marginal();
    Distribution c = col_marginal();
    for (std::size_t i = 0; i < rows(); ++i)
        if (std::abs(r[i] - alpha[i]) > tol)
            throw ArgumentError("JointDistribution: row marginal " + std::to_string(i) +
                                " disagrees with the partition distribution");
    for (std::size_t j = 0; j < cols(); ++j)
        if (std::abs(c[j] - beta[j]) > tol)
            throw ArgumentError("JointDistribution: column marginal " + std::to_string(j) +
                                " disagrees with the partition distribution");
}

double conditional_entropy(const JointDistribution& j) {
    Distribution col = j.col_marginal();
    KahanAccumulator acc;
    for (std::size_t b = 0; b < j.cols(); ++b) {
        if (col[b] <= 0.0) continue; // zero-mass conditioning cell
        for (std::size_t a = 0; a < j.rows(); ++a) {
            double p = j.at(a, b);
            if (p > 0.0) acc.add(p * std::log(p / col[b]));
        }
    }
    double h = -acc.value();
    return h < 0.0 ? 0.0 : h;
}

Partition::Partition(std::vector<std::string> labels_, Distribution measure_, FiniteSubset coords_)
    : labels(std::move(labels_)), cell_measure(std::move(measure_)),
      base_coordinates(std::move(coords_)) {
    if (labels.size() != cell_measure.size())
        throw ArgumentError("Partition: label/measure size mismatch");
    std::vector<std::string> sorted(labels);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ArgumentError("Partition: duplicate cell labels");
    if (base_coordinates.is_empty()) throw ArgumentError("Partition: empty base coordinates");
}

Partition Partition::letters(const GroupSpec& spec, std::vector<std::string> labels,
                             Distribution measure) {
    return Partition(std::move(labels), std::move(measure), FiniteSubset::singleton_identity(spec));
}

ShiftMeasure ShiftMeasure::bernoulli(const GroupSpec& spec, Distribution base) {
    return ShiftMeasure(spec, BernoulliMeasure{std::move(base)});
}

ShiftMeasure ShiftMeasure::explicit_cylinder(const GroupSpec& spec, ExplicitCylinderMeasure table) {
    if (table.num_letters == 0) throw ArgumentError("explicit measure: zero letters");
    if (table.domain.is_empty()) throw ArgumentError("explicit measure: empty domain");
    if (!(table.domain.spec() == spec))
        throw ArgumentError("explicit measure: domain group mismatch");
    std::size_t want = 1;
    for (std::size_t i = 0; i < table.domain.size(); ++i) {
        if (want > (std::size_t(1) << 62) / table.num_letters)
            throw ResourceError("explicit measure: table too large");
        want *= table.num_letters;
    }
    if (table.probs.size() != want)
        throw ArgumentError("explicit measure: table has " + std::to_string(table.probs.size()) +
                            " entries, expected " + std::to_string(want));
    for (double p : table.probs)
        if (!(p >= 0.0)) throw ArgumentError("explicit measure: negative or NaN entry");
    double total = kahan_sum(table.probs);
    if (std::abs(total - 1.0) > ExplicitCylinderMeasure::kTableTolerance)
        throw ArgumentError("explicit measure: table sums to " + std::to_string(total) +
                            ", not 1");

    // Declared invariance: marginal on S = {s in D : gamma s in D} must equal
    // the marginal on gamma S pulled back along the translation.
    const FiniteSubset& dom = table.domain;
    std::size_t d = dom.size();
    std::size_t k = table.num_letters;
    for (const GroupElement& gamma : table.consistency_checks) {
        std::vector<std::pair<std::size_t, std::size_t>> pairs; // (index of s, index of gamma*s)
        for (std::size_t i = 0; i < d; ++i) {
            if (auto j = dom.index_of(multiply(gamma, dom[i]))) pairs.emplace_back(i, *j);
        }
        if (pairs.empty()) continue;
        std::size_t cells = 1;
        for (std::size_t i = 0; i < pairs.size(); ++i) cells *= k;
        std::vector<double> lhs(cells, 0.0), rhs(cells, 0.0);
        // Walk the full table once, accumulating both marginals.
        std::vector<std::size_t> digits(d, 0);
        for (std::size_t idx = 0; idx < table.probs.size(); ++idx) {
            std::size_t key_l = 0, key_r = 0;
            for (const auto& [si, ti] : pairs) {
                key_l = key_l * k + digits[si];
                key_r = key_r * k + digits[ti];
            }
            lhs[key_l] += table.probs[idx];
            rhs[key_r] += table.probs[idx];
            for (std::size_t pos = d; pos-- > 0;) {
                if (++digits[pos] < k) break;
                digits[pos] = 0;
            }
        }
        for (std::size_t c = 0; c < cells; ++c)
            if (std::abs(lhs[c] - rhs[c]) > ExplicitCylinderMeasure::kTableTolerance)
                throw ArgumentError("explicit measure: declared marginal consistency fails for " +
                                    gamma.to_string());
    }
    return ShiftMeasure(spec, std::move(table));
}

std::size_t ShiftMeasure::num_letters() const {
    if (is_bernoulli()) return as_bernoulli().base.size();
    return as_explicit().num_letters;
}

Partition join_partition(const ShiftMeasure& m, const Partition& alpha, const FiniteSubset& f,
                         const Limits& limits) {
    if (!(m.spec() == f.spec()) || !(m.spec() == alpha.base_coordinates.spec()))
        throw ArgumentError("join_partition: mismatched group specs");
    if (f.is_empty()) throw ArgumentError("join_partition: empty F");
    if (alpha.base_coordinates.size() != 1)
        throw UnsupportedMeasureError(
            "join_partition: only single-coordinate cylinder partitions are supported");
    if (alpha.cell_count() != m.num_letters())
        throw ArgumentError("join_partition: partition cells do not match the measure's letters");

    if (f.size() == 1 && f[0].is_identity()) return alpha;

    std::vector<GroupElement> coords = translated_coordinates(alpha, f);

    if (m.is_bernoulli()) {
        const Distribution& base = m.as_bernoulli().base;
        // Positive-measure base cells only; every joined cell over them has
        // positive product measure.
        std::vector<std::size_t> support;
        for (std::size_t i = 0; i < base.size(); ++i)
            if (base[i] > 0.0) support.push_back(i);
        check_pow_cap(support.size(), f.size(), limits.max_cells, "join_partition");

        std::size_t cells = 1;
        for (std::size_t i = 0; i < f.size(); ++i) cells *= support.size();
        std::vector<std::string> labels;
        std::vector<double> probs;
        labels.reserve(cells);
        probs.reserve(cells);
        std::vector<std::size_t> digits(f.size(), 0);
        for (std::size_t idx = 0; idx < cells; ++idx) {
            double p = 1.0;
            std::string label;
            for (std::size_t pos = 0; pos < f.size(); ++pos) {
                std::size_t cell = support[digits[pos]];
                p *= base[cell];
                if (pos) label += '|';
                label += alpha.labels[cell];
            }
            labels.push_back(std::move(label));
            probs.push_back(p);
            for (std::size_t pos = f.size(); pos-- > 0;) {
                if (++digits[pos] < support.size()) break;
                digits[pos] = 0;
            }
        }
        return Partition(std::move(labels), Distribution(std::move(probs)),
                         FiniteSubset::of(m.spec(), std::move(coords)));
    }

    // Explicit table: every translated coordinate must be declared.
    const ExplicitCylinderMeasure& table = m.as_explicit();
    std::vector<std::size_t> coord_pos; // position of each translated coordinate in the domain
    for (const GroupElement& c : coords) {
        auto idx = table.domain.index_of(c);
        if (!idx)
            throw UnsupportedMeasureError("join_partition: coordinate " + c.to_string() +
                                          " is outside the declared table domain " +
                                          table.domain.to_string());
        coord_pos.push_back(*idx);
    }
    std::size_t k = table.num_letters;
    check_pow_cap(k, f.size(), limits.max_cells, "join_partition");
    std::size_t cells = 1;
    for (std::size_t i = 0; i < f.size(); ++i) cells *= k;
    std::vector<double> probs(cells, 0.0);
    std::size_t d = table.domain.size();
    std::vector<std::size_t> digits(d, 0);
    for (std::size_t idx = 0; idx < table.probs.size(); ++idx) {
        std::size_t key = 0;
        for (std::size_t pos : coord_pos) key = key * k + digits[pos];
        probs[key] += table.probs[idx];
        for (std::size_t pos = d; pos-- > 0;) {
            if (++digits[pos] < k) break;
            digits[pos] = 0;
        }
    }
    // Drop zero-measure cells.
    std::vector<std::string> labels;
    std::vector<double> kept;
    std::vector<std::size_t> cell_digits(f.size(), 0);
    for (std::size_t idx = 0; idx < cells; ++idx) {
        if (probs[idx] > 0.0) {
            std::string label;
            for (std::size_t pos = 0; pos < f.size(); ++pos) {
                if (pos) label += '|';
                label += alpha.labels[cell_digits[pos]];
            }
            labels.push_back(std::move(label));
            kept.push_back(probs[idx]);
        }
        for (std::size_t pos = f.size(); pos-- > 0;) {
            if (++cell_digits[pos] < k) break;
            cell_digits[pos] = 0;
        }
    }
    return Partition(std::move(labels), Distribution(std::move(kept)),
                     FiniteSubset::of(m.spec(), std::move(coords)));
}

EstimateReport naive_measure_entropy_estimate(const ShiftMeasure& m, const Partition& alpha,
                                              const Schedule& schedule, const Limits& limits) {
    if (schedule.empty()) throw ArgumentError("naive_measure_entropy_estimate: empty schedule");
    EstimateReport report;
    std::vector<double> values(schedule.size(), 0.0);
    const auto& entries = schedule.entries();
    parallel_for(entries.size(), limits.threads, [&](std::size_t i) {
        const auto& entry = entries[i];
        if (entry.set.is_empty())
            throw ArgumentError("naive_measure_entropy_estimate: empty F in schedule");
        Partition joined = join_partition(m, alpha, entry.set, limits);
        values[i] = shannon_entropy(joined.cell_measure) / static_cast<double>(entry.set.size());
    });
    double running = values.empty() ? 0.0 : values.front();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        running = std::min(running, values[i]);
        report.rows.push_back(EstimateRow{entries[i].label, entries[i].set.size(), values[i],
                                          running, BoundKind::Exact});
    }
    report.final_value = running;
    report.final_kind = BoundKind::Upper;
    report.notes.push_back(
        "upper bound on the partition's dynamical entropy: the true value is an "
        "infimum over all nonempty finite subsets, of which this schedule covers "
        "finitely many");
    return report;
}

AmplificationReport amplified_entropy_check(const ShiftMeasure& m, const Partition& alpha,
                                            const FiniteSubset& w, const Schedule& schedule,
                                            const Limits& limits) {
    if (!m.is_bernoulli())
        throw UnsupportedMeasureError("amplified_entropy_check requires a Bernoulli measure");
    if (schedule.empty()) throw ArgumentError("amplified_entropy_check: empty schedule");
    double h_base = shannon_entropy(m.as_bernoulli().base);
    AmplificationReport report;
    for (const auto& entry : schedule.entries()) {
        if (entry.set.is_empty())
            throw ArgumentError("amplified_entropy_check: empty F in schedule");
        FiniteSubset wf = product_set(w, entry.set);
        Rational ratio = expansion_ratio(w, entry.set);
        AmplificationRow row;
        row.label = entry.label;
        row.f_size = entry.set.size();
        row.wf_size = wf.size();
        row.ratio = ratio;
        row.analytic_value = ratio.to_double() * h_base;
        // Cross-check by enumerating the join when it fits under the cap.
        std::size_t support = 0;
        for (double p : m.as_bernoulli().base.probs())
            if (p > 0.0) ++support;
        bool enumerable = true;
        std::size_t total = 1;
        for (std::size_t i = 0; i < wf.size() && enumerable; ++i) {
            if (support != 0 && total > limits.max_cells / support) enumerable = false;
            total *= support;
        }
        if (enumerable) {
            Partition joined = join_partition(m, alpha, wf, limits);
            double direct =
                shannon_entropy(joined.cell_measure) / static_cast<double>(entry.set.size());
            row.enumerated_value = direct;
            row.agrees = std::abs(direct - row.analytic_value) <= report.tolerance;
        }
        report.rows.push_back(std::move(row));
    }
    report.notes.push_back("rows without an enumerated value exceeded the cell cap; their "
                           "analytic value relies on the Bernoulli product identity");
    return report;
}

ProductSystemReport product_system_entropy(const ShiftMeasure& m1, const Partition& alpha1,
                                           const ShiftMeasure& m2, const Partition& alpha2,
                                           const Schedule& schedule, const Limits& limits) {
    if (!m1.is_bernoulli() || !m2.is_bernoulli())
        throw UnsupportedMeasureError("product_system_entropy requires Bernoulli measures");
    if (!(m1.spec() == m2.spec()))
        throw ArgumentError("product_system_entropy: factors live over different groups");

    // Product system: Bernoulli with the outer-product base over letter pairs.
    const Distribution& b1 = m1.as_bernoulli().base;
    const Distribution& b2 = m2.as_bernoulli().base;
    std::vector<double> prod_probs;
    std::vector<std::string> prod_labels;
    prod_probs.reserve(b1.size() * b2.size());
    for (std::size_t i = 0; i < b1.size(); ++i)
        for (std::size_t j = 0; j < b2.size(); ++j) {
            prod_probs.push_back(b1[i] * b2[j]);
            prod_labels.push_back(alpha1.labels[i] + "*" + alpha2.labels[j]);
        }
    ShiftMeasure prod = ShiftMeasure::bernoulli(m1.spec(), Distribution(prod_probs));
    Partition prod_alpha =
        Partition::letters(m1.spec(), std::move(prod_labels), Distribution(prod_probs));

    ProductSystemReport report;
    for (const auto& entry : schedule.entries()) {
        if (entry.set.is_empty())
            throw ArgumentError("product_system_entropy: empty F in schedule");
        double n = static_cast<double>(entry.set.size());
        Partition j1 = join_partition(m1, alpha1, entry.set, limits);
        Partition j2 = join_partition(m2, alpha2, entry.set, limits);
        Partition jp = join_partition(prod, prod_alpha, entry.set, limits);
        ProductSystemRow row;
        row.label = entry.label;
        row.f_size = entry.set.size();
        row.product_value = shannon_entropy(jp.cell_measure) / n;
        row.sum_of_parts =
            shannon_entropy(j1.cell_measure) / n + shannon_entropy(j2.cell_measure) / n;
        row.agrees = std::abs(row.product_value - row.sum_of_parts) <= report.tolerance;
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace entrolab
