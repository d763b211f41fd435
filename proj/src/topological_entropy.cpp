#include "entrolab/topological_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "entrolab/detail/admissibility.hpp"
#include "entrolab/rng.hpp"

namespace entrolab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::uint64_t checked_pow_u64(std::uint64_t base, std::uint64_t exp, const char* what) {
    std::uint64_t out = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base)
            throw ResourceError(std::string(what) + ": count overflows 64 bits");
        out *= base;
    }
    return out;
}

void check_enumeration_cap(std::size_t base, std::size_t count, const Limits& limits,
                           const char* what) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < count; ++i) {
        if (base != 0 && total > limits.max_enumeration / base)
            throw ResourceError(std::string(what) + ": enumeration of " + std::to_string(base) +
                                "^" + std::to_string(count) + " labelings exceeds cap (" +
                                std::to_string(limits.max_enumeration) + ")");
        total *= base;
    }
}

// Depth-first walk over all admissible labelings of the constraint domain,
// pruning as soon as a forbidden translate is fully matched.
template <typename Visit>
void enumerate_admissible(const detail::AdmissibilityConstraints& cons, std::size_t num_letters,
                          Visit&& visit) {
    std::size_t n = cons.domain_size();
    std::vector<int> labels(n, 0);
    // Iterative DFS; depth = next position to assign.
    std::size_t depth = 0;
    std::vector<int> choice(n, -1);
    if (n == 0) return;
    for (;;) {
        if (++choice[depth] >= static_cast<int>(num_letters)) {
            choice[depth] = -1;
            if (depth == 0) return;
            --depth;
            continue;
        }
        labels[depth] = choice[depth];
        bool dead = false;
        for (const auto* c : cons.ending_at(depth)) {
            bool match = true;
            for (std::size_t i = 0; i < c->positions.size(); ++i) {
                if (labels[c->positions[i]] != c->labels[i]) {
                    match = false;
                    break;
                }
            }
            if (match) {
                dead = true;
                break;
            }
        }
        if (dead) continue;
        if (depth + 1 == n) {
            visit(labels);
        } else {
            ++depth;
        }
    }
}

// Transfer-matrix count of L-vertex walks in the essential subgraph of the
// one-step transition graph; exact for interval patterns over Z.
std::uint64_t one_step_interval_count(const Subshift& s, std::size_t len) {
    std::size_t k = s.num_letters();
    std::vector<std::vector<bool>> allowed(k, std::vector<bool>(k, true));
    std::vector<bool> alive(k, true);
    for (const Pattern& p : s.forbidden) {
        if (p.shape.size() == 1) {
            alive[static_cast<std::size_t>(p.labels[0])] = false;
        } else {
            // shape {t, t+1} in canonical order; which index is the left
            // coordinate depends on sign, so compare coordinates.
            std::int64_t c0 = p.shape[0].coords()[0];
            std::int64_t c1 = p.shape[1].coords()[0];
            int left = c0 < c1 ? p.labels[0] : p.labels[1];
            int right = c0 < c1 ? p.labels[1] : p.labels[0];
            allowed[static_cast<std::size_t>(left)][static_cast<std::size_t>(right)] = false;
        }
    }
    // Essentialize: keep only states on bi-infinite walks.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < k; ++i) {
            if (!alive[i]) continue;
            bool has_out = false, has_in = false;
            for (std::size_t j = 0; j < k; ++j) {
                if (alive[j] && allowed[i][j]) has_out = true;
                if (alive[j] && allowed[j][i]) has_in = true;
            }
            if (!has_out || !has_in) {
                alive[i] = false;
                changed = true;
            }
        }
    }
    std::vector<std::uint64_t> v(k, 0);
    for (std::size_t i = 0; i < k; ++i) v[i] = alive[i] ? 1 : 0;
    for (std::size_t step = 1; step < len; ++step) {
        std::vector<std::uint64_t> next(k, 0);
        for (std::size_t j = 0; j < k; ++j) {
            if (!alive[j]) continue;
            unsigned __int128 acc = 0;
            for (std::size_t i = 0; i < k; ++i)
                if (alive[i] && allowed[i][j]) acc += v[i];
            if (acc > std::numeric_limits<std::uint64_t>::max())
                throw ResourceError("one-step transfer count overflows 64 bits");
            next[j] = static_cast<std::uint64_t>(acc);
        }
        v = std::move(next);
    }
    unsigned __int128 total = 0;
    for (std::size_t i = 0; i < k; ++i) total += v[i];
    if (total > std::numeric_limits<std::uint64_t>::max())
        throw ResourceError("one-step transfer count overflows 64 bits");
    return static_cast<std::uint64_t>(total);
}

bool is_contiguous_interval(const FiniteSubset& f) {
    if (f.spec().kind != GroupKind::Lattice || f.spec().rank != 1) return false;
    // Canonical order is not numeric order, so sort coordinates first.
    std::vector<std::int64_t> coords;
    coords.reserve(f.size());
    for (const GroupElement& g : f.elements()) coords.push_back(g.coords()[0]);
    std::sort(coords.begin(), coords.end());
    for (std::size_t i = 1; i < coords.size(); ++i)
        if (coords[i] != coords[i - 1] + 1) return false;
    return true;
}

struct LogCount {
    double log_value = 0.0;
    BoundKind kind = BoundKind::Exact;
    std::optional<std::uint64_t> count;
};

LogCount log_admissible_count(const Subshift& s, const FiniteSubset& f, const Limits& limits) {
    if (f.is_empty()) throw ArgumentError("admissible_pattern_count: F must be nonempty");
    if (!(f.spec() == s.group))
        throw ArgumentError("admissible_pattern_count: F is over a different group");
    LogCount out;
    if (s.is_full_shift()) {
        out.kind = BoundKind::Exact;
        out.log_value = static_cast<double>(f.size()) *
                        std::log(static_cast<double>(s.num_letters()));
        double bits = static_cast<double>(f.size()) *
                      std::log2(static_cast<double>(s.num_letters()));
        if (bits < 63.5)
            out.count = checked_pow_u64(s.num_letters(), f.size(), "admissible_pattern_count");
        return out;
    }
    if (s.is_one_step_over_z() && is_contiguous_interval(f)) {
        std::uint64_t c = one_step_interval_count(s, f.size());
        out.kind = BoundKind::Exact;
        out.count = c;
        out.log_value = c == 0 ? kNegInf : std::log(static_cast<double>(c));
        return out;
    }
    check_enumeration_cap(s.num_letters(), f.size(), limits, "admissible_pattern_count");
    detail::AdmissibilityConstraints cons(s, f);
    std::uint64_t c = 0;
    enumerate_admissible(cons, s.num_letters(), [&](const std::vector<int>&) { ++c; });
    out.kind = BoundKind::Upper; // local admissibility over-counts for general SFTs
    out.count = c;
    out.log_value = c == 0 ? kNegInf : std::log(static_cast<double>(c));
    return out;
}

} // namespace

namespace detail {

AdmissibilityConstraints::AdmissibilityConstraints(const Subshift& s, const FiniteSubset& domain)
    : domain_size_(domain.size()), by_last_(domain.size()) {
    for (const Pattern& p : s.forbidden) {
        const GroupElement& s0 = p.shape[0];
        GroupElement s0_inv = s0.inverse();
        for (const GroupElement& f : domain.elements()) {
            GroupElement gamma = multiply(f, s0_inv);
            TranslateConstraint c;
            bool inside = true;
            for (std::size_t i = 0; i < p.shape.size(); ++i) {
                auto idx = domain.index_of(multiply(gamma, p.shape[i]));
                if (!idx) {
                    inside = false;
                    break;
                }
                c.positions.push_back(*idx);
                c.labels.push_back(p.labels[i]);
            }
            if (!inside) continue;
            c.last_position = *std::max_element(c.positions.begin(), c.positions.end());
            constraints_.push_back(std::move(c));
        }
    }
    for (const TranslateConstraint& c : constraints_) by_last_[c.last_position].push_back(&c);
}

bool AdmissibilityConstraints::admissible(const std::vector<int>& labels) const {
    for (const TranslateConstraint& c : constraints_) {
        bool match = true;
        for (std::size_t i = 0; i < c.positions.size(); ++i) {
            if (labels[c.positions[i]] != c.labels[i]) {
                match = false;
                break;
            }
        }
        if (match) return false;
    }
    return true;
}

} // namespace detail

Pattern::Pattern(FiniteSubset shape_, std::vector<int> labels_)
    : shape(std::move(shape_)), labels(std::move(labels_)) {
    if (shape.is_empty()) throw ArgumentError("Pattern: empty shape");
    if (labels.size() != shape.size())
        throw ArgumentError("Pattern: labels must cover the shape exactly");
}

Subshift::Subshift(GroupSpec group_, std::vector<std::string> alphabet_,
                   std::vector<Pattern> forbidden_)
    : group(group_), alphabet(std::move(alphabet_)), forbidden(std::move(forbidden_)) {
    if (alphabet.empty()) throw ArgumentError("Subshift: empty alphabet");
    std::vector<std::string> sorted(alphabet);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ArgumentError("Subshift: duplicate letters");
    for (const Pattern& p : forbidden) {
        if (!(p.shape.spec() == group))
            throw ArgumentError("Subshift: forbidden shape over a different group");
        for (int l : p.labels)
            if (l < 0 || l >= static_cast<int>(alphabet.size()))
                throw ArgumentError("Subshift: forbidden label out of range");
    }
}

bool Subshift::is_one_step_over_z() const {
    if (group.kind != GroupKind::Lattice || group.rank != 1) return false;
    for (const Pattern& p : forbidden) {
        if (p.shape.size() == 1) continue;
        if (p.shape.size() != 2) return false;
        std::int64_t a = p.shape[0].coords()[0];
        std::int64_t b = p.shape[1].coords()[0];
        if (std::abs(a - b) != 1) return false;
    }
    return true;
}

PatternCount admissible_pattern_count(const Subshift& s, const FiniteSubset& f,
                                      const Limits& limits) {
    LogCount lc = log_admissible_count(s, f, limits);
    if (!lc.count)
        throw ResourceError("admissible_pattern_count: count overflows 64 bits");
    return PatternCount{*lc.count, lc.kind};
}

std::uint64_t projected_pattern_count(const Subshift& s, const FiniteSubset& f,
                                      const std::vector<int>& letter_classes,
                                      const Limits& limits) {
    if (f.is_empty()) throw ArgumentError("projected_pattern_count: F must be nonempty");
    if (letter_classes.size() != s.num_letters())
        throw ArgumentError("projected_pattern_count: one class per letter required");
    check_enumeration_cap(s.num_letters(), f.size(), limits, "projected_pattern_count");
    detail::AdmissibilityConstraints cons(s, f);
    std::unordered_set<std::uint64_t> projections;
    std::vector<int> projected(f.size());
    enumerate_admissible(cons, s.num_letters(), [&](const std::vector<int>& labels) {
        std::uint64_t h = 14695981039346656037ull;
        for (std::size_t i = 0; i < labels.size(); ++i)
            h = hash_combine(h, static_cast<std::uint64_t>(
                                    letter_classes[static_cast<std::size_t>(labels[i])]));
        projections.insert(h);
    });
    return projections.size();
}

EstimateReport naive_topological_entropy_estimate(const Subshift& s, const Schedule& schedule,
                                                  const Limits& limits) {
    if (schedule.empty())
        throw ArgumentError("naive_topological_entropy_estimate: empty schedule");
    EstimateReport report;
    const auto& entries = schedule.entries();
    std::vector<LogCount> counts(entries.size());
    parallel_for(entries.size(), limits.threads, [&](std::size_t i) {
        counts[i] = log_admissible_count(s, entries[i].set, limits);
    });
    double running = std::numeric_limits<double>::infinity();
    bool any_upper = false;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        double value = counts[i].log_value / static_cast<double>(entries[i].set.size());
        running = std::min(running, value);
        if (counts[i].kind == BoundKind::Upper) any_upper = true;
        report.rows.push_back(
            EstimateRow{entries[i].label, entries[i].set.size(), value, running, counts[i].kind});
    }
    report.final_value = running;
    report.final_kind = BoundKind::Upper;
    report.notes.push_back("upper bound on the letter-cover entropy: the true value is an "
                           "infimum over all nonempty finite subsets");
    if (any_upper)
        report.notes.push_back("rows marked 'upper' use locally admissible counts, which may "
                               "exceed the number of globally extendable patterns");
    return report;
}

SymbolicPoint::SymbolicPoint(const Subshift& s, int radius, std::vector<int> labels,
                             const Limits& limits)
    : spec_(s.group), radius_(radius), domain_(ball(s.group, radius, limits)),
      labels_(std::move(labels)) {
    if (labels_.size() != domain_.size())
        throw ArgumentError("SymbolicPoint: expected " + std::to_string(domain_.size()) +
                            " labels for radius " + std::to_string(radius));
    for (int l : labels_)
        if (l < 0 || l >= static_cast<int>(s.num_letters()))
            throw ArgumentError("SymbolicPoint: label out of range");
    detail::AdmissibilityConstraints cons(s, domain_);
    if (!cons.admissible(labels_))
        throw ArgumentError("SymbolicPoint: labels contain a forbidden pattern");
}

SymbolicPoint SymbolicPoint::unchecked(const GroupSpec& spec, int radius, FiniteSubset domain,
                                       std::vector<int> labels) {
    return SymbolicPoint(spec, radius, std::move(domain), std::move(labels));
}

MetricValue point_metric(const SymbolicPoint& x, const SymbolicPoint& y) {
    if (x.radius() != y.radius() || !(x.domain().spec() == y.domain().spec()))
        throw ArgumentError("point_metric: points have different truncations");
    const auto& a = x.labels();
    const auto& b = y.labels();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return MetricValue{std::ldexp(1.0, -static_cast<int>(i)), 0.0};
    int n = static_cast<int>(std::min<std::size_t>(a.size(), 1060));
    return MetricValue{0.0, std::ldexp(1.0, -n)};
}

MetricValue dynamical_pseudometric(const SymbolicPoint& x, const SymbolicPoint& y,
                                   const FiniteSubset& f) {
    if (x.radius() != y.radius() || !(x.domain().spec() == y.domain().spec()))
        throw ArgumentError("dynamical_pseudometric: points have different truncations");
    if (f.is_empty()) throw ArgumentError("dynamical_pseudometric: empty F");
    std::int64_t max_len = f.max_word_length();
    if (max_len > x.radius())
        throw ArgumentError("dynamical_pseudometric: truncation radius " +
                            std::to_string(x.radius()) + " too small, need at least " +
                            std::to_string(max_len));
    const FiniteSubset& dom = x.domain();
    double best_value = 0.0, best_reach = 0.0;
    for (const GroupElement& gamma : f.elements()) {
        std::int64_t window_radius = x.radius() - gamma.word_length();
        GroupElement gamma_inv = gamma.inverse();
        double value = 0.0;
        double uncertainty;
        bool found = false;
        std::size_t i = 0;
        for (; i < dom.size(); ++i) {
            if (dom[i].word_length() > window_radius) break; // window is an order prefix
            std::size_t idx = *dom.index_of(multiply(gamma_inv, dom[i]));
            if (x.label_at(idx) != y.label_at(idx)) {
                value = std::ldexp(1.0, -static_cast<int>(i));
                found = true;
                break;
            }
        }
        uncertainty = found ? 0.0 : std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(i, 1060)));
        best_value = std::max(best_value, value);
        best_reach = std::max(best_reach, value + uncertainty);
    }
    return MetricValue{best_value, best_reach - best_value};
}

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> point_labels,
                                     std::vector<std::vector<double>> dist)
    : labels_(std::move(point_labels)) {
    std::size_t n = labels_.size();
    if (n == 0) throw ArgumentError("FiniteMetricSpace: no points");
    if (dist.size() != n) throw ArgumentError("FiniteMetricSpace: matrix size mismatch");
    dist_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (dist[i].size() != n) throw ArgumentError("FiniteMetricSpace: ragged matrix");
        for (std::size_t j = 0; j < n; ++j) {
            double d = dist[i][j];
            if (!(d >= 0.0)) throw ArgumentError("FiniteMetricSpace: negative or NaN distance");
            dist_[i * n + j] = d;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (dist_[i * n + i] != 0.0)
            throw ArgumentError("FiniteMetricSpace: nonzero diagonal");
        for (std::size_t j = i + 1; j < n; ++j)
            if (dist_[i * n + j] != dist_[j * n + i])
                throw ArgumentError("FiniteMetricSpace: matrix is not symmetric");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (dist_[i * n + j] > dist_[i * n + k] + dist_[k * n + j] + kTriangleTolerance)
                    throw ArgumentError("FiniteMetricSpace: triangle inequality fails");
}

namespace {

// Branch-and-bound maximum independent set over <= 24 vertices given
// adjacency bitmasks; greedy seed, include/exclude branching.
struct MisSolver {
    const std::vector<std::uint32_t>& adj;
    std::size_t n;
    std::uint32_t best_mask = 0;
    int best = 0;

    void run() {
        // Greedy seed in index order.
        std::uint32_t chosen = 0;
        for (std::size_t v = 0; v < n; ++v)
            if ((adj[v] & chosen) == 0) chosen |= (1u << v);
        best = __builtin_popcount(chosen);
        best_mask = chosen;
        branch(0, 0u, static_cast<std::uint32_t>((n == 32 ? ~0u : (1u << n) - 1)));
    }

    void branch(int count, std::uint32_t cur, std::uint32_t candidates) {
        if (count + __builtin_popcount(candidates) <= best) return;
        if (candidates == 0) {
            if (count > best) {
                best = count;
                best_mask = cur;
            }
            return;
        }
        int v = __builtin_ctz(candidates);
        std::uint32_t bit = 1u << v;
        // Include v.
        branch(count + 1, cur | bit, candidates & ~(adj[v] | bit));
        // Exclude v.
        branch(count, cur, candidates & ~bit);
    }
};

std::vector<std::size_t> mask_to_indices(std::uint32_t mask) {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; mask; ++v, mask >>= 1)
        if (mask & 1u) out.push_back(v);
    return out;
}

// Branch-and-bound minimum dominating set with closed cover masks.
struct DomSolver {
    const std::vector<std::uint32_t>& cover;
    std::size_t n;
    std::uint32_t all;
    std::uint32_t best_mask = 0;
    int best = 0;

    void run() {
        // Greedy cover seed.
        std::uint32_t covered = 0, chosen = 0;
        while (covered != all) {
            std::size_t pick = 0;
            int gain = -1;
            for (std::size_t v = 0; v < n; ++v) {
                int g = __builtin_popcount(cover[v] & ~covered);
                if (g > gain) {
                    gain = g;
                    pick = v;
                }
            }
            chosen |= (1u << pick);
            covered |= cover[pick];
        }
        best = __builtin_popcount(chosen);
        best_mask = chosen;
        branch(0, 0u, 0u);
    }

    void branch(int count, std::uint32_t cur, std::uint32_t covered) {
        if (covered == all) {
            if (count < best) {
                best = count;
                best_mask = cur;
            }
            return;
        }
        if (count + 1 >= best) return;
        std::uint32_t uncovered = all & ~covered;
        int target = __builtin_ctz(uncovered);
        // Someone within eps of `target` must be chosen.
        for (std::size_t v = 0; v < n; ++v) {
            if (cover[v] & (1u << target))
                branch(count + 1, cur | (1u << v), covered | cover[v]);
        }
    }
};

} // namespace

ExtremalSetResult separation_number(const FiniteMetricSpace& m, double eps, SolveMode mode) {
    if (!(eps > 0.0)) throw ArgumentError("separation_number: eps must be positive");
    std::size_t n = m.size();
    if (mode == SolveMode::Exact) {
        if (n > kExactSolverPointCap)
            throw ResourceError("separation_number: exact mode capped at " +
                                std::to_string(kExactSolverPointCap) + " points");
        std::vector<std::uint32_t> adj(n, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && m.dist(i, j) < eps) adj[i] |= (1u << j);
        MisSolver solver{adj, n};
        solver.run();
        return ExtremalSetResult{static_cast<std::size_t>(solver.best),
                                 mask_to_indices(solver.best_mask), BoundKind::Exact};
    }
    // Greedy maximal separated set in point order; a lower-bound witness
    // which is also eps-spanning.
    std::vector<std::size_t> witness;
    for (std::size_t i = 0; i < n; ++i) {
        bool ok = true;
        for (std::size_t j : witness)
            if (m.dist(i, j) < eps) {
                ok = false;
                break;
            }
        if (ok) witness.push_back(i);
    }
    return ExtremalSetResult{witness.size(), std::move(witness), BoundKind::Lower};
}

ExtremalSetResult spanning_number(const FiniteMetricSpace& m, double eps, SolveMode mode) {
    if (!(eps > 0.0)) throw ArgumentError("spanning_number: eps must be positive");
    std::size_t n = m.size();
    if (mode == SolveMode::Exact) {
        if (n > kExactSolverPointCap)
            throw ResourceError("spanning_number: exact mode capped at " +
                                std::to_string(kExactSolverPointCap) + " points");
        std::vector<std::uint32_t> cover(n, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (m.dist(i, j) <= eps) cover[i] |= (1u << j);
        DomSolver solver{cover, n, static_cast<std::uint32_t>((n == 32 ? ~0u : (1u << n) - 1))};
        solver.run();
        return ExtremalSetResult{static_cast<std::size_t>(solver.best),
                                 mask_to_indices(solver.best_mask), BoundKind::Exact};
    }
    // Greedy set cover; an upper-bound witness.
    std::vector<bool> covered(n, false);
    std::size_t remaining = n;
    std::vector<std::size_t> witness;
    while (remaining > 0) {
        std::size_t pick = 0;
        std::size_t gain = 0;
        bool any = false;
        for (std::size_t v = 0; v < n; ++v) {
            std::size_t g = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (!covered[j] && m.dist(v, j) <= eps) ++g;
            if (!any || g > gain) {
                any = true;
                gain = g;
                pick = v;
            }
        }
        witness.push_back(pick);
        for (std::size_t j = 0; j < n; ++j)
            if (m.dist(pick, j) <= eps && !covered[j]) {
                covered[j] = true;
                --remaining;
            }
    }
    return ExtremalSetResult{witness.size(), std::move(witness), BoundKind::Upper};
}

SeparationProbeReport entropy_via_separation(const Subshift& s, double eps,
                                             const Schedule& schedule, int radius,
                                             std::size_t sample_budget, std::uint64_t seed,
                                             const Limits& limits) {
    if (!(eps > 0.0)) throw ArgumentError("entropy_via_separation: eps must be positive");
    if (schedule.empty()) throw ArgumentError("entropy_via_separation: empty schedule");
    if (sample_budget == 0) throw ArgumentError("entropy_via_separation: zero sample budget");
    std::int64_t needed = 0;
    for (const auto& e : schedule.entries())
        needed = std::max(needed, e.set.max_word_length());
    if (needed > radius)
        throw ArgumentError("entropy_via_separation: truncation radius " +
                            std::to_string(radius) + " too small, need at least " +
                            std::to_string(needed));

    FiniteSubset domain = ball(s.group, radius, limits);
    detail::AdmissibilityConstraints cons(s, domain);

    // Deterministic point sample: exhaustive when the labeling space fits in
    // the budget, otherwise seeded rejection sampling of distinct admissible
    // labelings (so a larger budget extends the smaller one's sample).
    SeparationProbeReport report;
    report.radius = radius;
    std::vector<SymbolicPoint> points;
    double log_total = static_cast<double>(domain.size()) *
                       std::log2(static_cast<double>(s.num_letters()));
    bool exhaustive = log_total < 62.0 &&
                      checked_pow_u64(s.num_letters(), domain.size(), "entropy_via_separation") <=
                          sample_budget;
    if (exhaustive) {
        enumerate_admissible(cons, s.num_letters(), [&](const std::vector<int>& labels) {
            points.push_back(SymbolicPoint::unchecked(s.group, radius, domain, labels));
        });
        report.exhaustive_sample = true;
    } else {
        SplitRng rng(seed, 0xE5);
        std::unordered_set<std::uint64_t> seen;
        std::size_t attempts = 0;
        std::size_t max_attempts = sample_budget * 64 + 1024;
        std::vector<int> labels(domain.size());
        while (points.size() < sample_budget && attempts < max_attempts) {
            ++attempts;
            for (auto& l : labels)
                l = static_cast<int>(rng.below(s.num_letters()));
            if (!cons.admissible(labels)) continue;
            std::uint64_t h = 14695981039346656037ull;
            for (int l : labels) h = hash_combine(h, static_cast<std::uint64_t>(l));
            if (!seen.insert(h).second) continue;
            points.push_back(SymbolicPoint::unchecked(s.group, radius, domain, labels));
        }
    }
    if (points.size() > limits.max_cells)
        throw ResourceError("entropy_via_separation: sample exceeds max_cells cap");

    for (const auto& entry : schedule.entries()) {
        std::size_t n = points.size();
        SeparationProbeRow row;
        row.label = entry.label;
        row.f_size = entry.set.size();
        row.sample_size = n;
        if (n == 0) {
            row.sep = 0;
            row.value_nats = kNegInf;
            row.sep_kind = BoundKind::Lower;
            report.rows.push_back(std::move(row));
            continue;
        }
        std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
        parallel_for(pairs.size(), limits.threads, [&](std::size_t p) {
            auto [i, j] = pairs[p];
            double d = dynamical_pseudometric(points[i], points[j], entry.set).value;
            dist[i][j] = d;
            dist[j][i] = d;
        });
        std::vector<std::string> labels(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = "p" + std::to_string(i);
        FiniteMetricSpace space(std::move(labels), std::move(dist));
        ExtremalSetResult sep = separation_number(
            space, eps, n <= kExactSolverPointCap ? SolveMode::Exact : SolveMode::Greedy);
        row.sep = sep.value;
        row.sep_kind = sep.kind == BoundKind::Exact ? BoundKind::Exact : BoundKind::Lower;
        row.value_nats =
            sep.value == 0 ? kNegInf
                           : std::log(static_cast<double>(sep.value)) /
                                 static_cast<double>(entry.set.size());
        report.rows.push_back(std::move(row));
    }
    report.cover_estimate = naive_topological_entropy_estimate(s, schedule, limits);
    report.notes.push_back(
        "heuristic probe from sampled truncated points: not a certified bound on the "
        "topological entropy, which takes a sup over eps and an inf over all finite "
        "subsets on the full space");
    report.notes.push_back("pseudometric values are exact to the truncation radius " +
                           std::to_string(radius) + " recorded in this report");
    return report;
}

} // namespace entrolab
