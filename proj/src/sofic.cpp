#include "entrolab/sofic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "entrolab/detail/admissibility.hpp"
#include "entrolab/rng.hpp"

namespace entrolab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate_permutation(const std::vector<std::uint32_t>& p, std::size_t n, const char* what) {
    if (p.size() != n) throw ArgumentError(std::string(what) + ": permutation size mismatch");
    std::vector<bool> seen(n, false);
    for (std::uint32_t v : p) {
        if (v >= n || seen[v])
            throw ArgumentError(std::string(what) + ": table is not a bijection of [n]");
        seen[v] = true;
    }
}

// Memoized word evaluation.
class PermCache {
public:
    explicit PermCache(const SoficMap& sigma) : sigma_(sigma) {}

    const std::vector<std::uint32_t>& get(const GroupElement& g) {
        auto it = cache_.find(g);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(g, sigma_.permutation_of(g)).first->second;
    }

private:
    const SoficMap& sigma_;
    std::map<GroupElement, std::vector<std::uint32_t>> cache_;
};

} // namespace

SoficMap SoficMap::random(const GroupSpec& spec, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw ArgumentError("SoficMap::random: n must be >= 1");
    SoficMap m(spec, n);
    SplitRng root(seed);
    for (int i = 0; i < spec.rank; ++i) {
        SplitRng stream = root.child(static_cast<std::uint64_t>(i));
        m.gen_perms_.push_back(stream.permutation(n));
    }
    for (const auto& p : m.gen_perms_) {
        std::vector<std::uint32_t> inv(n);
        for (std::size_t v = 0; v < n; ++v) inv[p[v]] = static_cast<std::uint32_t>(v);
        m.gen_inv_perms_.push_back(std::move(inv));
    }
    return m;
}

SoficMap SoficMap::cyclic(std::size_t n) {
    if (n < 1) throw ArgumentError("SoficMap::cyclic: n must be >= 1");
    GroupSpec spec = GroupSpec::lattice(1);
    SoficMap m(spec, n);
    std::vector<std::uint32_t> rot(n), inv(n);
    for (std::size_t v = 0; v < n; ++v) {
        rot[v] = static_cast<std::uint32_t>((v + 1) % n);
        inv[v] = static_cast<std::uint32_t>((v + n - 1) % n);
    }
    m.gen_perms_.push_back(std::move(rot));
    m.gen_inv_perms_.push_back(std::move(inv));
    return m;
}

SoficMap SoficMap::explicit_map(const GroupSpec& spec, std::size_t n,
                                std::vector<std::vector<std::uint32_t>> generator_perms,
                                std::map<GroupElement, std::vector<std::uint32_t>> overrides) {
    if (n < 1) throw ArgumentError("SoficMap::explicit_map: n must be >= 1");
    if (generator_perms.size() != static_cast<std::size_t>(spec.rank))
        throw ArgumentError("SoficMap::explicit_map: one permutation per generator required");
    SoficMap m(spec, n);
    for (const auto& p : generator_perms) validate_permutation(p, n, "SoficMap::explicit_map");
    m.gen_perms_ = std::move(generator_perms);
    for (const auto& p : m.gen_perms_) {
        std::vector<std::uint32_t> inv(n);
        for (std::size_t v = 0; v < n; ++v) inv[p[v]] = static_cast<std::uint32_t>(v);
        m.gen_inv_perms_.push_back(std::move(inv));
    }
    for (auto& [g, p] : overrides) {
        if (!(g.spec() == spec))
            throw ArgumentError("SoficMap::explicit_map: override element over wrong group");
        validate_permutation(p, n, "SoficMap::explicit_map override");
        if (g.is_identity()) {
            for (std::size_t v = 0; v < n; ++v)
                if (p[v] != v)
                    throw ArgumentError("SoficMap::explicit_map: identity must map to the "
                                        "identity permutation");
        }
    }
    m.overrides_ = std::move(overrides);
    return m;
}

std::uint32_t SoficMap::apply(const GroupElement& g, std::uint32_t m) const {
    auto it = overrides_.find(g);
    if (it != overrides_.end()) return it->second[m];
    std::uint32_t x = m;
    if (spec_.kind == GroupKind::Free) {
        const auto& runs = g.word();
        for (auto r = runs.rbegin(); r != runs.rend(); ++r) {
            const auto& perm =
                r->exp > 0 ? gen_perms_[static_cast<std::size_t>(r->gen)]
                           : gen_inv_perms_[static_cast<std::size_t>(r->gen)];
            std::int64_t reps = r->exp > 0 ? r->exp : -r->exp;
            for (std::int64_t i = 0; i < reps; ++i) x = perm[x];
        }
    } else {
        const auto& coords = g.coords();
        for (std::size_t dim = coords.size(); dim-- > 0;) {
            std::int64_t v = coords[dim];
            if (v == 0) continue;
            const auto& perm = v > 0 ? gen_perms_[dim] : gen_inv_perms_[dim];
            std::int64_t reps = v > 0 ? v : -v;
            for (std::int64_t i = 0; i < reps; ++i) x = perm[x];
        }
    }
    return x;
}

std::vector<std::uint32_t> SoficMap::permutation_of(const GroupElement& g) const {
    auto it = overrides_.find(g);
    if (it != overrides_.end()) return it->second;
    std::vector<std::uint32_t> out(n_);
    for (std::size_t m = 0; m < n_; ++m) out[m] = static_cast<std::uint32_t>(m);
    auto apply_perm = [&](const std::vector<std::uint32_t>& p, std::int64_t reps) {
        for (std::int64_t i = 0; i < reps; ++i)
            for (std::size_t m = 0; m < n_; ++m) out[m] = p[out[m]];
    };
    if (spec_.kind == GroupKind::Free) {
        const auto& runs = g.word();
        for (auto r = runs.rbegin(); r != runs.rend(); ++r)
            apply_perm(r->exp > 0 ? gen_perms_[static_cast<std::size_t>(r->gen)]
                                  : gen_inv_perms_[static_cast<std::size_t>(r->gen)],
                       r->exp > 0 ? r->exp : -r->exp);
    } else {
        const auto& coords = g.coords();
        for (std::size_t dim = coords.size(); dim-- > 0;) {
            std::int64_t v = coords[dim];
            if (v != 0) apply_perm(v > 0 ? gen_perms_[dim] : gen_inv_perms_[dim], v > 0 ? v : -v);
        }
    }
    return out;
}

std::vector<bool> consistent_set(const SoficMap& sigma, const FiniteSubset& s) {
    if (!(sigma.spec() == s.spec()))
        throw ArgumentError("consistent_set: test set over a different group");
    std::size_t n = sigma.size();
    std::vector<bool> mask(n, true);
    PermCache cache(sigma);
    const auto& elems = s.elements();
    for (const GroupElement& g1 : elems) {
        for (const GroupElement& g2 : elems) {
            const auto& p1 = cache.get(g1);
            const auto& p2 = cache.get(g2);
            const auto& prod = cache.get(multiply(g1, g2));
            for (std::size_t m = 0; m < n; ++m)
                if (prod[m] != p1[p2[m]]) mask[m] = false;
        }
    }
    for (std::size_t i = 0; i < elems.size(); ++i) {
        for (std::size_t j = i + 1; j < elems.size(); ++j) {
            const auto& p1 = cache.get(elems[i]);
            const auto& p2 = cache.get(elems[j]);
            for (std::size_t m = 0; m < n; ++m)
                if (p1[m] == p2[m]) mask[m] = false;
        }
    }
    return mask;
}

QualityReport quality(const SoficMap& sigma, const FiniteSubset& s) {
    if (!(sigma.spec() == s.spec()))
        throw ArgumentError("quality: test set over a different group");
    std::size_t n = sigma.size();
    QualityReport report;
    PermCache cache(sigma);
    const auto& elems = s.elements();
    for (const GroupElement& g1 : elems) {
        for (const GroupElement& g2 : elems) {
            const auto& p1 = cache.get(g1);
            const auto& p2 = cache.get(g2);
            const auto& prod = cache.get(multiply(g1, g2));
            std::size_t good = 0;
            for (std::size_t m = 0; m < n; ++m)
                if (prod[m] == p1[p2[m]]) ++good;
            double frac = static_cast<double>(good) / static_cast<double>(n);
            report.multiplicativity.push_back(PairFraction{g1, g2, frac});
            report.min_multiplicativity = std::min(report.min_multiplicativity, frac);
        }
    }
    for (std::size_t i = 0; i < elems.size(); ++i) {
        for (std::size_t j = i + 1; j < elems.size(); ++j) {
            const auto& p1 = cache.get(elems[i]);
            const auto& p2 = cache.get(elems[j]);
            std::size_t moved = 0;
            for (std::size_t m = 0; m < n; ++m)
                if (p1[m] != p2[m]) ++moved;
            double frac = static_cast<double>(moved) / static_cast<double>(n);
            report.freeness.push_back(PairFraction{elems[i], elems[j], frac});
            report.min_freeness = std::min(report.min_freeness, frac);
        }
    }
    std::vector<bool> q = consistent_set(sigma, symmetrize(s));
    std::size_t count = 0;
    for (bool b : q)
        if (b) ++count;
    report.consistent_fraction = static_cast<double>(count) / static_cast<double>(n);
    return report;
}

std::size_t SoficGraph::count(const std::vector<bool>& mask) const {
    std::size_t c = 0;
    for (bool b : mask)
        if (b) ++c;
    return c;
}

SoficGraph build_sofic_graph(const SoficMap& sigma, const FiniteSubset& f,
                             const FiniteSubset& s_test, const std::vector<bool>* extra_good_mask) {
    if (!(sigma.spec() == f.spec()))
        throw ArgumentError("build_sofic_graph: F over a different group");
    if (f.is_empty()) throw ArgumentError("build_sofic_graph: empty F");
    std::size_t n = sigma.size();
    if (extra_good_mask && extra_good_mask->size() != n)
        throw ArgumentError("build_sofic_graph: mask size mismatch");

    SoficGraph g;
    g.n = n;
    FiniteSubset f_sym = symmetrize(f);
    // Edges m ~ gamma^sigma m for gamma in the symmetrization, closed under
    // reversal so the graph is symmetric even for non-homomorphic maps.
    std::vector<std::unordered_set<std::uint32_t>> nbrs(n);
    for (const GroupElement& gamma : f_sym.elements()) {
        std::vector<std::uint32_t> p = sigma.permutation_of(gamma);
        for (std::size_t m = 0; m < n; ++m) {
            std::uint32_t im = p[m];
            if (im == m) continue;
            nbrs[m].insert(im);
            nbrs[im].insert(static_cast<std::uint32_t>(m));
        }
    }
    g.adjacency.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
        g.adjacency[m].assign(nbrs[m].begin(), nbrs[m].end());
        std::sort(g.adjacency[m].begin(), g.adjacency[m].end());
    }

    g.consistent = consistent_set(sigma, symmetrize(s_test));
    g.good = g.consistent;
    if (extra_good_mask)
        for (std::size_t m = 0; m < n; ++m)
            g.good[m] = g.good[m] && (*extra_good_mask)[m];

    auto closed_neighborhood_inside = [&](const std::vector<bool>& mask) {
        std::vector<bool> out(n, false);
        for (std::size_t m = 0; m < n; ++m) {
            if (!mask[m]) continue;
            bool ok = true;
            for (std::uint32_t v : g.adjacency[m])
                if (!mask[v]) {
                    ok = false;
                    break;
                }
            out[m] = ok;
        }
        return out;
    };
    g.interior = closed_neighborhood_inside(g.good);
    g.deep_interior = closed_neighborhood_inside(g.interior);

    // Union bound: a bad point can only evict itself, its images and its
    // preimages under the symmetrized set, one per element and direction.
    g.neighborhood_factor = 2 * f_sym.size() + 1;
    std::size_t bad_good = n - g.count(g.good);
    std::size_t bad_interior = n - g.count(g.interior);
    std::size_t bad_deep = n - g.count(g.deep_interior);
    if (bad_interior > g.neighborhood_factor * bad_good ||
        bad_deep > g.neighborhood_factor * bad_interior)
        throw std::logic_error("build_sofic_graph: interior counting bound violated");

    g.f_elements = f.elements();
    for (const GroupElement& gamma : g.f_elements) g.f_perms.push_back(sigma.permutation_of(gamma));
    return g;
}

Decomposition decompose(const SoficGraph& g, long block_divisor) {
    if (block_divisor < 1) throw ArgumentError("decompose: block divisor must be >= 1");
    const long k = block_divisor;
    const std::size_t f_size = g.f_elements.size();
    Decomposition d;
    std::vector<bool> in_w(g.n, false);

    // Ascending single pass is greedy-maximal: availability only shrinks as
    // blocks are placed, so a center that ever falls below |F|/k stays below.
    for (std::uint32_t c = 0; c < g.n; ++c) {
        if (!g.interior[c]) continue;
        std::vector<std::size_t> avail;
        for (std::size_t i = 0; i < f_size; ++i)
            if (!in_w[g.f_perms[i][c]]) avail.push_back(i);
        if (k * static_cast<long>(avail.size()) < static_cast<long>(f_size)) continue;
        DecompositionBlock block;
        block.center = c;
        for (std::size_t i : avail) {
            std::uint32_t im = g.f_perms[i][c];
            block.f_part.push_back(g.f_elements[i]);
            block.points.push_back(im);
            if (in_w[im]) d.blocks_disjoint = false;
            in_w[im] = true;
        }
        // Injectivity of gamma -> gamma^sigma c on F holds on the consistent
        // set; duplicated points inside a block would break disjointness.
        std::vector<std::uint32_t> sorted(block.points);
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            d.blocks_disjoint = false;
        if (k * static_cast<long>(block.f_part.size()) < static_cast<long>(f_size))
            d.block_sizes_ok = false;
        d.blocks.push_back(std::move(block));
    }

    for (std::uint32_t m = 0; m < g.n; ++m) {
        if (in_w[m])
            ++d.covered;
        else
            d.leftover.push_back(m);
    }

    // Maximality: no interior center retains |F|/k unused images.
    for (std::uint32_t c = 0; c < g.n && d.greedy_maximal; ++c) {
        if (!g.interior[c]) continue;
        std::size_t avail = 0;
        for (std::size_t i = 0; i < f_size; ++i)
            if (!in_w[g.f_perms[i][c]]) ++avail;
        if (k * static_cast<long>(avail) >= static_cast<long>(f_size)) d.greedy_maximal = false;
    }

    // Counting argument: |deep_interior - W| <= |interior| / k.
    std::size_t deep_uncovered = 0, interior_count = 0;
    for (std::uint32_t m = 0; m < g.n; ++m) {
        if (g.deep_interior[m] && !in_w[m]) ++deep_uncovered;
        if (g.interior[m]) ++interior_count;
    }
    d.interior_count_ok = k * static_cast<long>(deep_uncovered) <=
                          static_cast<long>(interior_count);
    return d;
}

double binary_entropy(double x) {
    if (!(x >= 0.0) || x > 1.0)
        throw ArgumentError("binary_entropy: argument must lie in [0, 1]");
    double a = x > 0.0 ? x * std::log(x) : 0.0;
    double b = x < 1.0 ? (1.0 - x) * std::log(1.0 - x) : 0.0;
    double h = -(a + b);
    return h < 0.0 ? 0.0 : h;
}

CertificationResult certification_parameters(double rate, double epsilon, std::size_t sep_half,
                                             const std::vector<WindowSeparation>& schedule) {
    if (!(rate > 0.0 && rate < 1.0))
        throw ArgumentError("certification_parameters: rate must lie in (0, 1)");
    if (!(epsilon > 0.0)) throw ArgumentError("certification_parameters: epsilon must be positive");
    if (sep_half < 2)
        throw ArgumentError("certification_parameters: sep at scale eps/2 must be >= 2 so its "
                            "logarithm is positive");
    if (schedule.empty()) throw ArgumentError("certification_parameters: empty window schedule");
    for (const auto& w : schedule) {
        if (w.window.is_empty())
            throw ArgumentError("certification_parameters: empty window in schedule");
        if (w.sep_quarter < 1)
            throw ArgumentError("certification_parameters: separation numbers must be >= 1");
    }

    double eta = rate / (4.0 * std::log(static_cast<double>(sep_half)));
    long k = static_cast<long>(std::ceil(2.0 / eta));
    while (1.0 / static_cast<double>(k) > eta / 2.0) ++k;

    double threshold = rate / (4.0 * static_cast<double>(k));
    const WindowSeparation* chosen = nullptr;
    double best_seen = std::numeric_limits<double>::infinity();
    std::string best_label;
    for (const auto& w : schedule) {
        double v = std::log(static_cast<double>(w.sep_quarter)) /
                   static_cast<double>(w.window.size());
        if (v < best_seen) {
            best_seen = v;
            best_label = w.label;
        }
        if (v <= threshold) {
            chosen = &w;
            break;
        }
    }
    if (!chosen) {
        CertificationResult r;
        r.available = false;
        r.diagnosis = "no window in the schedule has (1/|F|) log sep(eps/4, d_F) <= " +
                      std::to_string(threshold) + "; best was " + std::to_string(best_seen) +
                      " at " + best_label +
                      " (the separation growth of this system is not certified small at this "
                      "schedule)";
        return r;
    }

    double s = static_cast<double>(chosen->window.size());
    double delta = 0.0;
    bool found = false;
    for (int j = 0; j <= 400; ++j) {
        double cand = std::ldexp(1.0, -j);
        if (cand <= (epsilon / 8.0) * (epsilon / 8.0) && cand <= eta / (4.0 * s * s * s) &&
            s * cand <= 1.0 && binary_entropy(s * cand) <= rate / 4.0) {
            delta = cand;
            found = true;
            break;
        }
    }
    if (!found) {
        CertificationResult r;
        r.available = false;
        r.diagnosis = "no dyadic tolerance delta satisfies the epsilon, eta and window "
                      "constraints down to 2^-400";
        return r;
    }

    CertificationParameters p;
    p.rate = rate;
    p.epsilon = epsilon;
    p.eta = eta;
    p.block_divisor = k;
    p.window = chosen->window;
    p.delta = delta;
    p.required_consistency = 1.0 - eta / (4.0 * s * s);
    CertificationResult r;
    r.available = true;
    r.params = std::move(p);
    return r;
}

std::vector<CertificationCheck> recheck_certification(const CertificationParameters& p,
                                                      std::size_t sep_half,
                                                      std::size_t sep_quarter_of_window) {
    std::vector<CertificationCheck> checks;
    double s = static_cast<double>(p.window.size());
    auto push = [&](std::string name, double lhs, double rhs, bool holds) {
        checks.push_back(CertificationCheck{std::move(name), lhs, rhs, holds});
    };
    double eta_expect = p.rate / (4.0 * std::log(static_cast<double>(sep_half)));
    push("eta = rate / (4 log sep_half)", p.eta, eta_expect,
         std::abs(p.eta - eta_expect) <= 1e-12);
    push("1/k <= eta/2", 1.0 / static_cast<double>(p.block_divisor), p.eta / 2.0,
         1.0 / static_cast<double>(p.block_divisor) <= p.eta / 2.0);
    double win_rate = std::log(static_cast<double>(sep_quarter_of_window)) / s;
    double win_threshold = p.rate / (4.0 * static_cast<double>(p.block_divisor));
    push("(1/|F|) log sep_quarter <= rate/(4k)", win_rate, win_threshold,
         win_rate <= win_threshold);
    push("delta <= (epsilon/8)^2", p.delta, (p.epsilon / 8.0) * (p.epsilon / 8.0),
         p.delta <= (p.epsilon / 8.0) * (p.epsilon / 8.0));
    push("delta <= eta / (4 |F|^3)", p.delta, p.eta / (4.0 * s * s * s),
         p.delta <= p.eta / (4.0 * s * s * s));
    double h = binary_entropy(std::min(1.0, s * p.delta));
    push("H2(|F| delta) <= rate/4", h, p.rate / 4.0,
         s * p.delta <= 1.0 && h <= p.rate / 4.0);
    return checks;
}

std::optional<std::size_t> stable_scale(const CertificationParameters& p,
                                        const std::vector<SoficMap>& maps) {
    if (maps.empty()) return std::nullopt;
    FiniteSubset sym = symmetrize(p.window);
    std::vector<std::pair<std::size_t, double>> fractions;
    for (const SoficMap& m : maps) {
        std::vector<bool> q = consistent_set(m, sym);
        std::size_t c = 0;
        for (bool b : q)
            if (b) ++c;
        fractions.emplace_back(m.size(), static_cast<double>(c) / static_cast<double>(m.size()));
    }
    std::sort(fractions.begin(), fractions.end());
    // Least n such that every supplied map of size >= n meets the threshold.
    std::optional<std::size_t> answer;
    for (std::size_t i = fractions.size(); i-- > 0;) {
        if (fractions[i].second >= p.required_consistency)
            answer = fractions[i].first;
        else
            break;
    }
    return answer;
}

namespace {

struct DecodedTables {
    FiniteSubset domain;
    std::size_t domain_size = 0;
    // Permutation of s_i^{-1} for each domain element, shared across gammas.
    std::vector<std::vector<std::uint32_t>> inv_perms;
};

} // namespace

std::vector<Microstate> microstate_space(const SoficMap& sigma, const Subshift& shift,
                                         const FiniteSubset& f, double delta, int radius,
                                         const MicrostateMode& mode, const Limits& limits) {
    if (!(sigma.spec() == shift.group) || !(sigma.spec() == f.spec()))
        throw ArgumentError("microstate_space: mismatched group specs");
    if (f.is_empty()) throw ArgumentError("microstate_space: empty F");
    if (!(delta >= 0.0)) throw ArgumentError("microstate_space: delta must be >= 0");
    std::int64_t max_len = f.max_word_length();
    if (max_len > radius)
        throw ArgumentError("microstate_space: truncation radius " + std::to_string(radius) +
                            " too small, need at least " + std::to_string(max_len));

    const std::size_t n = sigma.size();
    const std::size_t letters = shift.num_letters();
    FiniteSubset domain = ball(sigma.spec(), radius, limits);

    // Comparison window for each gamma is the canonical prefix of the ball
    // of radius (radius - |gamma|); with delta > 0 the window must resolve
    // distances finer than delta/4.
    std::size_t min_window = domain.size();
    for (const GroupElement& gamma : f.elements()) {
        std::int64_t wr = radius - gamma.word_length();
        std::size_t w = 0;
        while (w < domain.size() && domain[w].word_length() <= wr) ++w;
        min_window = std::min(min_window, w);
    }
    if (delta > 0.0 && std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(min_window, 1060))) >=
                           delta / 4.0)
        throw ArgumentError("microstate_space: truncation radius " + std::to_string(radius) +
                            " cannot resolve distances below delta/4; increase the radius");

    std::vector<std::vector<std::uint32_t>> inv_perms;
    inv_perms.reserve(domain.size());
    for (const GroupElement& s : domain.elements())
        inv_perms.push_back(sigma.permutation_of(s.inverse()));

    struct GammaData {
        std::vector<std::uint32_t> image;               // gamma^sigma
        std::size_t window = 0;                         // prefix length compared
        std::vector<std::vector<std::uint32_t>> right;  // perm of s_i^{-1} gamma per window index
    };
    std::vector<GammaData> gammas;
    for (const GroupElement& gamma : f.elements()) {
        GammaData gd;
        gd.image = sigma.permutation_of(gamma);
        std::int64_t wr = radius - gamma.word_length();
        while (gd.window < domain.size() && domain[gd.window].word_length() <= wr) ++gd.window;
        gd.right.reserve(gd.window);
        for (std::size_t i = 0; i < gd.window; ++i)
            gd.right.push_back(sigma.permutation_of(multiply(domain[i].inverse(), gamma)));
        gammas.push_back(std::move(gd));
    }

    detail::AdmissibilityConstraints cons(shift, domain);
    const double delta_sq_n = delta * delta * static_cast<double>(n);
    const double sqrt_delta = std::sqrt(delta);

    std::vector<Microstate> out;

    auto try_labeling = [&](const std::vector<int>& labeling) {
        // Decode every point and check admissibility.
        std::vector<std::vector<int>> decoded(n, std::vector<int>(domain.size()));
        for (std::size_t m = 0; m < n; ++m) {
            for (std::size_t i = 0; i < domain.size(); ++i)
                decoded[m][i] = labeling[inv_perms[i][m]];
            if (!cons.admissible(decoded[m])) return;
        }
        // Quadratic-mean equivariance per gamma, with per-point maxima for
        // the good set.
        std::vector<double> point_max(n, 0.0);
        for (const GammaData& gd : gammas) {
            double sum_sq = 0.0;
            for (std::size_t m = 0; m < n; ++m) {
                double d = 0.0;
                for (std::size_t i = 0; i < gd.window; ++i) {
                    int a = labeling[inv_perms[i][gd.image[m]]]; // decoded at gamma^sigma m
                    int b = labeling[gd.right[i][m]];            // translated decode at m
                    if (a != b) {
                        d = std::ldexp(1.0, -static_cast<int>(i));
                        break;
                    }
                }
                sum_sq += d * d;
                point_max[m] = std::max(point_max[m], d);
                if (sum_sq > delta_sq_n) return;
            }
        }
        Microstate ms;
        ms.labeling = labeling;
        ms.decoded.reserve(n);
        for (std::size_t m = 0; m < n; ++m)
            ms.decoded.push_back(
                SymbolicPoint::unchecked(sigma.spec(), radius, domain, std::move(decoded[m])));
        for (std::size_t m = 0; m < n; ++m)
            if (point_max[m] <= sqrt_delta) ms.good_set.push_back(static_cast<std::uint32_t>(m));
        // Each gamma leaves at most delta*n points beyond sqrt(delta), so the
        // good set keeps at least (1 - |F| delta) n points.
        double floor_size = (1.0 - static_cast<double>(f.size()) * delta) * static_cast<double>(n);
        if (static_cast<double>(ms.good_set.size()) < floor_size - 1e-9)
            throw std::logic_error("microstate_space: good-set size bound violated");
        out.push_back(std::move(ms));
    };

    if (mode.kind == MicrostateMode::Exhaustive) {
        std::size_t total = 1;
        for (std::size_t i = 0; i < n; ++i) {
            if (letters != 0 && total > limits.max_enumeration / letters)
                throw ResourceError("microstate_space: exhaustive enumeration of " +
                                    std::to_string(letters) + "^" + std::to_string(n) +
                                    " labelings exceeds cap");
            total *= letters;
        }
        std::vector<int> labeling(n, 0);
        for (std::size_t idx = 0; idx < total; ++idx) {
            try_labeling(labeling);
            for (std::size_t pos = n; pos-- > 0;) {
                if (++labeling[pos] < static_cast<int>(letters)) break;
                labeling[pos] = 0;
            }
        }
    } else {
        if (mode.budget == 0) throw ArgumentError("microstate_space: zero sample budget");
        SplitRng rng(mode.seed, 0x515);
        std::unordered_set<std::uint64_t> seen;
        std::vector<int> labeling(n);
        std::size_t drawn = 0;
        while (drawn < mode.budget) {
            ++drawn;
            for (auto& l : labeling) l = static_cast<int>(rng.below(letters));
            std::uint64_t h = 14695981039346656037ull;
            for (int l : labeling) h = hash_combine(h, static_cast<std::uint64_t>(l));
            if (!seen.insert(h).second) continue;
            try_labeling(labeling);
        }
    }
    return out;
}

SoficEntropyReport sofic_entropy_estimate(const std::vector<SoficMap>& maps,
                                          const Subshift& shift, double eps,
                                          const FiniteSubset& f, double delta, int radius,
                                          const MicrostateMode& mode, std::size_t n_floor,
                                          const Limits& limits) {
    if (maps.empty()) throw ArgumentError("sofic_entropy_estimate: no maps supplied");
    if (!(eps > 0.0)) throw ArgumentError("sofic_entropy_estimate: eps must be positive");
    SoficEntropyReport report;
    report.n_floor = n_floor;
    report.radius = radius;
    report.tail_max = kNegInf;
    for (const SoficMap& sigma : maps) {
        std::vector<Microstate> ms = microstate_space(sigma, shift, f, delta, radius, mode, limits);
        SoficEntropyRow row;
        row.n = sigma.size();
        row.microstates = ms.size();
        if (ms.empty()) {
            row.sep = 0;
            row.sep_kind = BoundKind::Exact;
            row.value_nats = kNegInf;
        } else {
            if (ms.size() > 1024)
                throw ResourceError("sofic_entropy_estimate: more than 1024 microstates; use "
                                    "a sampling budget");
            std::size_t count = ms.size();
            std::vector<std::vector<double>> dist(count, std::vector<double>(count, 0.0));
            std::vector<std::pair<std::size_t, std::size_t>> pairs;
            for (std::size_t i = 0; i < count; ++i)
                for (std::size_t j = i + 1; j < count; ++j) pairs.emplace_back(i, j);
            parallel_for(pairs.size(), limits.threads, [&](std::size_t p) {
                auto [i, j] = pairs[p];
                double d = 0.0;
                for (std::size_t m = 0; m < sigma.size(); ++m) {
                    d = std::max(d, point_metric(ms[i].decoded[m], ms[j].decoded[m]).value);
                    if (d >= 1.0) break;
                }
                dist[i][j] = d;
                dist[j][i] = d;
            });
            std::vector<std::string> labels(count);
            for (std::size_t i = 0; i < count; ++i) labels[i] = "m" + std::to_string(i);
            FiniteMetricSpace space(std::move(labels), std::move(dist));
            ExtremalSetResult sep = separation_number(
                space, eps, count <= kExactSolverPointCap ? SolveMode::Exact : SolveMode::Greedy);
            row.sep = sep.value;
            row.sep_kind = sep.kind == BoundKind::Exact ? BoundKind::Exact : BoundKind::Lower;
            row.value_nats = std::log(static_cast<double>(sep.value)) /
                             static_cast<double>(sigma.size());
        }
        if (row.n >= n_floor) {
            report.tail_max = std::max(report.tail_max, row.value_nats);
            report.tail_valid = true;
        }
        report.rows.push_back(std::move(row));
    }
    report.notes.push_back("tail maximum over supplied maps with n >= " +
                           std::to_string(n_floor) +
                           ": a finite surrogate for the limit superior over a sofic "
                           "approximation sequence, not the limit itself");
    report.notes.push_back("microstates decode points only to truncation radius " +
                           std::to_string(radius));
    if (mode.kind == MicrostateMode::Sample)
        report.notes.push_back("sampled microstate sets give lower-bound separation probes");
    return report;
}

} // namespace entrolab
