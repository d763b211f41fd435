#ifndef ENTROLAB_SOFIC_HPP
#define ENTROLAB_SOFIC_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "entrolab/group.hpp"
#include "entrolab/report.hpp"
#include "entrolab/topological_entropy.hpp"

namespace entrolab {

// A map from the group into Sym(n): one permutation per generator, evaluated
// along reduced words (an exact homomorphism on free groups and Z), plus
// optional per-element overrides to model maps that are not homomorphisms.
// The identity always evaluates to the identity permutation.
class SoficMap {
public:
    // Independent uniform permutations per generator, seeded and reproducible.
    static SoficMap random(const GroupSpec& spec, std::size_t n, std::uint64_t seed);
    // Z only: k acts as rotation by k mod n.
    static SoficMap cyclic(std::size_t n);
    static SoficMap explicit_map(const GroupSpec& spec, std::size_t n,
                                 std::vector<std::vector<std::uint32_t>> generator_perms,
                                 std::map<GroupElement, std::vector<std::uint32_t>> overrides = {});

    const GroupSpec& spec() const { return spec_; }
    std::size_t size() const { return n_; }
    const std::vector<std::vector<std::uint32_t>>& generator_perms() const { return gen_perms_; }
    const std::map<GroupElement, std::vector<std::uint32_t>>& overrides() const {
        return overrides_;
    }

    std::uint32_t apply(const GroupElement& g, std::uint32_t m) const;
    std::vector<std::uint32_t> permutation_of(const GroupElement& g) const;

private:
    SoficMap(GroupSpec spec, std::size_t n) : spec_(spec), n_(n) {}

    GroupSpec spec_;
    std::size_t n_;
    std::vector<std::vector<std::uint32_t>> gen_perms_;
    std::vector<std::vector<std::uint32_t>> gen_inv_perms_;
    std::map<GroupElement, std::vector<std::uint32_t>> overrides_;
};

struct PairFraction {
    GroupElement g1, g2;
    double fraction = 0.0;
};

// Multiplicativity and freeness fractions over a test set, plus the fraction
// of points consistent for every pair of the symmetrized set at once.
struct QualityReport {
    std::vector<PairFraction> multiplicativity; // ordered pairs of S
    std::vector<PairFraction> freeness;         // unordered distinct pairs of S
    double min_multiplicativity = 1.0;
    double min_freeness = 1.0;
    double consistent_fraction = 0.0; // |Q(sym S)| / n
};

// Points where the map is multiplicative for every pair of S and free for
// every distinct pair of S.
std::vector<bool> consistent_set(const SoficMap& sigma, const FiniteSubset& s);

QualityReport quality(const SoficMap& sigma, const FiniteSubset& s);

// The graph on [n] with edges m ~ gamma^sigma m for gamma in the
// symmetrization of F, annotated with the consistent set, the good set
// (consistent intersect an optional extra mask), and its one- and two-step
// interiors.
struct SoficGraph {
    std::size_t n = 0;
    std::vector<std::vector<std::uint32_t>> adjacency; // sorted, deduplicated
    std::vector<bool> consistent;    // Q of the symmetrized test set
    std::vector<bool> good;          // consistent AND extra mask (if provided)
    std::vector<bool> interior;      // closed neighborhood inside good
    std::vector<bool> deep_interior; // closed neighborhood inside interior
    std::size_t neighborhood_factor = 0; // |sym(F) + identity| + |sym(F)|, the union-bound factor

    // Evaluated permutations of F's elements, kept for the decomposition.
    std::vector<GroupElement> f_elements;
    std::vector<std::vector<std::uint32_t>> f_perms;

    std::size_t count(const std::vector<bool>& mask) const;
};

// Builds the graph and checks the interior counting bounds
// |[n] - interior| <= factor * |[n] - good| and
// |[n] - deep_interior| <= factor * |[n] - interior|.
SoficGraph build_sofic_graph(const SoficMap& sigma, const FiniteSubset& f,
                             const FiniteSubset& s_test,
                             const std::vector<bool>* extra_good_mask = nullptr);

struct DecompositionBlock {
    std::uint32_t center = 0;
    std::vector<GroupElement> f_part;   // F_i, subset of F
    std::vector<std::uint32_t> points;  // F_i^sigma center, same order as f_part
};

struct Decomposition {
    std::vector<DecompositionBlock> blocks;
    std::vector<std::uint32_t> leftover; // [n] minus all block points
    std::size_t covered = 0;
    // Checked on every run.
    bool blocks_disjoint = true;
    bool block_sizes_ok = true;      // |F_i| >= |F| / k
    bool greedy_maximal = true;      // no further (center, F') can be added
    bool interior_count_ok = true;   // |deep_interior - W| <= |interior| / k
};

// Greedy maximal family of disjoint blocks F_i^sigma c_i with centers in the
// interior and |F_i| >= |F|/k; deterministic (ascending center scan).
Decomposition decompose(const SoficGraph& g, long block_divisor);

// -(x log x + (1-x) log(1-x)) in nats, 0 at the endpoints.
double binary_entropy(double x);

// Parameter schedule certifying that separated sets of approximately
// equivariant maps grow at rate below `rate`, given separation data of the
// system: eta = rate / (4 log sep_half), the smallest block divisor k with
// 1/k <= eta/2, the first window F in the schedule with
// (1/|F|) log sep_quarter(F) <= rate/(4k), and the largest dyadic
// equivalence tolerance delta compatible with epsilon, eta and |F|.
struct CertificationParameters {
    double rate = 0.0;    // bound being certified, in (0,1)
    double epsilon = 0.0; // separation scale
    double eta = 0.0;
    long block_divisor = 0;
    FiniteSubset window;
    double delta = 0.0;
    double required_consistency = 0.0; // least acceptable |Q(sym F)|/n
    std::optional<std::size_t> stable_n; // least supplied n meeting it, when maps are given
};

struct CertificationCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

struct CertificationResult {
    bool available = false;
    std::optional<CertificationParameters> params;
    std::string diagnosis;
};

struct WindowSeparation {
    std::string label;
    FiniteSubset window;
    std::size_t sep_quarter = 0; // sep(X, eps/4, d_F) for this window
};

CertificationResult certification_parameters(double rate, double epsilon, std::size_t sep_half,
                                             const std::vector<WindowSeparation>& schedule);

// Re-evaluates the defining inequalities of a parameter set.
std::vector<CertificationCheck> recheck_certification(const CertificationParameters& p,
                                                      std::size_t sep_half,
                                                      std::size_t sep_quarter_of_window);

// First supplied map size from which all larger supplied maps meet the
// required consistent fraction on the symmetrized window.
std::optional<std::size_t> stable_scale(const CertificationParameters& p,
                                        const std::vector<SoficMap>& maps);

// A labeling of [n] whose pullback through sigma decodes each point to a
// truncated element of the subshift.
struct Microstate {
    std::vector<int> labeling;               // [n] -> letter
    std::vector<SymbolicPoint> decoded;      // per point of [n]
    std::vector<std::uint32_t> good_set;     // points equivariant up to sqrt(delta) on F
};

struct MicrostateMode {
    enum Kind { Exhaustive, Sample } kind = Exhaustive;
    std::size_t budget = 0;   // sample mode: number of labelings drawn
    std::uint64_t seed = 0;
};

// All (or sampled) labelings whose decoded maps are admissible and satisfy
// the quadratic-mean equivariance condition <= delta for every gamma in F.
std::vector<Microstate> microstate_space(const SoficMap& sigma, const Subshift& shift,
                                         const FiniteSubset& f, double delta, int radius,
                                         const MicrostateMode& mode, const Limits& limits = {});

struct SoficEntropyRow {
    std::size_t n = 0;
    std::size_t microstates = 0;
    std::size_t sep = 0;
    BoundKind sep_kind = BoundKind::Exact;
    double value_nats = 0.0;
};

struct SoficEntropyReport {
    std::vector<SoficEntropyRow> rows;
    double tail_max = 0.0;        // max over rows with n >= n_floor
    std::size_t n_floor = 0;
    bool tail_valid = false;      // false when no row reaches the floor
    int radius = 0;
    std::vector<std::string> notes;
};

// Per-map values (1/n) log sep(microstates, eps, sup-metric) and their max
// over the tail; a finite surrogate for the limit-superior over a sofic
// sequence, labeled as such.
SoficEntropyReport sofic_entropy_estimate(const std::vector<SoficMap>& maps,
                                          const Subshift& shift, double eps,
                                          const FiniteSubset& f, double delta, int radius,
                                          const MicrostateMode& mode, std::size_t n_floor = 0,
                                          const Limits& limits = {});

} // namespace entrolab

#endif
