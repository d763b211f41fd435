#ifndef ENTROLAB_GROUP_HPP
#define ENTROLAB_GROUP_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entrolab/common.hpp"

namespace entrolab {

enum class GroupKind { Free, Lattice };

// Free group of a given rank, or the integer lattice of a given dimension.
struct GroupSpec {
    GroupKind kind = GroupKind::Free;
    int rank = 1; // free rank / lattice dimension

    static GroupSpec free_group(int k);
    static GroupSpec lattice(int d);

    bool operator==(const GroupSpec&) const = default;
    std::string to_string() const;
};

// One maximal run of a reduced word: generator^exponent, exponent != 0,
// adjacent runs use distinct generators.
struct GenPower {
    int gen = 0;
    std::int64_t exp = 0;
    bool operator==(const GenPower&) const = default;
};

// Immutable group element. Free elements are reduced words stored as
// exponent runs; lattice elements are integer vectors. The canonical order
// (word length, then lexicographic over letters with a < a^-1 < b < ...)
// makes every set output and downstream enumeration deterministic.
class GroupElement {
public:
    static GroupElement identity(const GroupSpec& spec);
    static GroupElement generator(const GroupSpec& spec, int index, std::int64_t exp = 1);
    static GroupElement from_word(const GroupSpec& spec, std::vector<GenPower> runs);
    static GroupElement from_coords(const GroupSpec& spec, std::vector<std::int64_t> coords);

    // Free words are "aB" style (capital = inverse), "1" or "" is the
    // identity; lattice elements are "(v1,...,vd)" or comma-separated ints.
    static GroupElement parse(const GroupSpec& spec, std::string_view text);

    const GroupSpec& spec() const { return spec_; }
    bool is_identity() const;
    std::int64_t word_length() const;

    const std::vector<GenPower>& word() const { return word_; }
    const std::vector<std::int64_t>& coords() const { return coords_; }

    GroupElement inverse() const;

    bool operator==(const GroupElement& other) const;
    // Canonical order described above.
    std::strong_ordering operator<=>(const GroupElement& other) const;

    std::uint64_t hash() const;
    std::string to_string() const;

private:
    GroupElement() = default;

    GroupSpec spec_;
    std::vector<GenPower> word_;         // free only
    std::vector<std::int64_t> coords_;   // lattice only
};

struct GroupElementHash {
    std::size_t operator()(const GroupElement& g) const { return static_cast<std::size_t>(g.hash()); }
};

GroupElement multiply(const GroupElement& g, const GroupElement& h);

// Deduplicated, canonically ordered finite set of elements of one group.
class FiniteSubset {
public:
    static FiniteSubset of(const GroupSpec& spec, std::vector<GroupElement> elems);
    static FiniteSubset empty(const GroupSpec& spec);
    static FiniteSubset singleton_identity(const GroupSpec& spec);
    // {0, 1, ..., n} as a subset of Z; handy for interval schedules.
    static FiniteSubset interval(const GroupSpec& spec, std::int64_t lo, std::int64_t hi);

    const GroupSpec& spec() const { return spec_; }
    std::size_t size() const { return elems_.size(); }
    bool is_empty() const { return elems_.empty(); }
    const std::vector<GroupElement>& elements() const { return elems_; }
    const GroupElement& operator[](std::size_t i) const { return elems_[i]; }

    bool contains(const GroupElement& g) const;
    std::optional<std::size_t> index_of(const GroupElement& g) const;

    std::int64_t max_word_length() const;

    bool operator==(const FiniteSubset& other) const = default;
    std::string to_string() const;

private:
    FiniteSubset(GroupSpec spec, std::vector<GroupElement> sorted)
        : spec_(spec), elems_(std::move(sorted)) {}

    GroupSpec spec_;
    std::vector<GroupElement> elems_;
};

// All elements of word length <= r; BFS over the Cayley graph with the
// standard symmetric generating set, capped by limits.max_cells.
FiniteSubset ball(const GroupSpec& spec, int radius, const Limits& limits = {});

// {w f : w in W, f in F}.
FiniteSubset product_set(const FiniteSubset& w, const FiniteSubset& f);

// |WF| / |F| as an exact rational.
Rational expansion_ratio(const FiniteSubset& w, const FiniteSubset& f);

// F united with its inverses; a fixed point of itself.
FiniteSubset symmetrize(const FiniteSubset& f);

} // namespace entrolab

#endif
