#include "entrolab/group.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>
#include <unordered_set>

namespace entrolab {

namespace {

void require_same_spec(const GroupSpec& a, const GroupSpec& b, const char* what) {
    if (!(a == b)) throw ArgumentError(std::string(what) + ": mismatched group specs");
}

// Letter = (generator index, sign); positive sorts before negative so the
// order over length-1 elements is a, a^-1, b, b^-1, ...
struct Letter {
    int gen;
    int neg; // 0 positive, 1 negative
    auto operator<=>(const Letter&) const = default;
};

// Walks the letter expansion of an element without materializing it.
class LetterCursor {
public:
    explicit LetterCursor(const GroupElement& g) : g_(&g) {
        if (g.spec().kind == GroupKind::Lattice) advance_lattice_dim(0);
    }

    bool done() const {
        if (g_->spec().kind == GroupKind::Free) return run_ >= g_->word().size();
        return dim_ >= g_->coords().size() && remaining_ == 0;
    }

    Letter current() const {
        if (g_->spec().kind == GroupKind::Free) {
            const GenPower& r = g_->word()[run_];
            return Letter{r.gen, r.exp > 0 ? 0 : 1};
        }
        return Letter{static_cast<int>(dim_), neg_};
    }

    void next() {
        if (g_->spec().kind == GroupKind::Free) {
            const GenPower& r = g_->word()[run_];
            if (++pos_ >= static_cast<std::uint64_t>(r.exp < 0 ? -r.exp : r.exp)) {
                ++run_;
                pos_ = 0;
            }
            return;
        }
        if (--remaining_ == 0) advance_lattice_dim(dim_ + 1);
    }

private:
    void advance_lattice_dim(std::size_t start) {
        dim_ = start;
        remaining_ = 0;
        while (dim_ < g_->coords().size()) {
            std::int64_t v = g_->coords()[dim_];
            if (v != 0) {
                remaining_ = static_cast<std::uint64_t>(v < 0 ? -v : v);
                neg_ = v < 0 ? 1 : 0;
                return;
            }
            ++dim_;
        }
    }

    const GroupElement* g_;
    std::size_t run_ = 0;       // free: current run index
    std::uint64_t pos_ = 0;     // free: position within run
    std::size_t dim_ = 0;       // lattice: current dimension
    std::uint64_t remaining_ = 0;
    int neg_ = 0;
};

} // namespace

GroupSpec GroupSpec::free_group(int k) {
    if (k < 1) throw ArgumentError("free group rank must be >= 1");
    return GroupSpec{GroupKind::Free, k};
}

GroupSpec GroupSpec::lattice(int d) {
    if (d < 1) throw ArgumentError("lattice dimension must be >= 1");
    return GroupSpec{GroupKind::Lattice, d};
}

std::string GroupSpec::to_string() const {
    if (kind == GroupKind::Free) return "F" + std::to_string(rank);
    return "Z^" + std::to_string(rank);
}

GroupElement GroupElement::identity(const GroupSpec& spec) {
    GroupElement g;
    g.spec_ = spec;
    if (spec.kind == GroupKind::Lattice) g.coords_.assign(static_cast<std::size_t>(spec.rank), 0);
    return g;
}

GroupElement GroupElement::generator(const GroupSpec& spec, int index, std::int64_t exp) {
    if (index < 0 || index >= spec.rank) throw ArgumentError("generator index out of range");
    if (spec.kind == GroupKind::Free) return from_word(spec, {GenPower{index, exp}});
    std::vector<std::int64_t> v(static_cast<std::size_t>(spec.rank), 0);
    v[static_cast<std::size_t>(index)] = exp;
    return from_coords(spec, std::move(v));
}

GroupElement GroupElement::from_word(const GroupSpec& spec, std::vector<GenPower> runs) {
    if (spec.kind != GroupKind::Free) throw ArgumentError("from_word requires a free group");
    GroupElement g;
    g.spec_ = spec;
    for (const GenPower& r : runs) {
        if (r.exp == 0) continue;
        if (r.gen < 0 || r.gen >= spec.rank) throw ArgumentError("generator index out of range");
        if (!g.word_.empty() && g.word_.back().gen == r.gen) {
            g.word_.back().exp += r.exp;
            if (g.word_.back().exp == 0) g.word_.pop_back();
        } else {
            g.word_.push_back(r);
        }
    }
    return g;
}

GroupElement GroupElement::from_coords(const GroupSpec& spec, std::vector<std::int64_t> coords) {
    if (spec.kind != GroupKind::Lattice) throw ArgumentError("from_coords requires a lattice group");
    if (coords.size() != static_cast<std::size_t>(spec.rank))
        throw ArgumentError("coordinate vector has wrong dimension");
    GroupElement g;
    g.spec_ = spec;
    g.coords_ = std::move(coords);
    return g;
}

GroupElement GroupElement::parse(const GroupSpec& spec, std::string_view text) {
    if (spec.kind == GroupKind::Free) {
        if (text.empty() || text == "1") return identity(spec);
        std::vector<GenPower> runs;
        for (char c : text) {
            if (c == ' ') continue;
            int idx;
            std::int64_t e;
            if (c >= 'a' && c <= 'z') {
                idx = c - 'a';
                e = 1;
            } else if (c >= 'A' && c <= 'Z') {
                idx = c - 'A';
                e = -1;
            } else {
                throw ArgumentError("cannot parse free-group word: unexpected character '" +
                                    std::string(1, c) + "'");
            }
            if (idx >= spec.rank)
                throw ArgumentError("cannot parse free-group word: generator '" +
                                    std::string(1, c) + "' exceeds rank " + std::to_string(spec.rank));
            runs.push_back(GenPower{idx, e});
        }
        return from_word(spec, std::move(runs));
    }
    // Lattice: "(1,-2)" or "1,-2".
    std::string s(text);
    std::erase(s, '(');
    std::erase(s, ')');
    std::erase(s, ' ');
    std::vector<std::int64_t> coords;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) throw ArgumentError("cannot parse lattice element: empty coordinate");
        char* end = nullptr;
        long long v = std::strtoll(part.c_str(), &end, 10);
        if (end == nullptr || *end != '\0')
            throw ArgumentError("cannot parse lattice element: bad coordinate '" + part + "'");
        coords.push_back(v);
    }
    return from_coords(spec, std::move(coords));
}

bool GroupElement::is_identity() const {
    if (spec_.kind == GroupKind::Free) return word_.empty();
    return std::all_of(coords_.begin(), coords_.end(), [](std::int64_t v) { return v == 0; });
}

std::int64_t GroupElement::word_length() const {
    std::int64_t len = 0;
    if (spec_.kind == GroupKind::Free) {
        for (const GenPower& r : word_) len += r.exp < 0 ? -r.exp : r.exp;
    } else {
        for (std::int64_t v : coords_) len += v < 0 ? -v : v;
    }
    return len;
}

GroupElement GroupElement::inverse() const {
    GroupElement g;
    g.spec_ = spec_;
    if (spec_.kind == GroupKind::Free) {
        g.word_.reserve(word_.size());
        for (auto it = word_.rbegin(); it != word_.rend(); ++it)
            g.word_.push_back(GenPower{it->gen, -it->exp});
    } else {
        g.coords_.reserve(coords_.size());
        for (std::int64_t v : coords_) g.coords_.push_back(-v);
    }
    return g;
}

bool GroupElement::operator==(const GroupElement& other) const {
    return spec_ == other.spec_ && word_ == other.word_ && coords_ == other.coords_;
}

std::strong_ordering GroupElement::operator<=>(const GroupElement& other) const {
    std::int64_t la = word_length(), lb = other.word_length();
    if (la != lb) return la <=> lb;
    LetterCursor a(*this), b(other);
    while (!a.done() && !b.done()) {
        Letter x = a.current(), y = b.current();
        if (auto c = x <=> y; c != 0) return c;
        a.next();
        b.next();
    }
    // Same length: for lattice, equal letter sequences force equal vectors;
    // for free words they force equal words.
    return std::strong_ordering::equal;
}

std::uint64_t GroupElement::hash() const {
    std::uint64_t h = 14695981039346656037ull;
    if (spec_.kind == GroupKind::Free) {
        for (const GenPower& r : word_) {
            h = hash_combine(h, static_cast<std::uint64_t>(r.gen) + 1);
            h = hash_combine(h, static_cast<std::uint64_t>(r.exp));
        }
        h = hash_combine(h, 0x66);
    } else {
        for (std::int64_t v : coords_) h = hash_combine(h, static_cast<std::uint64_t>(v));
        h = hash_combine(h, 0x6c);
    }
    return h;
}

std::string GroupElement::to_string() const {
    if (spec_.kind == GroupKind::Free) {
        if (word_.empty()) return "1";
        std::string out;
        for (const GenPower& r : word_) {
            char base = static_cast<char>((r.exp > 0 ? 'a' : 'A') + r.gen);
            std::int64_t count = r.exp < 0 ? -r.exp : r.exp;
            out.append(static_cast<std::size_t>(count), base);
        }
        return out;
    }
    std::string out = "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(coords_[i]);
    }
    return out + ")";
}

GroupElement multiply(const GroupElement& g, const GroupElement& h) {
    require_same_spec(g.spec(), h.spec(), "multiply");
    if (g.spec().kind == GroupKind::Lattice) {
        std::vector<std::int64_t> v(g.coords());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += h.coords()[i];
        return GroupElement::from_coords(g.spec(), std::move(v));
    }
    std::vector<GenPower> runs(g.word());
    runs.insert(runs.end(), h.word().begin(), h.word().end());
    return GroupElement::from_word(g.spec(), std::move(runs));
}

FiniteSubset FiniteSubset::of(const GroupSpec& spec, std::vector<GroupElement> elems) {
    for (const GroupElement& g : elems) require_same_spec(spec, g.spec(), "FiniteSubset");
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    return FiniteSubset(spec, std::move(elems));
}

FiniteSubset FiniteSubset::empty(const GroupSpec& spec) { return FiniteSubset(spec, {}); }

FiniteSubset FiniteSubset::singleton_identity(const GroupSpec& spec) {
    return FiniteSubset(spec, {GroupElement::identity(spec)});
}

FiniteSubset FiniteSubset::interval(const GroupSpec& spec, std::int64_t lo, std::int64_t hi) {
    if (spec.kind != GroupKind::Lattice || spec.rank != 1)
        throw ArgumentError("interval subsets require the group Z");
    if (lo > hi) throw ArgumentError("interval: lo > hi");
    std::vector<GroupElement> elems;
    elems.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t v = lo; v <= hi; ++v) elems.push_back(GroupElement::from_coords(spec, {v}));
    return of(spec, std::move(elems));
}

bool FiniteSubset::contains(const GroupElement& g) const {
    return std::binary_search(elems_.begin(), elems_.end(), g);
}

std::optional<std::size_t> FiniteSubset::index_of(const GroupElement& g) const {
    auto it = std::lower_bound(elems_.begin(), elems_.end(), g);
    if (it == elems_.end() || !(*it == g)) return std::nullopt;
    return static_cast<std::size_t>(it - elems_.begin());
}

std::int64_t FiniteSubset::max_word_length() const {
    // Canonical order is by length first, so the last element is longest.
    return elems_.empty() ? 0 : elems_.back().word_length();
}

std::string FiniteSubset::to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < elems_.size(); ++i) {
        if (i) out += ",";
        out += elems_[i].to_string();
    }
    return out + "}";
}

FiniteSubset ball(const GroupSpec& spec, int radius, const Limits& limits) {
    if (radius < 0) throw ArgumentError("ball radius must be >= 0");
    std::unordered_set<GroupElement, GroupElementHash> seen;
    std::vector<GroupElement> frontier{GroupElement::identity(spec)};
    seen.insert(frontier.front());
    std::vector<GroupElement> steps;
    for (int i = 0; i < spec.rank; ++i) {
        steps.push_back(GroupElement::generator(spec, i, 1));
        steps.push_back(GroupElement::generator(spec, i, -1));
    }
    for (int level = 0; level < radius; ++level) {
        std::vector<GroupElement> next;
        for (const GroupElement& g : frontier) {
            for (const GroupElement& s : steps) {
                GroupElement h = multiply(g, s);
                if (h.word_length() != level + 1) continue;
                if (seen.insert(h).second) {
                    next.push_back(std::move(h));
                    if (seen.size() > limits.max_cells)
                        throw ResourceError("ball enumeration exceeds max_cells cap (" +
                                            std::to_string(limits.max_cells) + ")");
                }
            }
        }
        frontier = std::move(next);
    }
    return FiniteSubset::of(spec, std::vector<GroupElement>(seen.begin(), seen.end()));
}

FiniteSubset product_set(const FiniteSubset& w, const FiniteSubset& f) {
    require_same_spec(w.spec(), f.spec(), "product_set");
    std::unordered_set<GroupElement, GroupElementHash> seen;
    seen.reserve(w.size() * f.size());
    for (const GroupElement& a : w.elements())
        for (const GroupElement& b : f.elements()) seen.insert(multiply(a, b));
    return FiniteSubset::of(w.spec(), std::vector<GroupElement>(seen.begin(), seen.end()));
}

Rational expansion_ratio(const FiniteSubset& w, const FiniteSubset& f) {
    if (f.is_empty()) throw ArgumentError("expansion_ratio: F must be nonempty");
    FiniteSubset wf = product_set(w, f);
    return Rational::reduced(static_cast<std::int64_t>(wf.size()),
                             static_cast<std::int64_t>(f.size()));
}

FiniteSubset symmetrize(const FiniteSubset& f) {
    std::vector<GroupElement> elems(f.elements());
    for (const GroupElement& g : f.elements()) elems.push_back(g.inverse());
    return FiniteSubset::of(f.spec(), std::move(elems));
}

} // namespace entrolab
