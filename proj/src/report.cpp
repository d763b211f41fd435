#include "entrolab/report.hpp"

namespace entrolab {

std::string to_string(BoundKind k) {
    switch (k) {
        case BoundKind::Exact: return "exact";
        case BoundKind::Upper: return "upper";
        case BoundKind::Lower: return "lower";
        case BoundKind::Heuristic: return "heuristic";
    }
    return "unknown";
}

Schedule Schedule::balls(const GroupSpec& spec, int r_min, int r_max, const Limits& limits) {
    if (r_min < 0 || r_max < r_min) throw ArgumentError("Schedule::balls: need 0 <= r_min <= r_max");
    Schedule s;
    for (int r = r_min; r <= r_max; ++r)
        s.entries_.push_back(Entry{"B" + std::to_string(r), ball(spec, r, limits)});
    return s;
}

Schedule Schedule::intervals(const GroupSpec& spec, int n_min, int n_max) {
    if (spec.kind != GroupKind::Lattice || spec.rank != 1)
        throw ArgumentError("Schedule::intervals requires the group Z");
    if (n_min < 0 || n_max < n_min)
        throw ArgumentError("Schedule::intervals: need 0 <= n_min <= n_max");
    Schedule s;
    for (int n = n_min; n <= n_max; ++n)
        s.entries_.push_back(Entry{"[0," + std::to_string(n) + "]",
                                   FiniteSubset::interval(spec, 0, n)});
    return s;
}

Schedule Schedule::explicit_sets(std::vector<Entry> entries) {
    for (const Entry& e : entries)
        if (e.set.is_empty()) throw ArgumentError("Schedule: empty set in schedule");
    Schedule s;
    s.entries_ = std::move(entries);
    return s;
}

} // namespace entrolab
