#ifndef ENTROLAB_REPORT_HPP
#define ENTROLAB_REPORT_HPP

#include <string>
#include <vector>

#include "entrolab/group.hpp"

namespace entrolab {

// Every number the toolkit emits carries one of these.
enum class BoundKind { Exact, Upper, Lower, Heuristic };

std::string to_string(BoundKind k);

// A named finite-set schedule standing in for "all nonempty finite subsets".
class Schedule {
public:
    struct Entry {
        std::string label;
        FiniteSubset set;
    };

    static Schedule balls(const GroupSpec& spec, int r_min, int r_max, const Limits& limits = {});
    // [0,0], [0,1], ..., [0,n_max] over Z.
    static Schedule intervals(const GroupSpec& spec, int n_min, int n_max);
    static Schedule explicit_sets(std::vector<Entry> entries);

    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<Entry> entries_;
};

// One per-F line of an entropy estimate.
struct EstimateRow {
    std::string label;
    std::size_t set_size = 0;
    double value_nats = 0.0;
    double running_min = 0.0;
    BoundKind value_kind = BoundKind::Exact;
};

struct EstimateReport {
    std::vector<EstimateRow> rows;
    double final_value = 0.0;      // running minimum over the schedule
    BoundKind final_kind = BoundKind::Upper;
    std::vector<std::string> notes;
};

} // namespace entrolab

#endif
