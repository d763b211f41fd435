#ifndef ENTROLAB_DETAIL_ADMISSIBILITY_HPP
#define ENTROLAB_DETAIL_ADMISSIBILITY_HPP

#include <cstddef>
#include <vector>

#include "entrolab/topological_entropy.hpp"

namespace entrolab::detail {

// One forbidden-pattern translate that fits inside a fixed domain: the
// domain positions it reads and the labels that would match it.
struct TranslateConstraint {
    std::vector<std::size_t> positions;
    std::vector<int> labels;
    std::size_t last_position = 0;
};

// All forbidden translates inside a domain, grouped for depth-first
// enumeration in canonical coordinate order.
class AdmissibilityConstraints {
public:
    AdmissibilityConstraints(const Subshift& s, const FiniteSubset& domain);

    std::size_t domain_size() const { return domain_size_; }
    const std::vector<TranslateConstraint>& all() const { return constraints_; }
    // Constraints whose last read position is p; complete exactly when the
    // DFS has just assigned position p.
    const std::vector<const TranslateConstraint*>& ending_at(std::size_t p) const {
        return by_last_[p];
    }

    bool admissible(const std::vector<int>& labels) const;

private:
    std::size_t domain_size_;
    std::vector<TranslateConstraint> constraints_;
    std::vector<std::vector<const TranslateConstraint*>> by_last_;
};

} // namespace entrolab::detail

#endif
