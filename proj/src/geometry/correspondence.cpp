#include "pcreg/core/correspondence.hpp"

#include <set>
#include <stdexcept>
#include <utility>

namespace pcreg {

void CorrespondenceSet::validate() const {
    std::set<std::pair<std::int32_t, std::int32_t>> seen;
    for (const auto& c : pairs) {
        if (c.i < 0 || c.i >= n_source || c.j < 0 || c.j >= n_target) {
            throw std::invalid_argument("CorrespondenceSet: index out of bounds");
        }
        if (!seen.emplace(c.i, c.j).second) {
            throw std::invalid_argument("CorrespondenceSet: duplicate (i, j) pair");
        }
    }
}

}  // namespace pcreg
