#include "pcreg/geometry/point_cloud.hpp"

#include <cmath>
#include <stdexcept>

namespace pcreg {

void PointCloud::validate() const {
    if (y.size() != x.size() || z.size() != x.size()) {
        throw std::invalid_argument("PointCloud: coordinate arrays have unequal lengths");
    }
    if (!attr.empty() && attr.size() != x.size()) {
        throw std::invalid_argument("PointCloud: attribute length does not match point count");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i]) || !std::isfinite(z[i])) {
            throw std::invalid_argument("PointCloud: non-finite coordinate at index " +
                                        std::to_string(i));
        }
    }
    for (double a : attr) {
        if (!std::isfinite(a)) throw std::invalid_argument("PointCloud: non-finite attribute");
    }
}

}  // namespace pcreg
