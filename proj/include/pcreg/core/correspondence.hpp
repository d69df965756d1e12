#pragma once

#include <cstdint>
#include <vector>

namespace pcreg {

enum class CorrLabel : std::uint8_t { Unclassified, Inlier, Outlier };

struct Correspondence {
    std::int32_t i = 0;  // index into the source cloud P
    std::int32_t j = 0;  // index into the target cloud Q
    CorrLabel label = CorrLabel::Unclassified;

    friend bool operator==(const Correspondence& a, const Correspondence& b) {
        return a.i == b.i && a.j == b.j && a.label == b.label;
    }
};

// Point-index pairs across two clouds with an inlier/outlier/unclassified
// partition. (i, j) pairs are unique.
struct CorrespondenceSet {
    std::vector<Correspondence> pairs;
    std::int64_t n_source = 0;  // size of P, for bounds validation
    std::int64_t n_target = 0;  // size of Q

    std::size_t size() const { return pairs.size(); }
    bool empty() const { return pairs.empty(); }

    std::size_t count(CorrLabel label) const {
        std::size_t n = 0;
        for (const auto& c : pairs) n += (c.label == label) ? 1 : 0;
        return n;
    }

    CorrespondenceSet filtered(CorrLabel label) const {
        CorrespondenceSet out;
        out.n_source = n_source;
        out.n_target = n_target;
        for (const auto& c : pairs)
            if (c.label == label) out.pairs.push_back(c);
        return out;
    }

    // Throws std::invalid_argument on out-of-bounds indices or duplicate (i, j).
    void validate() const;
};

}  // namespace pcreg
