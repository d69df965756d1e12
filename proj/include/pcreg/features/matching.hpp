#pragma once

#include <limits>

#include "pcreg/core/correspondence.hpp"
#include "pcreg/features/feature_field.hpp"

namespace pcreg {

enum class MatchMode { NearestNeighbor, Mutual };

// Exact brute-force feature matching (vectorized argmin scan, lowest index
// wins ties). NearestNeighbor pairs every valid P row with its L2-nearest
// valid Q row; Mutual keeps pairs that are nearest in both directions. When
// more than max_pairs survive, the max_pairs smallest feature distances are
// kept (ties broken by (i, j)). Labels are all Unclassified.
CorrespondenceSet match_features(const FeatureField& f_p, const FeatureField& f_q,
                                 MatchMode mode,
                                 std::size_t max_pairs = std::numeric_limits<std::size_t>::max());

// Row k = F_P[i_k] - F_Q[j_k], order preserved. Out-of-bounds indices or
// dimension mismatches are rejected.
RowMatrixXd correspondence_features(const FeatureField& f_p, const FeatureField& f_q,
                                    const CorrespondenceSet& corrs);

// Squared L2 feature distance of one correspondence (dispatched kernel).
double feature_sq_dist(const FeatureField& f_p, const FeatureField& f_q, std::int32_t i,
                       std::int32_t j);

}  // namespace pcreg
