#pragma once

#include <vector>

#include "pcreg/core/correspondence.hpp"
#include "pcreg/features/projection_head.hpp"
#include "pcreg/mining/anchors.hpp"

namespace pcreg {

struct AdaptionConfig {
    int steps = 10;       // >= 1
    double lr = 1e-2;     // >= 0 (zero means a vacuous pass)
    double temperature = 0.07;

    void validate() const;
};

struct AdaptionResult {
    ProjectionHead head;
    bool adapted = false;
    std::vector<double> loss_curve;  // per-step forward loss plus a final evaluation
};

// Gradient-descent refinement of the head: InfoNCE with the existing
// inlier correspondence features as positives and the hard-sample features
// as negatives, both scored against the fixed positive anchor. The base
// descriptors are untouched; an empty hard set returns the head unchanged.
AdaptionResult per_batch_self_adaption(const ProjectionHead& head, const FeatureField& desc_p,
                                       const FeatureField& desc_q,
                                       const CorrespondenceSet& inliers,
                                       const CorrespondenceSet& hard, const AnchorPair& anchors,
                                       const AdaptionConfig& config);

}  // namespace pcreg
