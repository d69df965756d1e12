#include "pcreg/mining/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pcreg/core/errors.hpp"

namespace pcreg {

AnchorPair compute_anchors(const RowMatrixXd& corr_feats,
                           const std::vector<std::uint8_t>& inlier_flags) {
    if (static_cast<Eigen::Index>(inlier_flags.size()) != corr_feats.rows()) {
        throw std::invalid_argument("compute_anchors: flags length must match feature rows");
    }
    const int dim = static_cast<int>(corr_feats.cols());
    Eigen::VectorXd pos = Eigen::VectorXd::Zero(dim), neg = Eigen::VectorXd::Zero(dim);
    std::size_t n_pos = 0, n_neg = 0;
    for (Eigen::Index k = 0; k < corr_feats.rows(); ++k) {
        if (inlier_flags[static_cast<std::size_t>(k)]) {
            pos += corr_feats.row(k).transpose();
            ++n_pos;
        } else {
            neg += corr_feats.row(k).transpose();
            ++n_neg;
        }
    }
    if (n_pos == 0) throw MissingClassError("compute_anchors: no inliers flagged");
    if (n_neg == 0) throw MissingClassError("compute_anchors: no outliers flagged");
    AnchorPair out;
    out.positive = pos / static_cast<double>(n_pos);
    out.negative = neg / static_cast<double>(n_neg);
    return out;
}

namespace {

double similarity_to(const Eigen::VectorXd& anchor, const Eigen::VectorXd& f,
                     SimilarityDiagnostics* diag) {
    const double l2 = (anchor - f).norm();
    const double d_e = 1.0 - std::min(l2, 1.0);
    const double na = anchor.norm(), nf = f.norm();
    double d_c;
    if (na < 1e-12 || nf < 1e-12) {
        d_c = 0.5;  // zero-norm treated as orthogonal
        if (diag) ++diag->zero_norm_cosine;
    } else {
        const double cosine = std::clamp(anchor.dot(f) / (na * nf), -1.0, 1.0);
        d_c = (cosine + 1.0) / 2.0;
    }
    return std::min(d_e, d_c);
}

}  // namespace

SimilarityPair anchor_similarity(const AnchorPair& anchors, const Eigen::VectorXd& corr_feat,
                                 SimilarityDiagnostics* diag) {
    if (anchors.positive.size() != corr_feat.size() ||
        anchors.negative.size() != corr_feat.size()) {
        throw std::invalid_argument("anchor_similarity: dimension mismatch");
    }
    SimilarityPair s;
    s.s_plus = similarity_to(anchors.positive, corr_feat, diag);
    s.s_minus = similarity_to(anchors.negative, corr_feat, diag);
    return s;
}

}  // namespace pcreg
