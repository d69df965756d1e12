#include "pcreg/mining/adaption.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pcreg/losses/losses.hpp"

namespace pcreg {

void AdaptionConfig::validate() const {
    if (steps < 1) throw std::invalid_argument("AdaptionConfig: steps must be >= 1");
    if (lr < 0.0) throw std::invalid_argument("AdaptionConfig: lr must be >= 0");
    if (!(temperature > 0.0)) throw std::invalid_argument("AdaptionConfig: temperature must be positive");
}

namespace {

// Projection of selected rows with intermediate values kept for backprop.
struct ProjectedRows {
    std::vector<Eigen::VectorXd> pre;   // W f + b
    std::vector<Eigen::VectorXd> post;  // normalized output
};

ProjectedRows project_rows(const ProjectionHead& head, const FeatureField& desc,
                           const std::vector<std::int32_t>& rows) {
    ProjectedRows out;
    out.pre.reserve(rows.size());
    out.post.reserve(rows.size());
    for (std::int32_t r : rows) {
        Eigen::VectorXd v = head.weight * desc.vectors.row(r).transpose() + head.bias;
        Eigen::VectorXd y = v;
        if (head.normalize_output) {
            const double n = v.norm();
            if (n > 1e-12) y = v / n;
        }
        out.pre.push_back(std::move(v));
        out.post.push_back(std::move(y));
    }
    return out;
}

}  // namespace

AdaptionResult per_batch_self_adaption(const ProjectionHead& head, const FeatureField& desc_p,
                                       const FeatureField& desc_q,
                                       const CorrespondenceSet& inliers,
                                       const CorrespondenceSet& hard, const AnchorPair& anchors,
                                       const AdaptionConfig& config) {
    config.validate();
    AdaptionResult result;
    result.head = head;
    if (hard.empty()) return result;  // identity adaption
    if (inliers.empty()) return result;

    // Unique descriptor rows touched by the batch, per cloud.
    std::vector<std::int32_t> rows_p, rows_q;
    std::vector<std::int32_t> map_p(desc_p.count(), -1), map_q(desc_q.count(), -1);
    auto intern = [](std::vector<std::int32_t>& rows, std::vector<std::int32_t>& map,
                     std::int32_t r) {
        if (map[r] < 0) {
            map[r] = static_cast<std::int32_t>(rows.size());
            rows.push_back(r);
        }
        return map[r];
    };
    struct PairRef {
        std::int32_t p, q;
    };
    std::vector<PairRef> pos_refs, neg_refs;
    for (const auto& c : inliers.pairs) {
        pos_refs.push_back({intern(rows_p, map_p, c.i), intern(rows_q, map_q, c.j)});
    }
    for (const auto& c : hard.pairs) {
        neg_refs.push_back({intern(rows_p, map_p, c.i), intern(rows_q, map_q, c.j)});
    }

    ProjectionHead current = head;
    auto forward_loss = [&](bool with_grad, Eigen::MatrixXd* dw, Eigen::VectorXd* db) {
        const ProjectedRows proj_p = project_rows(current, desc_p, rows_p);
        const ProjectedRows proj_q = project_rows(current, desc_q, rows_q);

        ContrastBatch batch;
        batch.reference = anchors.positive;
        batch.temperature = config.temperature;
        for (const auto& r : pos_refs) {
            batch.positives.push_back({proj_p.post[r.p] - proj_q.post[r.q], false, r.p, r.q});
        }
        for (const auto& r : neg_refs) {
            batch.negatives.push_back({proj_p.post[r.p] - proj_q.post[r.q], false, r.p, r.q});
        }
        const LossValue nce = info_nce(batch);
        if (!with_grad) return nce.value;

        Eigen::MatrixXd dy_p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_p.size()),
                                                     current.d_out());
        Eigen::MatrixXd dy_q = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_q.size()),
                                                     current.d_out());
        const Eigen::MatrixXd& gp = nce.gradients.at("positives");
        const Eigen::MatrixXd& gn = nce.gradients.at("negatives");
        for (std::size_t k = 0; k < pos_refs.size(); ++k) {
            dy_p.row(pos_refs[k].p) += gp.row(static_cast<Eigen::Index>(k));
            dy_q.row(pos_refs[k].q) -= gp.row(static_cast<Eigen::Index>(k));
        }
        for (std::size_t k = 0; k < neg_refs.size(); ++k) {
            dy_p.row(neg_refs[k].p) += gn.row(static_cast<Eigen::Index>(k));
            dy_q.row(neg_refs[k].q) -= gn.row(static_cast<Eigen::Index>(k));
        }

        dw->setZero(current.d_out(), current.d_in());
        db->setZero(current.d_out());
        auto backprop = [&](const ProjectedRows& proj, const Eigen::MatrixXd& dy,
                            const FeatureField& desc, const std::vector<std::int32_t>& rows) {
            for (std::size_t r = 0; r < rows.size(); ++r) {
                Eigen::VectorXd g = dy.row(static_cast<Eigen::Index>(r)).transpose();
                if (g.isZero(0.0)) continue;
                Eigen::VectorXd dv;
                if (current.normalize_output) {
                    const double n = proj.pre[r].norm();
                    if (n > 1e-12) {
                        const Eigen::VectorXd& y = proj.post[r];
                        dv = (g - y * y.dot(g)) / n;
                    } else {
                        dv = g;
                    }
                } else {
                    dv = g;
                }
                *dw += dv * desc.vectors.row(rows[r]);
                *db += dv;
            }
        };
        backprop(proj_p, dy_p, desc_p, rows_p);
        backprop(proj_q, dy_q, desc_q, rows_q);
        return nce.value;
    };

    Eigen::MatrixXd dw;
    Eigen::VectorXd db;
    for (int step = 0; step < config.steps; ++step) {
        const double loss = forward_loss(true, &dw, &db);
        result.loss_curve.push_back(loss);
        current.weight -= config.lr * dw;
        current.bias -= config.lr * db;
    }
    result.loss_curve.push_back(forward_loss(false, nullptr, nullptr));

    result.head = std::move(current);
    result.adapted = true;
    return result;
}

}  // namespace pcreg
