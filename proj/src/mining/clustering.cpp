#include "pcreg/mining/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>

#include "pcreg/core/errors.hpp"
#include "pcreg/kern/kernels.hpp"

namespace pcreg {

void ClusteringConfig::validate() const {
    if (top_k < 1) throw std::invalid_argument("ClusteringConfig: top_k must be >= 1");
    if (max_iters < 1) throw std::invalid_argument("ClusteringConfig: max_iters must be >= 1");
    if (!(seed_similarity_threshold > 0.0) || !(seed_similarity_threshold < 1.0)) {
        throw std::invalid_argument("ClusteringConfig: seed threshold must be in (0, 1)");
    }
    if (n_p < 1) throw std::invalid_argument("ClusteringConfig: n_p must be >= 1");
    if (max_seeds < 3) throw std::invalid_argument("ClusteringConfig: max_seeds must be >= 3");
}

CorrespondenceSet seed_proposals(const FeatureField& f_p, const FeatureField& f_q,
                                 double threshold) {
    if (!(threshold > 0.0) || !(threshold < 1.0)) {
        throw std::invalid_argument("seed_proposals: threshold must be in (0, 1)");
    }
    CorrespondenceSet mutual = match_features(f_p, f_q, MatchMode::Mutual);
    CorrespondenceSet out;
    out.n_source = mutual.n_source;
    out.n_target = mutual.n_target;
    for (const auto& c : mutual.pairs) {
        const double l2 = std::sqrt(feature_sq_dist(f_p, f_q, c.i, c.j));
        const double sim = 1.0 - std::min(l2, 1.0);
        if (sim > threshold) out.pairs.push_back(c);
    }
    if (out.pairs.empty()) {
        throw EmptySeedError("seed_proposals: no pairs above similarity threshold " +
                             std::to_string(threshold));
    }
    return out;
}

CorrespondenceSet cap_seeds(const CorrespondenceSet& seeds, const FeatureField& f_p,
                            const FeatureField& f_q, std::size_t max_seeds) {
    if (seeds.size() <= max_seeds) return seeds;
    struct Scored {
        double d;
        Correspondence c;
    };
    std::vector<Scored> scored;
    scored.reserve(seeds.size());
    for (const auto& c : seeds.pairs) scored.push_back({feature_sq_dist(f_p, f_q, c.i, c.j), c});
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.d != b.d) return a.d < b.d;
        return std::tie(a.c.i, a.c.j) < std::tie(b.c.i, b.c.j);
    });
    scored.resize(max_seeds);
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        return std::tie(a.c.i, a.c.j) < std::tie(b.c.i, b.c.j);
    });
    CorrespondenceSet out;
    out.n_source = seeds.n_source;
    out.n_target = seeds.n_target;
    for (const auto& s : scored) out.pairs.push_back(s.c);
    return out;
}

namespace {

// Feature rows restricted to the still-unclassified points of one cloud.
FeatureField gather_rows(const FeatureField& f, const std::vector<std::int32_t>& idx) {
    FeatureField out;
    out.vectors.resize(static_cast<Eigen::Index>(idx.size()), f.vectors.cols());
    out.valid.resize(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        out.vectors.row(static_cast<Eigen::Index>(r)) = f.vectors.row(idx[r]);
        out.valid[r] = f.is_valid_row(static_cast<std::size_t>(idx[r])) ? 1 : 0;
    }
    return out;
}

Eigen::VectorXd corr_feature(const FeatureField& f_p, const FeatureField& f_q,
                             const Correspondence& c) {
    return (f_p.vectors.row(c.i) - f_q.vectors.row(c.j)).transpose();
}

}  // namespace

ClusteringResult feature_geometry_clustering(const PointCloud& p, const PointCloud& q,
                                             const FeatureField& f_p, const FeatureField& f_q,
                                             const CorrespondenceSet& c0,
                                             const ClusteringConfig& config,
                                             const PoseEstimator& estimator,
                                             const EstimatorParams& params) {
    config.validate();
    if (c0.empty()) throw std::invalid_argument("clustering: empty seed set");

    const std::int64_t n_p_pts = static_cast<std::int64_t>(p.size());
    const std::int64_t n_q_pts = static_cast<std::int64_t>(q.size());

    // Working set C^i: pairs with current labels. The initial partition comes
    // from one estimator pass over the seeds.
    std::vector<Correspondence> classified = c0.pairs;
    CorrespondenceSet work;
    work.n_source = n_p_pts;
    work.n_target = n_q_pts;
    work.pairs = classified;

    ClusteringResult result;
    EstimatorVerdict verdict = estimator.filter(p, q, work, params);  // init failure propagates
    for (std::size_t k = 0; k < classified.size(); ++k) {
        classified[k].label = verdict.inlier_flags[k] ? CorrLabel::Inlier : CorrLabel::Outlier;
    }
    result.pose = verdict.pose;

    auto anchors_of = [&](const std::vector<Correspondence>& set, const AnchorPair& previous) {
        RowMatrixXd feats(static_cast<Eigen::Index>(set.size()), f_p.dim());
        std::vector<std::uint8_t> flags(set.size());
        for (std::size_t k = 0; k < set.size(); ++k) {
            feats.row(static_cast<Eigen::Index>(k)) = f_p.vectors.row(set[k].i) - f_q.vectors.row(set[k].j);
            flags[k] = set[k].label == CorrLabel::Inlier ? 1 : 0;
        }
        try {
            return compute_anchors(feats, flags);
        } catch (const MissingClassError&) {
            return previous;  // zero vectors at initialization
        }
    };

    AnchorPair anchors;
    anchors.positive = Eigen::VectorXd::Zero(f_p.dim());
    anchors.negative = Eigen::VectorXd::Zero(f_p.dim());
    anchors = anchors_of(classified, anchors);

    auto count_label = [&](CorrLabel l) {
        std::size_t n = 0;
        for (const auto& c : classified) n += (c.label == l) ? 1 : 0;
        return n;
    };
    std::size_t prev_inliers = count_label(CorrLabel::Inlier);
    std::size_t prev_outliers = count_label(CorrLabel::Outlier);

    for (std::size_t iter = 0; iter < config.max_iters; ++iter) {
        IterationRecord rec;

        // Unclassified points: endpoints not referenced by the working set.
        std::vector<char> used_p(p.size(), 0), used_q(q.size(), 0);
        for (const auto& c : classified) {
            used_p[static_cast<std::size_t>(c.i)] = 1;
            used_q[static_cast<std::size_t>(c.j)] = 1;
        }
        std::vector<std::int32_t> up, uq;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (!used_p[i]) up.push_back(static_cast<std::int32_t>(i));
        for (std::size_t j = 0; j < q.size(); ++j)
            if (!used_q[j]) uq.push_back(static_cast<std::int32_t>(j));

        // Candidates: mutual matches among unclassified points, admitted by
        // anchor similarity.
        struct Scored {
            Correspondence c;
            double s_plus;
        };
        std::vector<Scored> passing;
        if (!up.empty() && !uq.empty()) {
            const FeatureField sub_p = gather_rows(f_p, up);
            const FeatureField sub_q = gather_rows(f_q, uq);
            const CorrespondenceSet cand = match_features(sub_p, sub_q, MatchMode::Mutual);
            for (const auto& sc : cand.pairs) {
                Correspondence c{up[static_cast<std::size_t>(sc.i)],
                                 uq[static_cast<std::size_t>(sc.j)], CorrLabel::Unclassified};
                const SimilarityPair s = anchor_similarity(anchors, corr_feature(f_p, f_q, c));
                if (s.s_plus > s.s_minus) passing.push_back({c, s.s_plus});
            }
        }
        std::sort(passing.begin(), passing.end(), [](const Scored& a, const Scored& b) {
            if (a.s_plus != b.s_plus) return a.s_plus > b.s_plus;
            return std::tie(a.c.i, a.c.j) < std::tie(b.c.i, b.c.j);
        });
        if (passing.size() > config.top_k) passing.resize(config.top_k);

        for (const auto& s : passing) rec.admitted.push_back(s.c);

        if (rec.admitted.empty()) {
            // Nothing new: the partition cannot change, so the convergence
            // test fires with the previous state.
            rec.classified = classified;
            rec.anchors = anchors;
            rec.n_inliers = prev_inliers;
            rec.n_outliers = prev_outliers;
            result.history.push_back(std::move(rec));
            break;
        }

        std::vector<Correspondence> expanded = classified;
        for (const auto& c : rec.admitted) expanded.push_back(c);

        work.pairs = expanded;
        EstimatorVerdict v;
        try {
            v = estimator.filter(p, q, work, params);
        } catch (const EstimatorFailedError&) {
            result.estimator_warning = true;
            break;  // keep the last consistent state
        }
        for (std::size_t k = 0; k < expanded.size(); ++k) {
            expanded[k].label = v.inlier_flags[k] ? CorrLabel::Inlier : CorrLabel::Outlier;
        }
        result.pose = v.pose;

        rec.admitted_rejected.resize(rec.admitted.size());
        const std::size_t base = classified.size();
        for (std::size_t k = 0; k < rec.admitted.size(); ++k) {
            rec.admitted_rejected[k] = expanded[base + k].label == CorrLabel::Outlier ? 1 : 0;
        }

        classified = std::move(expanded);
        anchors = anchors_of(classified, anchors);

        const std::size_t n_in = count_label(CorrLabel::Inlier);
        const std::size_t n_out = count_label(CorrLabel::Outlier);
        rec.classified = classified;
        rec.anchors = anchors;
        rec.n_inliers = n_in;
        rec.n_outliers = n_out;
        result.history.push_back(std::move(rec));

        const bool converged = (n_in == prev_inliers) || (n_out == prev_outliers);
        prev_inliers = n_in;
        prev_outliers = n_out;
        if (converged) break;
    }

    result.inliers.n_source = n_p_pts;
    result.inliers.n_target = n_q_pts;
    for (const auto& c : classified) {
        if (c.label == CorrLabel::Inlier) result.inliers.pairs.push_back(c);
    }
    result.anchors = anchors;
    return result;
}

CorrespondenceSet mine_hard_samples(const std::vector<IterationRecord>& history,
                                    std::int64_t n_source, std::int64_t n_target) {
    if (history.empty()) {
        throw std::invalid_argument("mine_hard_samples: no clustering run recorded");
    }
    CorrespondenceSet out;
    out.n_source = n_source;
    out.n_target = n_target;
    std::set<std::pair<std::int32_t, std::int32_t>> seen;
    for (const auto& rec : history) {
        for (std::size_t k = 0; k < rec.admitted_rejected.size(); ++k) {
            if (!rec.admitted_rejected[k]) continue;
            const auto& c = rec.admitted[k];
            if (seen.emplace(c.i, c.j).second) {
                out.pairs.push_back({c.i, c.j, CorrLabel::Outlier});
            }
        }
    }
    return out;
}

}  // namespace pcreg
