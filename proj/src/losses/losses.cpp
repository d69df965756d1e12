#include "pcreg/losses/losses.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "pcreg/core/errors.hpp"
#include "pcreg/features/matching.hpp"

namespace pcreg {

void ContrastBatch::validate() const {
    if (positives.empty()) throw std::invalid_argument("ContrastBatch: no positives");
    if (negatives.empty()) throw std::invalid_argument("ContrastBatch: no negatives");
    if (!(temperature > 0.0)) throw std::invalid_argument("ContrastBatch: temperature must be positive");
    for (const auto& s : positives) {
        if (s.v.size() != reference.size()) {
            throw std::invalid_argument("ContrastBatch: positive dim mismatch");
        }
    }
    for (const auto& s : negatives) {
        if (s.v.size() != reference.size()) {
            throw std::invalid_argument("ContrastBatch: negative dim mismatch");
        }
    }
}

LossValue info_nce(const ContrastBatch& batch) {
    batch.validate();
    const std::size_t n_p = batch.positives.size();
    const std::size_t n_n = batch.negatives.size();
    const int dim = static_cast<int>(batch.reference.size());
    const double inv_tau = 1.0 / batch.temperature;

    // beta = -||x - reference|| / temperature
    std::vector<double> beta_p(n_p), dist_p(n_p), beta_n(n_n), dist_n(n_n);
    for (std::size_t i = 0; i < n_p; ++i) {
        dist_p[i] = (batch.positives[i].v - batch.reference).norm();
        beta_p[i] = -dist_p[i] * inv_tau;
    }
    double max_beta_n = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n_n; ++j) {
        dist_n[j] = (batch.negatives[j].v - batch.reference).norm();
        beta_n[j] = -dist_n[j] * inv_tau;
        max_beta_n = std::max(max_beta_n, beta_n[j]);
    }

    LossValue out;
    Eigen::MatrixXd grad_p = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_p), dim);
    Eigen::MatrixXd grad_n = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_n), dim);
    std::vector<double> dl_dbeta_n(n_n, 0.0);

    double loss = 0.0;
    const double inv_np = 1.0 / static_cast<double>(n_p);
    for (std::size_t i = 0; i < n_p; ++i) {
        const double m = std::max(beta_p[i], max_beta_n);
        const double ep = std::exp(beta_p[i] - m);
        double s = 0.0;
        for (std::size_t j = 0; j < n_n; ++j) s += std::exp(beta_n[j] - m);
        const double denom = ep + s;
        loss += -(beta_p[i] - m - std::log(denom));

        const double dl_dbeta_p = -inv_np * (s / denom);
        if (!batch.positives[i].stop_grad && dist_p[i] > 1e-12) {
            grad_p.row(static_cast<Eigen::Index>(i)) =
                dl_dbeta_p * (-inv_tau / dist_p[i]) *
                (batch.positives[i].v - batch.reference).transpose();
        }
        for (std::size_t j = 0; j < n_n; ++j) {
            dl_dbeta_n[j] += inv_np * std::exp(beta_n[j] - m) / denom;
        }
    }
    for (std::size_t j = 0; j < n_n; ++j) {
        if (!batch.negatives[j].stop_grad && dist_n[j] > 1e-12) {
            grad_n.row(static_cast<Eigen::Index>(j)) =
                dl_dbeta_n[j] * (-inv_tau / dist_n[j]) *
                (batch.negatives[j].v - batch.reference).transpose();
        }
    }

    out.value = loss * inv_np;
    out.gradients["positives"] = std::move(grad_p);
    out.gradients["negatives"] = std::move(grad_n);
    return out;
}

std::pair<std::vector<ContrastSample>, std::vector<ContrastSample>> anchor_augment(
    const std::vector<ContrastSample>& c_plus, const std::vector<ContrastSample>& c_minus,
    const AnchorPair& anchors) {
    if (!anchors.positive.allFinite() || !anchors.negative.allFinite()) {
        throw std::invalid_argument("anchor_augment: non-finite anchors");
    }
    auto plus = c_plus;
    auto minus = c_minus;
    plus.push_back({anchors.positive, true, -1, -1});
    minus.push_back({anchors.negative, true, -1, -1});
    return {std::move(plus), std::move(minus)};
}

LossValue corr_loss_on_matches(const FeatureField& student_p, const FeatureField& student_q,
                               const CorrespondenceSet& student_matches, const PseudoLabel& label,
                               std::size_t n_p, std::uint64_t rng_seed, double temperature) {
    if (student_matches.empty()) {
        throw RejectedBatchError("corr_loss: student produced no matches");
    }
    if (n_p < 1) throw std::invalid_argument("corr_loss: n_p must be >= 1");

    std::set<std::pair<std::int32_t, std::int32_t>> teacher_pairs;
    for (const auto& c : label.dense.pairs) teacher_pairs.emplace(c.i, c.j);

    std::vector<ContrastSample> pos, neg;
    for (const auto& c : student_matches.pairs) {
        ContrastSample s;
        s.v = (student_p.vectors.row(c.i) - student_q.vectors.row(c.j)).transpose();
        s.i = c.i;
        s.j = c.j;
        if (teacher_pairs.count({c.i, c.j}))
            pos.push_back(std::move(s));
        else
            neg.push_back(std::move(s));
    }
    auto [aug_pos, aug_neg] = anchor_augment(pos, neg, label.anchors);

    // Sample without replacement, capped at the population.
    std::mt19937_64 rng(rng_seed);
    auto sample = [&rng](std::vector<ContrastSample>& from, std::size_t k) {
        if (from.size() <= k) return std::move(from);
        std::vector<ContrastSample> out;
        out.reserve(k);
        std::sample(from.begin(), from.end(), std::back_inserter(out), k, rng);
        return out;
    };

    ContrastBatch batch;
    batch.positives = sample(aug_pos, n_p);
    batch.negatives = sample(aug_neg, n_p);  // n_n defaults to n_p
    batch.reference = label.anchors.positive;
    batch.temperature = temperature;

    const LossValue nce = info_nce(batch);

    LossValue out;
    out.value = nce.value;
    Eigen::MatrixXd gp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(student_p.count()),
                                               student_p.dim());
    Eigen::MatrixXd gq = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(student_q.count()),
                                               student_q.dim());
    auto scatter = [&](const std::vector<ContrastSample>& samples, const Eigen::MatrixXd& grads) {
        for (std::size_t k = 0; k < samples.size(); ++k) {
            const auto& s = samples[k];
            if (s.stop_grad || s.i < 0) continue;
            gp.row(s.i) += grads.row(static_cast<Eigen::Index>(k));
            gq.row(s.j) -= grads.row(static_cast<Eigen::Index>(k));
        }
    };
    scatter(batch.positives, nce.gradients.at("positives"));
    scatter(batch.negatives, nce.gradients.at("negatives"));
    out.gradients["feats_p"] = std::move(gp);
    out.gradients["feats_q"] = std::move(gq);
    return out;
}

LossValue corr_loss(const FeatureField& student_p, const FeatureField& student_q,
                    const PseudoLabel& label, std::size_t n_p, std::uint64_t rng_seed,
                    double temperature) {
    const CorrespondenceSet matches = match_features(student_p, student_q, MatchMode::Mutual);
    return corr_loss_on_matches(student_p, student_q, matches, label, n_p, rng_seed, temperature);
}

LossValue registration_loss(const FeatureField& student_p, const FeatureField& student_q,
                            const CorrespondenceSet& dense_corrs, double margin_pos,
                            double margin_neg) {
    if (dense_corrs.empty()) throw std::invalid_argument("registration_loss: empty correspondences");
    const std::size_t n = dense_corrs.size();
    const int dim = student_p.dim();
    if (dim != student_q.dim()) throw std::invalid_argument("registration_loss: dim mismatch");

    LossValue out;
    Eigen::MatrixXd gp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(student_p.count()), dim);
    Eigen::MatrixXd gq = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(student_q.count()), dim);

    const double inv_n = 1.0 / static_cast<double>(n);
    double loss = 0.0;

    // Positive: pull matched pairs within margin_pos.
    for (const auto& c : dense_corrs.pairs) {
        const Eigen::VectorXd d = (student_p.vectors.row(c.i) - student_q.vectors.row(c.j)).transpose();
        const double dist = d.norm();
        const double gap = dist - margin_pos;
        if (gap > 0.0 && dist > 1e-12) {
            loss += inv_n * gap * gap;
            const Eigen::VectorXd g = inv_n * 2.0 * gap / dist * d;
            gp.row(c.i) += g.transpose();
            gq.row(c.j) -= g.transpose();
        }
    }

    // Negative: push each endpoint's hardest non-match beyond margin_neg.
    if (n > 1) {
        for (std::size_t k = 0; k < n; ++k) {
            const auto& ck = dense_corrs.pairs[k];
            // hardest Q-side non-match for p_{i_k}, then symmetric.
            for (int side = 0; side < 2; ++side) {
                double best = std::numeric_limits<double>::infinity();
                std::size_t best_l = n;
                for (std::size_t l = 0; l < n; ++l) {
                    if (l == k) continue;
                    const auto& cl = dense_corrs.pairs[l];
                    const double d =
                        side == 0
                            ? (student_p.vectors.row(ck.i) - student_q.vectors.row(cl.j)).norm()
                            : (student_q.vectors.row(ck.j) - student_p.vectors.row(cl.i)).norm();
                    if (d < best) {
                        best = d;
                        best_l = l;
                    }
                }
                const double gap = margin_neg - best;
                if (best_l < n && gap > 0.0 && best > 1e-12) {
                    loss += inv_n * 0.5 * gap * gap;
                    const auto& cl = dense_corrs.pairs[best_l];
                    if (side == 0) {
                        const Eigen::VectorXd d =
                            (student_p.vectors.row(ck.i) - student_q.vectors.row(cl.j)).transpose();
                        const Eigen::VectorXd g = -inv_n * gap / best * d;  // 0.5 * 2 = 1
                        gp.row(ck.i) += g.transpose();
                        gq.row(cl.j) -= g.transpose();
                    } else {
                        const Eigen::VectorXd d =
                            (student_q.vectors.row(ck.j) - student_p.vectors.row(cl.i)).transpose();
                        const Eigen::VectorXd g = -inv_n * gap / best * d;
                        gq.row(ck.j) += g.transpose();
                        gp.row(cl.i) -= g.transpose();
                    }
                }
            }
        }
    }

    out.value = loss;
    out.gradients["feats_p"] = std::move(gp);
    out.gradients["feats_q"] = std::move(gq);
    return out;
}

LossValue total_loss(const ContrastTerms& dense, const ContrastTerms& sparse, double lambda_corr,
                     double lambda_1) {
    if (lambda_corr < 0.0 || lambda_1 < 0.0) {
        throw std::invalid_argument("total_loss: weights must be nonnegative");
    }
    LossValue out;
    out.value = dense.reg.value + lambda_corr * dense.corr.value +
                lambda_1 * (sparse.reg.value + lambda_corr * sparse.corr.value);

    auto accumulate = [&out](const LossValue& term, const std::string& prefix, double scale) {
        for (const auto& [key, grad] : term.gradients) {
            const std::string name = prefix + key;
            auto it = out.gradients.find(name);
            if (it == out.gradients.end())
                out.gradients[name] = scale * grad;
            else
                it->second += scale * grad;
        }
    };
    accumulate(dense.reg, "dense:", 1.0);
    accumulate(dense.corr, "dense:", lambda_corr);
    accumulate(sparse.reg, "sparse:", lambda_1);
    accumulate(sparse.corr, "sparse:", lambda_1 * lambda_corr);
    return out;
}

}  // namespace pcreg
