#include "pcreg/features/matching.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "pcreg/kern/kernels.hpp"

namespace pcreg {

double feature_sq_dist(const FeatureField& f_p, const FeatureField& f_q, std::int32_t i,
                       std::int32_t j) {
    return kern::active().l2sqr(f_p.row_ptr(static_cast<std::size_t>(i)),
                                f_q.row_ptr(static_cast<std::size_t>(j)),
                                static_cast<std::size_t>(f_p.dim()));
}

namespace {

struct Compact {
    RowMatrixXd rows;
    std::vector<std::int32_t> index;  // compact row -> original row
};

Compact gather_valid(const FeatureField& f) {
    Compact c;
    c.index.reserve(f.count());
    for (std::size_t i = 0; i < f.count(); ++i) {
        if (f.is_valid_row(i)) c.index.push_back(static_cast<std::int32_t>(i));
    }
    c.rows.resize(static_cast<Eigen::Index>(c.index.size()), f.vectors.cols());
    for (std::size_t r = 0; r < c.index.size(); ++r) {
        c.rows.row(static_cast<Eigen::Index>(r)) = f.vectors.row(c.index[r]);
    }
    return c;
}

}  // namespace

CorrespondenceSet match_features(const FeatureField& f_p, const FeatureField& f_q, MatchMode mode,
                                 std::size_t max_pairs) {
    CorrespondenceSet out;
    out.n_source = static_cast<std::int64_t>(f_p.count());
    out.n_target = static_cast<std::int64_t>(f_q.count());
    if (f_p.count() == 0 || f_q.count() == 0) return out;
    if (f_p.dim() != f_q.dim()) throw std::invalid_argument("match_features: feature dims differ");

    const Compact cp = gather_valid(f_p);
    const Compact cq = gather_valid(f_q);
    if (cp.index.empty() || cq.index.empty()) return out;

    const auto& k = kern::active();
    const std::size_t dim = static_cast<std::size_t>(f_p.dim());
    const std::size_t np = cp.index.size(), nq = cq.index.size();

    std::vector<std::size_t> fwd(np);
    std::vector<double> fwd_d(np);
    for (std::size_t a = 0; a < np; ++a) {
        fwd[a] = k.argmin_l2sqr(cp.rows.data() + a * dim, cq.rows.data(), nq, dim, &fwd_d[a]);
    }

    struct Cand {
        double d;
        std::int32_t i, j;
    };
    std::vector<Cand> cands;
    if (mode == MatchMode::NearestNeighbor) {
        cands.reserve(np);
        for (std::size_t a = 0; a < np; ++a) {
            cands.push_back({fwd_d[a], cp.index[a], cq.index[fwd[a]]});
        }
    } else {
        std::vector<std::size_t> bwd(nq);
        for (std::size_t b = 0; b < nq; ++b) {
            bwd[b] = k.argmin_l2sqr(cq.rows.data() + b * dim, cp.rows.data(), np, dim, nullptr);
        }
        for (std::size_t a = 0; a < np; ++a) {
            if (bwd[fwd[a]] == a) cands.push_back({fwd_d[a], cp.index[a], cq.index[fwd[a]]});
        }
    }

    if (cands.size() > max_pairs) {
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            return std::tie(a.d, a.i, a.j) < std::tie(b.d, b.i, b.j);
        });
        cands.resize(max_pairs);
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            return std::tie(a.i, a.j) < std::tie(b.i, b.j);
        });
    }

    out.pairs.reserve(cands.size());
    for (const auto& c : cands) out.pairs.push_back({c.i, c.j, CorrLabel::Unclassified});
    return out;
}

RowMatrixXd correspondence_features(const FeatureField& f_p, const FeatureField& f_q,
                                    const CorrespondenceSet& corrs) {
    if (f_p.dim() != f_q.dim()) {
        throw std::invalid_argument("correspondence_features: feature dims differ");
    }
    RowMatrixXd out(static_cast<Eigen::Index>(corrs.size()), f_p.dim());
    for (std::size_t k = 0; k < corrs.size(); ++k) {
        const auto& c = corrs.pairs[k];
        if (c.i < 0 || static_cast<std::size_t>(c.i) >= f_p.count() || c.j < 0 ||
            static_cast<std::size_t>(c.j) >= f_q.count()) {
            throw std::invalid_argument("correspondence_features: index out of bounds");
        }
        out.row(static_cast<Eigen::Index>(k)) = f_p.vectors.row(c.i) - f_q.vectors.row(c.j);
    }
    return out;
}

}  // namespace pcreg
