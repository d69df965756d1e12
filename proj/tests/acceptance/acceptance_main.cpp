// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// fail. Library criteria run in-process; the command-line criteria drive the
// pcreg binary passed via --bin.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include "pcreg/compat/compatibility.hpp"
#include "pcreg/compat/estimator.hpp"
#include "pcreg/core/errors.hpp"
#include "pcreg/features/descriptor.hpp"
#include "pcreg/features/matching.hpp"
#include "pcreg/geometry/kabsch.hpp"
#include "pcreg/geometry/sampling.hpp"
#include "pcreg/geometry/synthetic.hpp"
#include "pcreg/io/scan_io.hpp"
#include "pcreg/losses/losses.hpp"
#include "pcreg/losses/training.hpp"
#include "pcreg/metrics/metrics.hpp"
#include "pcreg/mining/mining.hpp"
#include "../support/test_scene.hpp"

namespace fs = std::filesystem;
using namespace pcreg;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_bin;  // pcreg binary path
int g_failures = 0;

void report(const std::string& name, bool pass, const std::string& detail, double seconds) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), "[%s] %-28s %s (%.1f s)", pass ? "PASS" : "FAIL", name.c_str(),
                  detail.c_str(), seconds);
    std::cout << buf << std::endl;
    if (!pass) ++g_failures;
}

void run_criterion(const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
    const auto t0 = Clock::now();
    bool pass = false;
    std::string detail;
    try {
        auto [p, d] = fn();
        pass = p;
        detail = d;
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    report(name, pass, detail, std::chrono::duration<double>(Clock::now() - t0).count());
}

void parallel_pairs(std::size_t n, const std::function<void(std::size_t)>& fn) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= n) return;
            fn(k);
        }
    };
    std::thread a(worker), b(worker);
    a.join();
    b.join();
}

RigidTransform random_pose(std::mt19937_64& rng, double max_deg, double max_t) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::Vector3d axis(g(rng), g(rng), g(rng));
    while (axis.norm() < 1e-9) axis = {g(rng), g(rng), g(rng)};
    axis.normalize();
    RigidTransform t;
    t.rotation = axis_angle_rotation(axis, u(rng) * max_deg * M_PI / 180.0);
    Eigen::Vector3d dir(g(rng), g(rng), g(rng));
    t.translation = dir.normalized() * (u(rng) * max_t);
    return t;
}

// ---------------------------------------------------------------------------
// 1. Pose-recovery exactness: 1000 noiseless correspondence sets.
std::pair<bool, std::string> pose_recovery_exactness() {
    const auto t0 = Clock::now();
    double worst_rre = 0.0, worst_rte = 0.0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-10.0, 10.0);
        const RigidTransform truth = random_pose(rng, 180.0, 20.0);
        const std::size_t n = 3 + seed % 48;
        std::vector<Eigen::Vector3d> src, dst;
        for (std::size_t k = 0; k < n; ++k) {
            const Eigen::Vector3d p(u(rng), u(rng), u(rng));
            src.push_back(p);
            dst.push_back(truth(p));
        }
        const RigidTransform est = kabsch(src, dst);
        worst_rre = std::max(worst_rre, rre(est, truth));
        worst_rte = std::max(worst_rte, rte(est, truth));
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    char buf[256];
    std::snprintf(buf, sizeof(buf), "1000 trials, max RRE %.2e deg, max RTE %.2e m", worst_rre,
                  worst_rte);
    return {worst_rre < 1e-6 && worst_rte < 1e-9 && secs < 5.0, buf};
}

// ---------------------------------------------------------------------------
// 2. Second-order consensus equals the exhaustive max-consistent subset.
std::pair<bool, std::string> sc2_oracle_equivalence() {
    const auto t0 = Clock::now();
    const double tau = 0.6;
    int tested = 0, agreed = 0;
    for (std::uint64_t seed = 0; tested < 200; ++seed) {
        std::mt19937_64 rng(40000 + seed);
        std::uniform_real_distribution<double> u(-15.0, 15.0);
        const RigidTransform truth = random_pose(rng, 60.0, 8.0);
        const std::size_t n_in = 3 + seed % 5;   // 3..7
        const std::size_t n_out = 2 + seed % 4;  // 2..5 -> N <= 12
        PointCloud p, q;
        for (std::size_t k = 0; k < n_in; ++k) {
            const Eigen::Vector3d pt(u(rng), u(rng), u(rng));
            p.add(pt);
            q.add(truth(pt));
        }
        for (std::size_t k = 0; k < n_out; ++k) {
            p.add({u(rng), u(rng), u(rng)});
            q.add({u(rng), u(rng), u(rng)});
        }
        CorrespondenceSet corrs;
        corrs.n_source = static_cast<std::int64_t>(p.size());
        corrs.n_target = static_cast<std::int64_t>(q.size());
        for (std::size_t k = 0; k < p.size(); ++k) {
            corrs.pairs.push_back({static_cast<std::int32_t>(k), static_cast<std::int32_t>(k),
                                   CorrLabel::Unclassified});
        }
        const std::size_t n = corrs.size();
        const Eigen::MatrixXd compat = first_order_compat(p, q, corrs, tau).values;
        std::size_t best_mask = 0, best_size = 0, best_count = 0;
        for (std::size_t mask = 1; mask < (1ull << n); ++mask) {
            const std::size_t size = static_cast<std::size_t>(__builtin_popcountll(mask));
            if (size < best_size) continue;
            bool ok = true;
            for (std::size_t a = 0; a < n && ok; ++a) {
                if (!(mask >> a & 1)) continue;
                for (std::size_t b = a + 1; b < n && ok; ++b) {
                    if ((mask >> b & 1) && compat(static_cast<Eigen::Index>(a),
                                                  static_cast<Eigen::Index>(b)) == 0.0) {
                        ok = false;
                    }
                }
            }
            if (!ok) continue;
            if (size > best_size) {
                best_size = size;
                best_mask = mask;
                best_count = 1;
            } else {
                ++best_count;
            }
        }
        if (best_count != 1 || best_size < 3) continue;  // oracle requires a unique optimum
        ++tested;
        try {
            const EstimatorVerdict v = sc2_filter(p, q, corrs, tau, 20);
            bool same = true;
            for (std::size_t k = 0; k < n; ++k) {
                if ((v.inlier_flags[k] != 0) != ((best_mask >> k & 1) != 0)) same = false;
            }
            agreed += same ? 1 : 0;
        } catch (const EstimatorFailedError&) {
        }
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d/200 instances agree with the exhaustive optimum", agreed);
    return {agreed >= 190 && secs < 30.0, buf};
}

// ---------------------------------------------------------------------------
// 3. Clustering trace conformance on a fixed 30-correspondence instance.
struct TraceInstance {
    PointCloud p, q;
    FeatureField fp, fq;
    CorrespondenceSet c0;
};

TraceInstance make_trace_instance(std::uint64_t seed) {
    const int dim = 8;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    std::normal_distribution<double> g(0.0, 1.0);
    RigidTransform truth;
    truth.rotation = axis_angle_rotation({0, 0, 1}, 0.35);
    truth.translation = {1.5, -0.8, 0.4};

    TraceInstance inst;
    Eigen::VectorXd anchor_dir = Eigen::VectorXd::Zero(dim);
    anchor_dir(0) = 1.0;

    auto separated_point = [&]() {
        for (;;) {
            const Eigen::Vector3d cand(u(rng), u(rng), u(rng));
            bool ok = true;
            for (std::size_t i = 0; i < inst.p.size(); ++i) {
                if ((inst.p.point(i) - cand).norm() < 2.0) ok = false;
            }
            if (ok) return cand;
        }
    };

    std::vector<Eigen::VectorXd> fp_rows, fq_rows;
    auto add_pair = [&](bool true_pair, double feat_noise) {
        const Eigen::Vector3d pt = separated_point();
        inst.p.add(pt);
        if (true_pair) {
            inst.q.add(truth(pt));
        } else {
            inst.q.add({u(rng), u(rng), u(rng)});
        }
        Eigen::VectorXd base = Eigen::VectorXd::Zero(dim);
        for (int d = 0; d < dim; ++d) base(d) = g(rng);
        Eigen::VectorXd noise = Eigen::VectorXd::Zero(dim);
        for (int d = 0; d < dim; ++d) noise(d) = feat_noise * g(rng);
        fq_rows.push_back(base);
        fp_rows.push_back(base + anchor_dir + noise);
    };

    // C0: 30 correspondences, 22 true + 8 false.
    for (int k = 0; k < 22; ++k) add_pair(true, 0.05);
    for (int k = 0; k < 8; ++k) add_pair(false, 0.3);
    // Unclassified pool: 40 true pairs in similarity tiers plus 15 liars
    // whose features mimic inliers but whose geometry is wrong.
    for (int k = 0; k < 40; ++k) add_pair(true, 0.08 + 0.15 * (k % 4));
    for (int k = 0; k < 15; ++k) add_pair(false, 0.12);

    inst.fp.vectors.resize(static_cast<Eigen::Index>(fp_rows.size()), dim);
    inst.fq.vectors.resize(static_cast<Eigen::Index>(fq_rows.size()), dim);
    for (std::size_t r = 0; r < fp_rows.size(); ++r) {
        inst.fp.vectors.row(static_cast<Eigen::Index>(r)) = fp_rows[r].transpose();
        inst.fq.vectors.row(static_cast<Eigen::Index>(r)) = fq_rows[r].transpose();
    }
    inst.c0.n_source = static_cast<std::int64_t>(inst.p.size());
    inst.c0.n_target = static_cast<std::int64_t>(inst.q.size());
    for (int k = 0; k < 30; ++k) inst.c0.pairs.push_back({k, k, CorrLabel::Unclassified});
    return inst;
}

// Independent re-derivation of one clustering iteration sequence.
struct RefIteration {
    std::set<std::pair<int, int>> admitted;
    std::map<std::pair<int, int>, CorrLabel> classified;
    std::size_t n_in = 0, n_out = 0;
    Eigen::VectorXd a_plus, a_minus;
};

std::vector<RefIteration> reference_trace(const TraceInstance& inst, std::size_t top_k,
                                          std::size_t max_iters, const EstimatorParams& params) {
    const int dim = inst.fp.dim();
    auto corr_feat = [&](int i, int j) {
        return Eigen::VectorXd((inst.fp.vectors.row(i) - inst.fq.vectors.row(j)).transpose());
    };
    auto mean_anchors = [&](const std::vector<Correspondence>& set, Eigen::VectorXd& a_plus,
                            Eigen::VectorXd& a_minus) {
        Eigen::VectorXd sp = Eigen::VectorXd::Zero(dim), sm = Eigen::VectorXd::Zero(dim);
        std::size_t np = 0, nm = 0;
        for (const auto& c : set) {
            if (c.label == CorrLabel::Inlier) {
                sp += corr_feat(c.i, c.j);
                ++np;
            } else {
                sm += corr_feat(c.i, c.j);
                ++nm;
            }
        }
        if (np > 0 && nm > 0) {
            a_plus = sp / static_cast<double>(np);
            a_minus = sm / static_cast<double>(nm);
        }
    };
    auto sim = [&](const Eigen::VectorXd& anchor, const Eigen::VectorXd& f) {
        const double d_e = 1.0 - std::min((anchor - f).norm(), 1.0);
        const double na = anchor.norm(), nf = f.norm();
        double d_c = 0.5;
        if (na >= 1e-12 && nf >= 1e-12) {
            d_c = (std::clamp(anchor.dot(f) / (na * nf), -1.0, 1.0) + 1.0) / 2.0;
        }
        return std::min(d_e, d_c);
    };

    std::vector<Correspondence> classified = inst.c0.pairs;
    CorrespondenceSet work = inst.c0;
    EstimatorVerdict v = sc2_filter(inst.p, inst.q, work, params.tau_c, params.n_seeds);
    for (std::size_t k = 0; k < classified.size(); ++k) {
        classified[k].label = v.inlier_flags[k] ? CorrLabel::Inlier : CorrLabel::Outlier;
    }
    Eigen::VectorXd a_plus = Eigen::VectorXd::Zero(dim), a_minus = Eigen::VectorXd::Zero(dim);
    mean_anchors(classified, a_plus, a_minus);
    auto count = [&](CorrLabel l) {
        std::size_t n = 0;
        for (const auto& c : classified) n += c.label == l ? 1 : 0;
        return n;
    };
    std::size_t prev_in = count(CorrLabel::Inlier), prev_out = count(CorrLabel::Outlier);

    std::vector<RefIteration> trace;
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        RefIteration rec;
        std::vector<char> used_p(inst.p.size(), 0), used_q(inst.q.size(), 0);
        for (const auto& c : classified) {
            used_p[static_cast<std::size_t>(c.i)] = 1;
            used_q[static_cast<std::size_t>(c.j)] = 1;
        }
        std::vector<int> up, uq;
        for (std::size_t i = 0; i < inst.p.size(); ++i)
            if (!used_p[i]) up.push_back(static_cast<int>(i));
        for (std::size_t j = 0; j < inst.q.size(); ++j)
            if (!used_q[j]) uq.push_back(static_cast<int>(j));

        // brute-force mutual matching over the unclassified rows
        struct Scored {
            int i, j;
            double s_plus;
        };
        std::vector<Scored> passing;
        for (int pi : up) {
            double best = std::numeric_limits<double>::infinity();
            int best_j = -1;
            for (int qj : uq) {
                const double d = (inst.fp.vectors.row(pi) - inst.fq.vectors.row(qj)).squaredNorm();
                if (d < best) {
                    best = d;
                    best_j = qj;
                }
            }
            if (best_j < 0) continue;
            double best_back = std::numeric_limits<double>::infinity();
            int best_i = -1;
            for (int pi2 : up) {
                const double d =
                    (inst.fq.vectors.row(best_j) - inst.fp.vectors.row(pi2)).squaredNorm();
                if (d < best_back) {
                    best_back = d;
                    best_i = pi2;
                }
            }
            if (best_i != pi) continue;
            const Eigen::VectorXd f = corr_feat(pi, best_j);
            const double s_plus = sim(a_plus, f);
            const double s_minus = sim(a_minus, f);
            if (s_plus > s_minus) passing.push_back({pi, best_j, s_plus});
        }
        std::sort(passing.begin(), passing.end(), [](const Scored& a, const Scored& b) {
            if (a.s_plus != b.s_plus) return a.s_plus > b.s_plus;
            return std::tie(a.i, a.j) < std::tie(b.i, b.j);
        });
        if (passing.size() > top_k) passing.resize(top_k);
        for (const auto& s : passing) rec.admitted.insert({s.i, s.j});

        if (passing.empty()) {
            for (const auto& c : classified) rec.classified[{c.i, c.j}] = c.label;
            rec.n_in = prev_in;
            rec.n_out = prev_out;
            rec.a_plus = a_plus;
            rec.a_minus = a_minus;
            trace.push_back(std::move(rec));
            break;
        }

        for (const auto& s : passing) classified.push_back({s.i, s.j, CorrLabel::Unclassified});
        work.pairs = classified;
        v = sc2_filter(inst.p, inst.q, work, params.tau_c, params.n_seeds);
        for (std::size_t k = 0; k < classified.size(); ++k) {
            classified[k].label = v.inlier_flags[k] ? CorrLabel::Inlier : CorrLabel::Outlier;
        }
        mean_anchors(classified, a_plus, a_minus);

        for (const auto& c : classified) rec.classified[{c.i, c.j}] = c.label;
        rec.n_in = count(CorrLabel::Inlier);
        rec.n_out = count(CorrLabel::Outlier);
        rec.a_plus = a_plus;
        rec.a_minus = a_minus;
        const bool converged = rec.n_in == prev_in || rec.n_out == prev_out;
        prev_in = rec.n_in;
        prev_out = rec.n_out;
        trace.push_back(std::move(rec));
        if (converged) break;
    }
    return trace;
}

std::pair<bool, std::string> trace_conformance() {
    const TraceInstance inst = make_trace_instance(61);  // runs three full iterations
    ClusteringConfig config;
    config.top_k = 7;
    config.max_iters = 3;
    EstimatorParams params;
    const SecondOrderConsensus estimator;

    const ClusteringResult got = feature_geometry_clustering(inst.p, inst.q, inst.fp, inst.fq,
                                                             inst.c0, config, estimator, params);
    const std::vector<RefIteration> want =
        reference_trace(inst, config.top_k, config.max_iters, params);

    if (got.history.size() != 3 || want.size() != 3) {
        return {false, "instance did not run 3 iterations (impl " +
                           std::to_string(got.history.size()) + ", ref " +
                           std::to_string(want.size()) + ")"};
    }
    for (std::size_t it = 0; it < 3; ++it) {
        const auto& g = got.history[it];
        const auto& w = want[it];
        std::set<std::pair<int, int>> got_admitted;
        for (const auto& c : g.admitted) got_admitted.insert({c.i, c.j});
        if (got_admitted != w.admitted) {
            return {false, "admitted set differs at iteration " + std::to_string(it + 1)};
        }
        std::map<std::pair<int, int>, CorrLabel> got_classified;
        for (const auto& c : g.classified) got_classified[{c.i, c.j}] = c.label;
        if (got_classified != w.classified) {
            return {false, "partition differs at iteration " + std::to_string(it + 1)};
        }
        if (g.n_inliers != w.n_in || g.n_outliers != w.n_out) {
            return {false, "counts differ at iteration " + std::to_string(it + 1)};
        }
        if ((g.anchors.positive - w.a_plus).cwiseAbs().maxCoeff() > 1e-12 ||
            (g.anchors.negative - w.a_minus).cwiseAbs().maxCoeff() > 1e-12) {
            return {false, "anchors differ at iteration " + std::to_string(it + 1)};
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "3 iterations, %zu admissions, final %zu inliers",
                  want[0].admitted.size() + want[1].admitted.size() + want[2].admitted.size(),
                  got.inliers.size());
    return {true, buf};
}

// ---------------------------------------------------------------------------
// 4. Gradient correctness: finite differences at 1e-4 relative, anchors zero.
// Relative error between the analytic gradient and central differences at
// h = 1e-5, as the norm ratio ||num - ana|| / max(||num||, ||ana||).
double fd_worst_rel(const std::function<double(const Eigen::MatrixXd&)>& f,
                    const Eigen::MatrixXd& at, const Eigen::MatrixXd& analytic, double h = 1e-5) {
    Eigen::MatrixXd numeric = Eigen::MatrixXd::Zero(at.rows(), at.cols());
    for (Eigen::Index r = 0; r < at.rows(); ++r) {
        for (Eigen::Index c = 0; c < at.cols(); ++c) {
            Eigen::MatrixXd plus = at, minus = at;
            plus(r, c) += h;
            minus(r, c) -= h;
            numeric(r, c) = (f(plus) - f(minus)) / (2.0 * h);
        }
    }
    const double scale = std::max({numeric.norm(), analytic.norm(), 1e-12});
    return (numeric - analytic).norm() / scale;
}

std::pair<bool, std::string> gradient_correctness() {
    double worst_nce = 0.0, worst_reg = 0.0, worst_total = 0.0;
    bool anchors_zero = true;

    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        std::mt19937_64 rng(50000 + trial);
        std::normal_distribution<double> g(0.0, 1.0);

        // InfoNCE with anchor-augmented classes
        {
            const int dim = 4;
            ContrastBatch batch;
            batch.temperature = 0.15;
            batch.reference = Eigen::VectorXd::NullaryExpr(dim, [&](Eigen::Index) { return g(rng); });
            std::vector<ContrastSample> pos(2), neg(3);
            for (auto& s : pos) s.v = Eigen::VectorXd::NullaryExpr(dim, [&](Eigen::Index) { return g(rng); });
            for (auto& s : neg) s.v = Eigen::VectorXd::NullaryExpr(dim, [&](Eigen::Index) { return g(rng); });
            AnchorPair anchors;
            anchors.positive = batch.reference;
            anchors.negative = Eigen::VectorXd::NullaryExpr(dim, [&](Eigen::Index) { return g(rng); });
            auto [aug_p, aug_n] = anchor_augment(pos, neg, anchors);
            batch.positives = aug_p;
            batch.negatives = aug_n;
            const LossValue base = info_nce(batch);
            const Eigen::MatrixXd& gp = base.gradients.at("positives");
            const Eigen::MatrixXd& gn = base.gradients.at("negatives");
            if (gp.row(gp.rows() - 1).cwiseAbs().maxCoeff() != 0.0) anchors_zero = false;
            if (gn.row(gn.rows() - 1).cwiseAbs().maxCoeff() != 0.0) anchors_zero = false;

            Eigen::MatrixXd pos_mat(2, dim);
            for (int i = 0; i < 2; ++i) pos_mat.row(i) = batch.positives[static_cast<std::size_t>(i)].v.transpose();
            worst_nce = std::max(
                worst_nce,
                fd_worst_rel(
                    [&](const Eigen::MatrixXd& m) {
                        ContrastBatch b = batch;
                        for (int i = 0; i < 2; ++i) b.positives[static_cast<std::size_t>(i)].v = m.row(i).transpose();
                        return info_nce(b).value;
                    },
                    pos_mat, gp.topRows(2)));
            Eigen::MatrixXd neg_mat(3, dim);
            for (int i = 0; i < 3; ++i) neg_mat.row(i) = batch.negatives[static_cast<std::size_t>(i)].v.transpose();
            worst_nce = std::max(
                worst_nce,
                fd_worst_rel(
                    [&](const Eigen::MatrixXd& m) {
                        ContrastBatch b = batch;
                        for (int i = 0; i < 3; ++i) b.negatives[static_cast<std::size_t>(i)].v = m.row(i).transpose();
                        return info_nce(b).value;
                    },
                    neg_mat, gn.topRows(3)));
        }

        // Hardest-contrastive registration loss
        {
            const int n_pts = 6, dim = 4;
            Eigen::MatrixXd mp(n_pts, dim), mq(n_pts, dim);
            for (int i = 0; i < n_pts; ++i)
                for (int d = 0; d < dim; ++d) {
                    mp(i, d) = g(rng);
                    mq(i, d) = g(rng);
                }
            CorrespondenceSet corrs;
            corrs.n_source = n_pts;
            corrs.n_target = n_pts;
            for (int i = 0; i < 4; ++i) corrs.pairs.push_back({i, i, CorrLabel::Inlier});
            FeatureField fp, fq;
            fp.vectors = mp;
            fq.vectors = mq;
            const LossValue base = registration_loss(fp, fq, corrs, 0.3, 1.2);
            worst_reg = std::max(worst_reg, fd_worst_rel(
                                                [&](const Eigen::MatrixXd& m) {
                                                    FeatureField f;
                                                    f.vectors = m;
                                                    return registration_loss(f, fq, corrs, 0.3, 1.2).value;
                                                },
                                                mp, base.gradients.at("feats_p")));
        }

        // Weighted aggregate of both loss families (dense + sparse terms)
        {
            const int n_pts = 6, dim = 4;
            Eigen::MatrixXd mp(n_pts, dim), mq(n_pts, dim);
            for (int i = 0; i < n_pts; ++i)
                for (int d = 0; d < dim; ++d) {
                    mp(i, d) = g(rng);
                    mq(i, d) = g(rng);
                }
            FeatureField fp, fq;
            fp.vectors = mp;
            fq.vectors = mq;
            PseudoLabel label;
            label.dense.n_source = n_pts;
            label.dense.n_target = n_pts;
            for (int i = 0; i < 4; ++i) label.dense.pairs.push_back({i, i, CorrLabel::Inlier});
            label.anchors.positive = Eigen::VectorXd::Constant(dim, 0.2);
            label.anchors.negative = Eigen::VectorXd::Constant(dim, -0.3);
            const CorrespondenceSet matches = match_features(fp, fq, MatchMode::Mutual);
            const double lc = 0.7, l1 = 0.4;
            auto total_of = [&](const FeatureField& a, const FeatureField& b) {
                ContrastTerms dense, sparse;
                dense.reg = registration_loss(a, b, label.dense, 0.3, 1.2);
                dense.corr = corr_loss_on_matches(a, b, matches, label, 4, trial, 0.15);
                sparse.reg = dense.reg;   // same fields stand in for the sparse views
                sparse.corr = dense.corr;
                return total_loss(dense, sparse, lc, l1);
            };
            const LossValue base = total_of(fp, fq);
            const Eigen::MatrixXd analytic =
                base.gradients.at("dense:feats_p") + base.gradients.at("sparse:feats_p");
            worst_total = std::max(worst_total, fd_worst_rel(
                                                    [&](const Eigen::MatrixXd& m) {
                                                        FeatureField f;
                                                        f.vectors = m;
                                                        return total_of(f, fq).value;
                                                    },
                                                    mp, analytic));
        }
    }

    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "worst rel err: info_nce %.1e, reg %.1e, aggregate %.1e; anchors %s", worst_nce,
                  worst_reg, worst_total, anchors_zero ? "exactly zero" : "NONZERO");
    return {worst_nce < 1e-4 && worst_reg < 1e-4 && worst_total < 1e-4 && anchors_zero, buf};
}

// ---------------------------------------------------------------------------
// Shared 100-pair benchmark for criteria 5 and 7.
struct BenchmarkRow {
    bool ok = false;
    double seed_ir = 0.0, pass1_ir = 0.0, final_ir = 0.0;
};

std::vector<BenchmarkRow> run_benchmark(const PoseEstimator& estimator) {
    SyntheticPairSpec spec;
    spec.overlap_target = 0.5;
    spec.noise_sigma = 0.01;
    spec.max_rotation_deg = 30.0;
    spec.max_translation_m = 10.0;
    MiningConfig config;
    config.base_voxel = 0.3;
    DescriptorConfig dc;
    const ProjectionHead head = ProjectionHead::near_identity(16, dc.dim(), 12345);

    std::vector<BenchmarkRow> rows(100);
    parallel_pairs(100, [&](std::size_t k) {
        const PointCloud scan = make_test_scene(7000 + k, 6500, 12.0);
        SyntheticPair pair;
        try {
            pair = make_synthetic_pair(scan, spec, 100 + k);
        } catch (const GenerationFailedError&) {
            return;
        }
        const MixedViews views = build_mixed_density_views(pair.p, pair.q, 0.3, 2.0);
        const FeatureField dp = extract_descriptors(views.p_dense, dc);
        const FeatureField dq = extract_descriptors(views.q_dense, dc);
        EstimatorParams params;
        params.rng_seed = k;
        params.tau_c = 0.45;  // 1.5x the working voxel
        try {
            const MiningOutcome out = mine_pseudo_labels(views.p_dense, views.q_dense, dp, dq,
                                                         head, config, estimator, params);
            rows[k].ok = true;
            rows[k].seed_ir =
                inlier_ratio(out.seeds_pass1, views.p_dense, views.q_dense, pair.t_gt, 0.6);
            rows[k].pass1_ir =
                inlier_ratio(out.pass1_inliers, views.p_dense, views.q_dense, pair.t_gt, 0.6);
            rows[k].final_ir =
                inlier_ratio(out.label.dense, views.p_dense, views.q_dense, pair.t_gt, 0.6);
        } catch (const MiningFailedError&) {
        }
    });
    return rows;
}

double g_soc_mean_final = -1.0;  // stashed for the agnosticism criterion

std::pair<bool, std::string> mining_improvement() {
    const auto t0 = Clock::now();
    const SecondOrderConsensus estimator;
    const std::vector<BenchmarkRow> rows = run_benchmark(estimator);
    std::size_t ok = 0, ge = 0;
    double seed_sum = 0.0, final_sum = 0.0;
    for (const auto& r : rows) {
        if (!r.ok) continue;
        ++ok;
        seed_sum += r.seed_ir;
        final_sum += r.final_ir;
        if (r.final_ir >= r.pass1_ir) ++ge;
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const double mean_seed = seed_sum / static_cast<double>(ok);
    const double mean_final = final_sum / static_cast<double>(ok);
    g_soc_mean_final = mean_final;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "%zu/100 mined, mean IR seed %.3f -> final %.3f (+%.1f pts), pass2>=pass1 %zu/%zu",
                  ok, mean_seed, mean_final, 100.0 * (mean_final - mean_seed), ge, ok);
    const bool pass = ok >= 90 && (mean_final - mean_seed) >= 0.10 &&
                      static_cast<double>(ge) / static_cast<double>(ok) >= 0.80 && secs < 180.0;
    return {pass, buf};
}

std::pair<bool, std::string> estimator_agnosticism() {
    const RansacEstimator estimator;
    const std::vector<BenchmarkRow> rows = run_benchmark(estimator);
    std::size_t ok = 0;
    double final_sum = 0.0;
    for (const auto& r : rows) {
        if (!r.ok) continue;
        ++ok;
        final_sum += r.final_ir;
    }
    const double mean_final = ok > 0 ? final_sum / static_cast<double>(ok) : 0.0;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "mean final IR: consensus %.3f vs ransac %.3f (%zu/100 mined)",
                  g_soc_mean_final, mean_final, ok);
    const bool pass =
        g_soc_mean_final >= 0.0 && ok >= 90 && std::fabs(mean_final - g_soc_mean_final) <= 0.05;
    return {pass, buf};
}

// ---------------------------------------------------------------------------
// 6. Self-adaption pushes planted hard samples away from the positive anchor.
struct Planted {
    PointCloud p, q;
    FeatureField fp, fq;
    CorrespondenceSet c0;
};

Planted make_planted(std::uint64_t seed, int dim = 8, std::size_t n_in = 10) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(-5.0, 5.0);
    std::normal_distribution<double> g(0.0, 1.0);
    Planted inst;
    RigidTransform truth;
    truth.rotation = axis_angle_rotation({0, 0, 1}, 0.4);
    truth.translation = {2.0, -1.0, 0.5};
    Eigen::VectorXd anchor_dir = Eigen::VectorXd::Zero(dim);
    anchor_dir(0) = 1.0;

    auto separated_point = [&]() {
        for (;;) {
            const Eigen::Vector3d cand(u01(rng), u01(rng), u01(rng));
            bool ok = true;
            for (std::size_t i = 0; i < inst.p.size(); ++i) {
                if ((inst.p.point(i) - cand).norm() < 2.0) ok = false;
            }
            if (ok) return cand;
        }
    };

    std::vector<Eigen::VectorXd> fp_rows, fq_rows;
    for (std::size_t k = 0; k < n_in; ++k) {
        const Eigen::Vector3d pt = separated_point();
        inst.p.add(pt);
        inst.q.add(truth(pt));
        Eigen::VectorXd base = Eigen::VectorXd::NullaryExpr(dim, [&](Eigen::Index) { return g(rng); });
        fq_rows.push_back(base);
        fp_rows.push_back(base + anchor_dir);
        inst.c0.pairs.push_back({static_cast<std::int32_t>(k), static_cast<std::int32_t>(k),
                                 CorrLabel::Unclassified});
    }
    const Eigen::Vector3d p_star = separated_point();
    inst.p.add(p_star);
    inst.q.add(truth(p_star) + Eigen::Vector3d(15.0, -12.0, 8.0));
    Eigen::VectorXd base = Eigen::VectorXd::NullaryExpr(dim, [&](Eigen::Index) { return g(rng); });
    fq_rows.push_back(base);
    fp_rows.push_back(base + anchor_dir);

    inst.fp.vectors.resize(static_cast<Eigen::Index>(fp_rows.size()), dim);
    inst.fq.vectors.resize(static_cast<Eigen::Index>(fq_rows.size()), dim);
    for (std::size_t r = 0; r < fp_rows.size(); ++r) {
        inst.fp.vectors.row(static_cast<Eigen::Index>(r)) = fp_rows[r].transpose();
        inst.fq.vectors.row(static_cast<Eigen::Index>(r)) = fq_rows[r].transpose();
    }
    inst.c0.n_source = static_cast<std::int64_t>(inst.p.size());
    inst.c0.n_target = static_cast<std::int64_t>(inst.q.size());
    return inst;
}

std::pair<bool, std::string> adaption_discriminativity() {
    int decreased = 0;
    const int trials = 20;
    for (std::uint64_t seed = 0; seed < trials; ++seed) {
        const Planted inst = make_planted(100 + seed);
        CorrespondenceSet c0 = inst.c0;
        c0.pairs.push_back({0, 1, CorrLabel::Unclassified});  // ensures both classes exist
        ClusteringConfig config;
        config.top_k = 5;
        const SecondOrderConsensus estimator;
        EstimatorParams params;
        const ClusteringResult res = feature_geometry_clustering(inst.p, inst.q, inst.fp, inst.fq,
                                                                 c0, config, estimator, params);
        const CorrespondenceSet hard = mine_hard_samples(res.history, c0.n_source, c0.n_target);
        if (hard.empty() || res.inliers.empty()) continue;

        const ProjectionHead head =
            ProjectionHead::near_identity(inst.fp.dim(), inst.fp.dim(), seed, 0.01);
        AdaptionConfig ac;
        ac.steps = 5;
        ac.lr = 1e-2;
        const AdaptionResult ar =
            per_batch_self_adaption(head, inst.fp, inst.fq, res.inliers, hard, res.anchors, ac);
        auto mean_s_plus = [&](const ProjectionHead& h) {
            const FeatureField pp = project(inst.fp, h);
            const FeatureField pq = project(inst.fq, h);
            double sum = 0.0;
            for (const auto& c : hard.pairs) {
                const Eigen::VectorXd feat = (pp.vectors.row(c.i) - pq.vectors.row(c.j)).transpose();
                sum += anchor_similarity(res.anchors, feat).s_plus;
            }
            return sum / static_cast<double>(hard.size());
        };
        if (ar.adapted && mean_s_plus(ar.head) < mean_s_plus(head)) ++decreased;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "mean S+ of hard samples decreased on %d/%d instances",
                  decreased, trials);
    return {decreased == trials, buf};
}

// ---------------------------------------------------------------------------
// 8. Mixed-density training: lambda_1 = 0.5 vs 0 on a degraded benchmark.
std::pair<bool, std::string> mixed_density_benefit() {
    const double voxel = 0.4;
    const double tau = 0.6;
    SyntheticPairSpec train_spec;
    train_spec.overlap_target = 0.7;
    train_spec.noise_sigma = 0.01;
    train_spec.max_rotation_deg = 20.0;
    train_spec.max_translation_m = 8.0;
    DescriptorConfig dc;
    const ProjectionHead teacher = ProjectionHead::near_identity(16, dc.dim(), 12345);
    const SecondOrderConsensus estimator;

    // Teacher mines the training corpus once.
    const int n_train = 10;
    std::vector<TrainingPair> stream(n_train);
    std::vector<std::uint8_t> usable(n_train, 0);
    parallel_pairs(n_train, [&](std::size_t k) {
        const PointCloud scan = make_test_scene(8200 + k, 4500, 11.0);
        SyntheticPair pair;
        try {
            pair = make_synthetic_pair(scan, train_spec, 300 + k);
        } catch (const GenerationFailedError&) {
            return;
        }
        MixedViews views = build_mixed_density_views(pair.p, pair.q, voxel, 2.0);
        TrainingPair tp;
        tp.pair_id = "train_" + std::to_string(k);
        tp.desc_p_dense = extract_descriptors(views.p_dense, dc);
        tp.desc_q_dense = extract_descriptors(views.q_dense, dc);
        tp.desc_p_sparse = extract_descriptors(views.p_sparse, dc);
        tp.desc_q_sparse = extract_descriptors(views.q_sparse, dc);
        MiningConfig mc;
        mc.base_voxel = voxel;
        EstimatorParams params;
        params.rng_seed = k;
        params.tau_c = tau;
        try {
            const MiningOutcome out =
                mine_pseudo_labels(views.p_dense, views.q_dense, tp.desc_p_dense, tp.desc_q_dense,
                                   teacher, mc, estimator, params);
            tp.label = out.label;
        } catch (const MiningFailedError&) {
            return;
        }
        tp.p_dense = std::move(views.p_dense);
        tp.q_dense = std::move(views.q_dense);
        tp.p_sparse = std::move(views.p_sparse);
        tp.q_sparse = std::move(views.q_sparse);
        tp.has_gt = true;
        tp.t_gt = pair.t_gt;
        stream[k] = std::move(tp);
        usable[k] = 1;
    });
    std::vector<TrainingPair> train_stream;
    for (int k = 0; k < n_train; ++k)
        if (usable[k]) train_stream.push_back(std::move(stream[k]));
    if (train_stream.size() < 6) return {false, "training corpus too small after mining"};

    // Benchmark pairs with distances across the bins; half are registered
    // from density-degraded clouds (2x voxel).
    SyntheticPairSpec bench_spec = train_spec;
    bench_spec.max_translation_m = 45.0;
    struct BenchPair {
        PointCloud p, q;
        RigidTransform t_gt;
        bool ok = false;
    };
    const int n_bench = 8;
    std::vector<BenchPair> bench(n_bench);
    parallel_pairs(n_bench, [&](std::size_t k) {
        const PointCloud scan = make_test_scene(8400 + k, 4500, 11.0);
        try {
            SyntheticPair pair = make_synthetic_pair(scan, bench_spec, 500 + k);
            const double work_voxel = (k % 2 == 0) ? voxel : voxel * 2.0;  // degraded half
            bench[k].p = voxel_downsample(pair.p, work_voxel);
            bench[k].q = voxel_downsample(pair.q, work_voxel);
            bench[k].t_gt = pair.t_gt;
            bench[k].ok = true;
        } catch (const GenerationFailedError&) {
        }
    });

    auto bench_mrr = [&](const ProjectionHead& student) {
        std::vector<MetricsReport> reports(n_bench);
        std::vector<std::uint8_t> have(n_bench, 0);
        parallel_pairs(n_bench, [&](std::size_t k) {
            if (!bench[k].ok) return;
            MetricsReport rep;
            rep.pair_id = std::to_string(k);
            rep.bin = {0.0, 50.0};
            rep.rre_deg = 180.0;
            rep.rte_m = 1e9;
            try {
                const FeatureField dp = extract_descriptors(bench[k].p, dc);
                const FeatureField dq = extract_descriptors(bench[k].q, dc);
                const FeatureField sp = project(dp, student);
                const FeatureField sq = project(dq, student);
                ClusteringConfig cc;
                EstimatorParams params;
                params.rng_seed = k;
                params.tau_c = tau;
                const CorrespondenceSet seeds =
                    cap_seeds(seed_proposals(sp, sq, cc.seed_similarity_threshold), sp, sq,
                              cc.max_seeds);
                const ClusteringResult res = feature_geometry_clustering(
                    bench[k].p, bench[k].q, sp, sq, seeds, cc, estimator, params);
                if (res.inliers.size() >= 3) {
                    std::vector<Eigen::Vector3d> src, dst;
                    for (const auto& c : res.inliers.pairs) {
                        src.push_back(bench[k].p.point(static_cast<std::size_t>(c.i)));
                        dst.push_back(bench[k].q.point(static_cast<std::size_t>(c.j)));
                    }
                    const RigidTransform pose = kabsch(src, dst);
                    rep.rre_deg = rre(pose, bench[k].t_gt);
                    rep.rte_m = rte(pose, bench[k].t_gt);
                }
            } catch (const std::exception&) {
            }
            reports[k] = rep;
            have[k] = 1;
        });
        std::vector<MetricsReport> flat;
        for (int k = 0; k < n_bench; ++k)
            if (have[k]) flat.push_back(reports[k]);
        if (flat.empty()) return 0.0;
        const BenchmarkSummary s = registration_recall(flat, 5.0, 2.0, {{0.0, 50.0}});
        return s.mrr;
    };

    TrainConfig base_config;
    base_config.epochs = 6;
    base_config.lr = 1e-3;
    base_config.n_p = 64;

    int wins = 0;
    std::string per_seed;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ProjectionHead init = ProjectionHead::near_identity(16, dc.dim(), 777 + seed, 0.05);
        TrainConfig with_sparse = base_config;
        with_sparse.lambda_1 = 0.5;
        with_sparse.seed = seed;
        TrainConfig without_sparse = base_config;
        without_sparse.lambda_1 = 0.0;
        without_sparse.seed = seed;
        const ProjectionHead head_a = train_student_head(init, train_stream, with_sparse).head;
        const ProjectionHead head_b = train_student_head(init, train_stream, without_sparse).head;
        const double mrr_a = bench_mrr(head_a);
        const double mrr_b = bench_mrr(head_b);
        if (mrr_a >= mrr_b) ++wins;
        char buf[32];
        std::snprintf(buf, sizeof(buf), " %.2f/%.2f", mrr_a, mrr_b);
        per_seed += buf;
    }
    char buf[256];
    std::snprintf(buf, sizeof(buf), "mixed-density mRR >= plain on %d/10 runs (%s)", wins,
                  per_seed.c_str());
    return {wins >= 7, buf};
}

// ---------------------------------------------------------------------------
// CLI-level criteria.
int run_cmd(const std::string& args, const std::string& log_dir) {
    static int counter = 0;
    const std::string out = log_dir + "/acc_cmd_" + std::to_string(counter++) + ".txt";
    const std::string cmd = g_bin + " " + args + " > " + out + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempTree {
    fs::path root;
    explicit TempTree(const std::string& tag) {
        root = fs::temp_directory_path() / (tag + "_" + std::to_string(::getpid()));
        fs::remove_all(root);
        fs::create_directories(root);
    }
    ~TempTree() { fs::remove_all(root); }
    std::string str(const std::string& sub) const { return (root / sub).string(); }
};

std::pair<bool, std::string> end_to_end_recall() {
    TempTree tmp("pcreg_acc_e2e");
    const std::string scans = tmp.str("scans");
    fs::create_directories(scans);
    for (int s = 0; s < 3; ++s) {
        write_kitti_bin(scans + "/scan_" + std::to_string(s) + ".bin",
                        make_test_scene(12000 + static_cast<std::uint64_t>(s), 6500, 12.0));
    }
    const std::string corpus = tmp.str("corpus");
    if (run_cmd("--seed 11 --out " + corpus + " --overlap 0.8 --noise-sigma 0 --max-rot 30 "
                "--max-trans 50 synth --scans " + scans + " --count 100",
                tmp.str("")) != 0) {
        return {false, "synth failed"};
    }
    const std::string bench = tmp.str("bench");
    if (run_cmd("--seed 11 --jobs 2 --voxel 0.3 --tau-c 0.45 --rre-thresh 5 --rte-thresh 2 "
                "--out " + bench + " bench --corpus " + corpus,
                tmp.str("")) != 0) {
        return {false, "bench failed"};
    }
    const BenchmarkSummary s = summary_from_csv(slurp(bench + "/summary.csv"));
    std::size_t n_binned = 0;
    for (const auto& [bin, n] : s.pairs_per_bin) n_binned += n;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "mRR %.4f over %zu binned pairs (%zu empty bins)", s.mrr,
                  n_binned, s.empty_bins);
    return {s.mrr == 1.0 && n_binned >= 60 && s.empty_bins == 0, buf};
}

std::pair<bool, std::string> command_determinism() {
    TempTree tmp("pcreg_acc_det");
    const std::string scans = tmp.str("scans");
    fs::create_directories(scans);
    for (int s = 0; s < 2; ++s) {
        write_kitti_bin(scans + "/scan_" + std::to_string(s) + ".bin",
                        make_test_scene(13000 + static_cast<std::uint64_t>(s), 6500, 12.0));
    }
    const std::string flags = "--seed 21 --voxel 0.3 --tau-c 0.45 --overlap 0.7 "
                              "--noise-sigma 0.01 --max-rot 25 --max-trans 45 ";

    const std::string c1 = tmp.str("corpus1"), c2 = tmp.str("corpus2");
    if (run_cmd(flags + "--out " + c1 + " synth --scans " + scans + " --count 6", tmp.str("")) != 0 ||
        run_cmd(flags + "--out " + c2 + " synth --scans " + scans + " --count 6", tmp.str("")) != 0) {
        return {false, "synth failed"};
    }
    if (slurp(c1 + "/manifest.txt") != slurp(c2 + "/manifest.txt") ||
        slurp(c1 + "/pair_0003_p.bin") != slurp(c2 + "/pair_0003_p.bin")) {
        return {false, "synth outputs differ between reruns"};
    }

    const std::string m1 = tmp.str("mine1"), m2 = tmp.str("mine2");
    if (run_cmd(flags + "--jobs 2 --out " + m1 + " mine --corpus " + c1, tmp.str("")) != 0 ||
        run_cmd(flags + "--jobs 1 --out " + m2 + " mine --corpus " + c1, tmp.str("")) != 0) {
        return {false, "mine failed"};
    }
    if (slurp(m1 + "/mining_report.csv") != slurp(m2 + "/mining_report.csv") ||
        slurp(m1 + "/pair_0000.label") != slurp(m2 + "/pair_0000.label")) {
        return {false, "mine outputs differ between reruns"};
    }

    const std::string b1 = tmp.str("bench1"), b2 = tmp.str("bench2");
    if (run_cmd(flags + "--jobs 2 --out " + b1 + " bench --corpus " + c1, tmp.str("")) != 0 ||
        run_cmd(flags + "--jobs 1 --out " + b2 + " bench --corpus " + c1, tmp.str("")) != 0) {
        return {false, "bench failed"};
    }
    if (slurp(b1 + "/summary.csv") != slurp(b2 + "/summary.csv")) {
        return {false, "bench summaries differ between reruns"};
    }

    const std::string t1 = tmp.str("train1"), t2 = tmp.str("train2");
    if (run_cmd(flags + "--epochs 2 --out " + t1 + " train --corpus " + c1 + " --labels " + m1,
                tmp.str("")) != 0 ||
        run_cmd(flags + "--epochs 2 --out " + t2 + " train --corpus " + c1 + " --labels " + m1,
                tmp.str("")) != 0) {
        return {false, "train failed"};
    }
    if (slurp(t1 + "/student_head.bin") != slurp(t2 + "/student_head.bin")) {
        return {false, "student heads differ between reruns"};
    }
    // training log: wall_ms is a timing field, excluded from the comparison
    auto strip_wall = [](const std::string& csv) {
        std::istringstream in(csv);
        std::string line, out;
        while (std::getline(in, line)) {
            const auto last = line.rfind(',');
            out += (last == std::string::npos ? line : line.substr(0, last)) + "\n";
        }
        return out;
    };
    if (strip_wall(slurp(t1 + "/training_log.csv")) != strip_wall(slurp(t2 + "/training_log.csv"))) {
        return {false, "training logs differ beyond the wall_ms column"};
    }
    return {true, "synth/mine/bench/train reruns byte-identical (wall_ms excluded)"};
}

}  // namespace

int main(int argc, char** argv) {
    std::string only;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--bin" && i + 1 < argc) g_bin = argv[++i];
        if (arg == "--only" && i + 1 < argc) only = argv[++i];
    }
    auto want = [&](const std::string& name) {
        return only.empty() || name.find(only) != std::string::npos;
    };

    if (want("pose-recovery-exactness")) run_criterion("pose-recovery-exactness", pose_recovery_exactness);
    if (want("sc2-oracle-equivalence")) run_criterion("sc2-oracle-equivalence", sc2_oracle_equivalence);
    if (want("clustering-trace-conformance")) run_criterion("clustering-trace-conformance", trace_conformance);
    if (want("gradient-correctness")) run_criterion("gradient-correctness", gradient_correctness);
    if (want("mining-improvement")) run_criterion("mining-improvement", mining_improvement);
    if (want("adaption-discriminativity")) run_criterion("adaption-discriminativity", adaption_discriminativity);
    if (want("estimator-agnosticism")) {
        if (g_soc_mean_final < 0.0) run_criterion("mining-improvement", mining_improvement);
        run_criterion("estimator-agnosticism", estimator_agnosticism);
    }
    if (want("mixed-density-benefit")) run_criterion("mixed-density-benefit", mixed_density_benefit);
    if (g_bin.empty()) {
        if (want("end-to-end-recall") || want("command-determinism")) {
            std::cout << "[SKIP] CLI criteria need --bin <pcreg>" << std::endl;
            ++g_failures;
        }
    } else {
        if (want("end-to-end-recall")) run_criterion("end-to-end-recall", end_to_end_recall);
        if (want("command-determinism")) run_criterion("command-determinism", command_determinism);
    }

    std::cout << (g_failures == 0 ? "ACCEPTANCE: all criteria passed"
                                  : "ACCEPTANCE: " + std::to_string(g_failures) + " criteria failed")
              << std::endl;
    return g_failures == 0 ? 0 : 1;
}
