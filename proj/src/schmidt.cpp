#include "entnorms/schmidt.hpp"

#include "entnorms/random.hpp"
#include "entnorms/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace entnorms {

namespace {

std::vector<int> default_cut(const Ket& v) {
    if (v.shape.factors() != 2)
        throw std::invalid_argument("default cut requires a two-factor ket");
    return {0};
}

}  // namespace

Ket SchmidtDecomposition::reconstruct(int terms) const {
    const int m = grouped_shape.dims[0], n = grouped_shape.dims[1];
    if (terms < 0 || terms > coeffs.size()) terms = static_cast<int>(coeffs.size());
    Vec amps = Vec::Zero(static_cast<long>(m) * n);
    for (int i = 0; i < terms; ++i) amps += coeffs(i) * kron(left[i], right[i]);
    // Back to the fine-grained permuted shape, then undo the regrouping.
    std::vector<int> fine(original_shape.factors());
    for (int t = 0; t < regroup.size(); ++t) fine[t] = original_shape.dims[regroup.map[t]];
    Ket permuted(amps, Shape(fine));
    return permute_ket_factors(permuted, regroup.inverse());
}

SchmidtDecomposition schmidt_decompose(const Ket& v, const std::vector<int>& left_cut) {
    if (v.norm() == 0.0) throw std::invalid_argument("schmidt_decompose: zero vector");
    Regrouped rg = regroup_bipartite(v, left_cut);
    const int m = rg.ket.shape.dims[0], n = rg.ket.shape.dims[1];
    Eigen::JacobiSVD<Mat> svd(reshape_rm(rg.ket.amps, m, n),
                              Eigen::ComputeFullU | Eigen::ComputeFullV);
    SchmidtDecomposition d;
    const int r = std::min(m, n);
    d.coeffs = svd.singularValues().head(r);
    d.left.reserve(r);
    d.right.reserve(r);
    for (int i = 0; i < r; ++i) {
        d.left.push_back(svd.matrixU().col(i));
        d.right.push_back(svd.matrixV().col(i).conjugate());
    }
    d.grouped_shape = rg.ket.shape;
    d.regroup = rg.perm;
    d.original_shape = v.shape;
    return d;
}

SchmidtDecomposition schmidt_decompose(const Ket& v) {
    return schmidt_decompose(v, default_cut(v));
}

int schmidt_rank(const Ket& v, const std::vector<int>& left_cut, double tol) {
    SchmidtDecomposition d = schmidt_decompose(v, left_cut);
    int rank = 0;
    for (int i = 0; i < d.coeffs.size(); ++i)
        if (d.coeffs(i) > tol * d.coeffs(0)) ++rank;
    return std::max(rank, 1);
}

int schmidt_rank(const Ket& v, double tol) {
    return schmidt_rank(v, default_cut(v), tol);
}

SNormValue s_norm(const Ket& v, int k, const std::vector<int>& left_cut) {
    SchmidtDecomposition d = schmidt_decompose(v, left_cut);
    if (k < 1 || k > d.coeffs.size()) throw std::invalid_argument("s_norm: k out of range");
    double sq = 0.0;
    for (int i = 0; i < k; ++i) sq += d.coeffs(i) * d.coeffs(i);
    SNormValue out;
    out.value = std::sqrt(sq);
    Ket trunc = d.reconstruct(k);
    out.witness = Ket(trunc.amps / trunc.norm(), trunc.shape);
    return out;
}

SNormValue s_norm(const Ket& v, int k) { return s_norm(v, k, default_cut(v)); }

Ket truncate_to_rank(const Ket& v, int k) {
    SchmidtDecomposition d = schmidt_decompose(v);
    k = std::min<int>(k, static_cast<int>(d.coeffs.size()));
    return d.reconstruct(k);
}

namespace {

struct SeesawRun {
    double value = 0.0;
    Vec w, y;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;
};

SeesawRun seesaw(const Mat& x, const Shape& shape, int k, Vec y0, int max_iters, double tol) {
    SeesawRun run;
    run.y = y0 / y0.norm();
    run.w = run.y;
    double best = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        Vec u = x * run.y;
        double obj_half = 0.0;
        Vec w_new = run.w;
        if (u.norm() > 1e-300) {
            Ket wt = truncate_to_rank(Ket(u, shape), k);
            obj_half = wt.norm();
            w_new = wt.amps / obj_half;
        }
        Vec u2 = x.adjoint() * w_new;
        double obj = 0.0;
        Vec y_new = run.y;
        if (u2.norm() > 1e-300) {
            Ket yt = truncate_to_rank(Ket(u2, shape), k);
            obj = yt.norm();
            y_new = yt.amps / obj;
        }
        run.iterations = it + 1;
        if (obj <= best) {  // no further improvement (up to fp noise): stop
            run.converged = true;
            break;
        }
        run.w = w_new;
        run.y = y_new;
        const double improvement = obj - best;
        best = obj;
        run.trace.push_back(best);
        if (improvement < tol) {
            run.converged = true;
            break;
        }
    }
    run.value = best;
    return run;
}

}  // namespace

NormResult S_norm(const Opr& x, int k, const SNormOptions& opts) {
    if (x.row_shape.factors() != 2 || x.row_shape != x.col_shape)
        throw std::invalid_argument("S_norm: operator must be square on a two-factor shape");
    const Shape shape = x.row_shape;
    const int m = shape.dims[0], n = shape.dims[1];
    if (k < 1 || k > std::min(m, n)) throw std::invalid_argument("S_norm: k out of range");

    NormResult result;
    const long d = shape.total();
    if (x.entries.norm() == 0.0) {
        Vec e = Vec::Zero(d);
        e(0) = 1.0;
        result.witness_left = result.witness_right = Ket(e, shape);
        result.converged = true;
        result.objective_trace = {0.0};
        return result;
    }

    Eigen::JacobiSVD<Mat> svd(x.entries, Eigen::ComputeFullV);
    double best = -1.0, worst = -1.0;
    SeesawRun best_run;
    for (int r = 0; r < opts.restarts; ++r) {
        Vec y0;
        if (r < opts.restarts / 2) {
            Sampler s(derive_seed(opts.seed, r));
            y0 = s.sr_k_ket(shape, k).amps;
        } else {
            // Seed from top singular vectors of X, truncated to rank k.
            Vec v = svd.matrixV().col((r - opts.restarts / 2) % d);
            y0 = truncate_to_rank(Ket(v, shape), k).amps;
            if (y0.norm() < 1e-300) y0 = v;
        }
        SeesawRun run = seesaw(x.entries, shape, k, y0, opts.max_iters, opts.tol);
        if (run.value > best) {
            best = run.value;
            best_run = run;
        }
        if (worst < 0 || run.value < worst) worst = run.value;
        ++result.restarts_used;
    }
    result.value = best;
    result.witness_left = Ket(best_run.w, shape);
    result.witness_right = Ket(best_run.y, shape);
    result.iterations = best_run.iterations;
    result.converged = best_run.converged;
    result.objective_trace = best_run.trace;
    result.restart_spread = best - worst;
    return result;
}

}  // namespace entnorms
