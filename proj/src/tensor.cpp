#include "entnorms/tensor.hpp"

#include <algorithm>

namespace entnorms {

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vec kron(const Vec& a, const Vec& b) {
    Vec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

Ket tensor_product(const Ket& a, const Ket& b) {
    std::vector<int> dims = a.shape.dims;
    dims.insert(dims.end(), b.shape.dims.begin(), b.shape.dims.end());
    return Ket(kron(a.amps, b.amps), Shape(dims));
}

Opr tensor_product(const Opr& a, const Opr& b) {
    std::vector<int> rd = a.row_shape.dims, cd = a.col_shape.dims;
    rd.insert(rd.end(), b.row_shape.dims.begin(), b.row_shape.dims.end());
    cd.insert(cd.end(), b.col_shape.dims.begin(), b.col_shape.dims.end());
    return Opr(kron(a.entries, b.entries), Shape(rd), Shape(cd));
}

Mat reshape_rm(const Vec& v, int rows, int cols) {
    if (v.size() != static_cast<long>(rows) * cols)
        throw std::invalid_argument("reshape_rm: size mismatch");
    Mat a(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a(i, j) = v(static_cast<long>(i) * cols + j);
    return a;
}

Vec vec_rm(const Mat& a) {
    Vec v(a.rows() * a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) v(i * a.cols() + j) = a(i, j);
    return v;
}

Opr vec_to_op(const Ket& v) {
    if (v.shape.factors() != 2)
        throw std::invalid_argument("vec_to_op: ket must have a two-factor shape");
    const int m = v.shape.dims[0], n = v.shape.dims[1];
    return Opr(reshape_rm(v.amps, m, n), Shape({m}), Shape({n}));
}

Ket op_to_vec(const Opr& a) {
    const int m = static_cast<int>(a.entries.rows());
    const int n = static_cast<int>(a.entries.cols());
    return Ket(vec_rm(a.entries), Shape({m, n}));
}

Ket permute_ket_factors(const Ket& v, const Permutation& sigma) {
    const auto& dims = v.shape.dims;
    if (sigma.size() != static_cast<int>(dims.size()))
        throw std::invalid_argument("permute_ket_factors: permutation size mismatch");
    std::vector<int> new_dims(dims.size());
    for (int t = 0; t < sigma.size(); ++t) new_dims[t] = dims[sigma.map[t]];
    Vec out(v.amps.size());
    std::vector<int> idx, pidx(dims.size());
    for (long f = 0; f < v.amps.size(); ++f) {
        unflatten_index(f, dims, idx);
        for (int t = 0; t < sigma.size(); ++t) pidx[t] = idx[sigma.map[t]];
        out(flat_index(pidx, new_dims)) = v.amps(f);
    }
    return Ket(out, Shape(new_dims));
}

Opr swap_operator(const Permutation& sigma, const Shape& shape) {
    if (sigma.size() != shape.factors())
        throw std::invalid_argument("swap_operator: permutation size mismatch");
    std::vector<int> new_dims(shape.dims.size());
    for (int t = 0; t < sigma.size(); ++t) new_dims[t] = shape.dims[sigma.map[t]];
    const long d = shape.total();
    Mat s = Mat::Zero(d, d);
    std::vector<int> idx, pidx(shape.dims.size());
    for (long c = 0; c < d; ++c) {
        unflatten_index(c, shape.dims, idx);
        for (int t = 0; t < sigma.size(); ++t) pidx[t] = idx[sigma.map[t]];
        s(flat_index(pidx, new_dims), c) = 1.0;
    }
    return Opr(s, Shape(new_dims), shape);
}

Opr swap_bipartite(int n) {
    return swap_operator(Permutation({1, 0}), Shape({n, n}));
}

Regrouped regroup_bipartite(const Ket& v, const std::vector<int>& left_factors) {
    const int p = v.shape.factors();
    if (left_factors.empty() || static_cast<int>(left_factors.size()) >= p)
        throw std::invalid_argument("regroup_bipartite: cut must be a nontrivial partition");
    std::vector<bool> in_left(p, false);
    for (int f : left_factors) {
        if (f < 0 || f >= p || in_left[f])
            throw std::invalid_argument("regroup_bipartite: bad factor index in cut");
        in_left[f] = true;
    }
    std::vector<int> order = left_factors;
    for (int f = 0; f < p; ++f)
        if (!in_left[f]) order.push_back(f);
    Permutation perm(order);
    Ket permuted = permute_ket_factors(v, perm);
    long m = 1, n = 1;
    for (size_t t = 0; t < left_factors.size(); ++t) m *= permuted.shape.dims[t];
    for (size_t t = left_factors.size(); t < permuted.shape.dims.size(); ++t)
        n *= permuted.shape.dims[t];
    Regrouped r;
    r.grouped_fine = permuted.shape;
    r.ket = Ket(permuted.amps, Shape({static_cast<int>(m), static_cast<int>(n)}));
    r.perm = perm;
    return r;
}

Opr axis_transpose(const Opr& x, const std::set<int>& subset) {
    const auto& rd = x.row_shape.dims;
    const auto& cd = x.col_shape.dims;
    if (rd.size() != cd.size())
        throw std::invalid_argument("axis_transpose: row/col factor counts differ");
    for (int f : subset) {
        if (f < 0 || f >= static_cast<int>(rd.size()))
            throw std::invalid_argument("axis_transpose: factor index out of range");
        if (rd[f] != cd[f])
            throw std::invalid_argument("axis_transpose: non-square factor in subset");
    }
    Mat out(x.entries.rows(), x.entries.cols());
    std::vector<int> ri, ci, sri, sci;
    for (long r = 0; r < x.entries.rows(); ++r) {
        unflatten_index(r, rd, ri);
        for (long c = 0; c < x.entries.cols(); ++c) {
            unflatten_index(c, cd, ci);
            sri = ri;
            sci = ci;
            for (int f : subset) {
                sri[f] = ci[f];
                sci[f] = ri[f];
            }
            out(r, c) = x.entries(flat_index(sri, rd), flat_index(sci, cd));
        }
    }
    return Opr(out, x.row_shape, x.col_shape);
}

}  // namespace entnorms
