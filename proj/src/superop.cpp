#include "entnorms/superop.hpp"

#include "entnorms/tensor.hpp"

#include <cmath>

namespace entnorms {

Mat SuperOp::apply(const Mat& x) const {
    const int dd = d();
    if (x.rows() != dd || x.cols() != dd)
        throw std::invalid_argument("SuperOp::apply: operand size mismatch");
    return reshape_rm(matrix * vec_rm(x), dd, dd);
}

SuperOp superop_from_function(int m, int n, const std::function<Mat(const Mat&)>& phi) {
    const int d = m * n;
    Mat mat(static_cast<long>(d) * d, static_cast<long>(d) * d);
    Mat basis = Mat::Zero(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
            basis(r, c) = 1.0;
            mat.col(static_cast<long>(r) * d + c) = vec_rm(phi(basis));
            basis(r, c) = 0.0;
        }
    return SuperOp(mat, m, n);
}

SuperOp identity_superop(int m, int n) {
    const long dd = static_cast<long>(m) * n * m * n;
    return SuperOp(Mat::Identity(dd, dd), m, n);
}

SuperOp transpose_superop(int m, int n) {
    return superop_from_function(m, n, [](const Mat& x) { return x.transpose().eval(); });
}

SuperOp partial_transpose_superop(int m, int n) {
    Shape s({m, n});
    return superop_from_function(m, n, [&](const Mat& x) {
        return axis_transpose(Opr(x, s, s), {1}).entries;
    });
}

SuperOp conjugation_superop(const Mat& l, int m, int n) {
    return superop_from_function(m, n, [&](const Mat& x) { return (l * x * l.adjoint()).eval(); });
}

SuperOp depolarizing_superop(int m, int n) {
    const int d = m * n;
    return superop_from_function(m, n, [&](const Mat& x) {
        return (x.trace() / static_cast<double>(d) * Mat::Identity(d, d)).eval();
    });
}

SuperOp compose(const SuperOp& a, const SuperOp& b) {
    if (a.m != b.m || a.n != b.n) throw std::invalid_argument("compose: shape mismatch");
    return SuperOp(a.matrix * b.matrix, a.m, a.n);
}

Mat choi_matrix(const SuperOp& phi) {
    const int d = phi.d();
    Mat c(static_cast<long>(d) * d, static_cast<long>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Mat img = reshape_rm(phi.matrix.col(static_cast<long>(i) * d + j), d, d);
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    c(static_cast<long>(i) * d + a, static_cast<long>(j) * d + b) = img(a, b);
        }
    return c;
}

KrausSet choi_kraus(const SuperOp& phi, double tol) {
    const int d = phi.d();
    Mat c = choi_matrix(phi);
    const double cnorm = c.norm();
    KrausSet ks;
    ks.herm_defect = cnorm > 0 ? (c - c.adjoint()).norm() / cnorm : 0.0;
    Mat ch = 0.5 * (c + c.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> eig(ch);
    const RVec& lam = eig.eigenvalues();
    const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
    ks.cp_defect = std::min(0.0, lam.minCoeff());
    ks.completely_positive = (-ks.cp_defect <= tol * scale) && (ks.herm_defect <= tol);
    for (int t = static_cast<int>(lam.size()) - 1; t >= 0; --t) {
        if (lam(t) <= tol * scale) continue;
        Vec w = eig.eigenvectors().col(t);
        Mat a(d, d);
        for (int i = 0; i < d; ++i)
            for (int r = 0; r < d; ++r) a(r, i) = std::sqrt(lam(t)) * w(static_cast<long>(i) * d + r);
        ks.ops.push_back(a);
        ks.eigenvalue_weights.push_back(lam(t));
    }
    Mat acc = Mat::Zero(d, d);
    for (const Mat& a : ks.ops) acc += a.adjoint() * a;
    ks.trace_preserving = (acc - Mat::Identity(d, d)).norm() <= 1e-8 * d;
    return ks;
}

SuperOp kraus_superop(const std::vector<Mat>& ops, int m, int n) {
    return superop_from_function(m, n, [&](const Mat& x) {
        Mat acc = Mat::Zero(x.rows(), x.cols());
        for (const Mat& a : ops) acc += a * x * a.adjoint();
        return acc;
    });
}

}  // namespace entnorms
