#include "entnorms/random.hpp"

#include "entnorms/tensor.hpp"

#include <cmath>

namespace entnorms {

uint64_t derive_seed(uint64_t base, uint64_t index) {
    uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

cxd Sampler::gaussian() {
    // Box-Muller, so the stream is independent of libstdc++'s distribution
    // internals and identical draws come from identical seeds.
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u1 = unif(rng_), u2 = unif(rng_);
    while (u1 <= 1e-300) u1 = unif(rng_);
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

Vec Sampler::gaussian_vec(long n) {
    Vec v(n);
    for (long i = 0; i < n; ++i) v(i) = gaussian();
    return v;
}

Mat Sampler::gaussian_mat(long rows, long cols) {
    Mat a(rows, cols);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) a(i, j) = gaussian();
    return a;
}

Ket Sampler::haar_ket(const Shape& shape) {
    Vec v = gaussian_vec(shape.total());
    v /= v.norm();
    return Ket(v, shape);
}

Mat Sampler::haar_unitary(int dim) {
    Mat g = gaussian_mat(dim, dim);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase convention so the distribution is Haar.
    for (int j = 0; j < dim; ++j) {
        cxd d = r(j, j);
        q.col(j) *= (std::abs(d) > 0 ? d / std::abs(d) : cxd(1.0));
    }
    return q;
}

Ket Sampler::sr_k_ket(const Shape& shape, int k) {
    if (shape.factors() != 2)
        throw std::invalid_argument("sr_k_ket: shape must have two factors");
    const int m = shape.dims[0], n = shape.dims[1];
    if (k < 1 || k > std::min(m, n))
        throw std::invalid_argument("sr_k_ket: k out of range");
    Vec v = Vec::Zero(shape.total());
    for (int i = 0; i < k; ++i) v += kron(gaussian_vec(m), gaussian_vec(n));
    const double nrm = v.norm();
    if (nrm == 0.0) return sr_k_ket(shape, k);
    return Ket(v / nrm, shape);
}

Ket Sampler::product_multipartite_ket(const Shape& shape) {
    Vec v = gaussian_vec(shape.dims[0]);
    v /= v.norm();
    Ket out(v, Shape({shape.dims[0]}));
    for (int f = 1; f < shape.factors(); ++f) {
        Vec w = gaussian_vec(shape.dims[f]);
        w /= w.norm();
        out = tensor_product(out, Ket(w, Shape({shape.dims[f]})));
    }
    return out;
}

Mat Sampler::invertible_opr(int dim, double cond_bound) {
    for (;;) {
        Mat g = gaussian_mat(dim, dim);
        Eigen::JacobiSVD<Mat> svd(g);
        const auto& s = svd.singularValues();
        if (s(s.size() - 1) > 0 && s(0) / s(s.size() - 1) <= cond_bound) return g;
    }
}

}  // namespace entnorms
