#ifndef ENTNORMS_TYPES_HPP
#define ENTNORMS_TYPES_HPP

#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace entnorms {

using cxd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

// Tensor-factor shape (n_1, ..., n_p). Factor indices are 0-based in code,
// 1-based in docs and CLI output.
struct Shape {
    std::vector<int> dims;

    Shape() = default;
    explicit Shape(std::vector<int> d) : dims(std::move(d)) {
        if (dims.empty()) throw std::invalid_argument("Shape: needs at least one factor");
        for (int n : dims)
            if (n < 1) throw std::invalid_argument("Shape: every dim must be >= 1");
    }

    int factors() const { return static_cast<int>(dims.size()); }
    long total() const {
        long t = 1;
        for (int n : dims) t *= n;
        return t;
    }
    bool operator==(const Shape& o) const { return dims == o.dims; }
    bool operator!=(const Shape& o) const { return dims != o.dims; }
};

// Complex amplitude vector with an explicit factor shape. May be unnormalized;
// scalar multiples c|w> are stored directly in the amplitudes.
struct Ket {
    Vec amps;
    Shape shape;

    Ket() = default;
    Ket(Vec a, Shape s) : amps(std::move(a)), shape(std::move(s)) {
        if (amps.size() != shape.total())
            throw std::invalid_argument("Ket: amplitude length does not match shape");
    }

    double norm() const { return amps.norm(); }
};

// Operator on tensor-product spaces, with factorized row and column shapes.
struct Opr {
    Mat entries;
    Shape row_shape;
    Shape col_shape;

    Opr() = default;
    Opr(Mat e, Shape rs, Shape cs)
        : entries(std::move(e)), row_shape(std::move(rs)), col_shape(std::move(cs)) {
        if (entries.rows() != row_shape.total() || entries.cols() != col_shape.total())
            throw std::invalid_argument("Opr: matrix dimensions do not match shapes");
    }
};

// Bijection on {1,...,p}, stored 0-based: map[t] is the input factor placed at
// output slot t, i.e. S_sigma(v_1 x ... x v_p) = v_{map[0]} x ... x v_{map[p-1]}.
struct Permutation {
    std::vector<int> map;

    Permutation() = default;
    explicit Permutation(std::vector<int> m) : map(std::move(m)) {
        std::vector<bool> seen(map.size(), false);
        for (int v : map) {
            if (v < 0 || v >= static_cast<int>(map.size()) || seen[v])
                throw std::invalid_argument("Permutation: not a bijection");
            seen[v] = true;
        }
    }

    int size() const { return static_cast<int>(map.size()); }

    static Permutation identity(int p) {
        std::vector<int> m(p);
        std::iota(m.begin(), m.end(), 0);
        return Permutation(m);
    }

    Permutation inverse() const {
        std::vector<int> m(map.size());
        for (int t = 0; t < size(); ++t) m[map[t]] = t;
        return Permutation(m);
    }

    // Composition law chosen so that S_sigma * S_tau = S_{compose(sigma, tau)}
    // as matrices: (S_sigma S_tau)(x v_i) places v_{tau[sigma[t]]} at slot t.
    static Permutation compose(const Permutation& sigma, const Permutation& tau) {
        if (sigma.size() != tau.size())
            throw std::invalid_argument("Permutation::compose: size mismatch");
        std::vector<int> m(sigma.map.size());
        for (int t = 0; t < sigma.size(); ++t) m[t] = tau.map[sigma.map[t]];
        return Permutation(m);
    }

    bool is_identity() const {
        for (int t = 0; t < size(); ++t)
            if (map[t] != t) return false;
        return true;
    }
};

// Row-major flattening of a multi-index.
inline long flat_index(const std::vector<int>& idx, const std::vector<int>& dims) {
    long f = 0;
    for (size_t i = 0; i < dims.size(); ++i) f = f * dims[i] + idx[i];
    return f;
}

inline void unflatten_index(long flat, const std::vector<int>& dims, std::vector<int>& idx) {
    idx.resize(dims.size());
    for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
        idx[i] = static_cast<int>(flat % dims[i]);
        flat /= dims[i];
    }
}

}  // namespace entnorms

#endif
