#ifndef ENTNORMS_SUPEROP_HPP
#define ENTNORMS_SUPEROP_HPP

#include "entnorms/types.hpp"

#include <functional>

namespace entnorms {

// Linear map on L(H_m x H_n) stored as its matrix in the row-major
// vectorization basis: vec(Phi(X)) = matrix * vec(X).
struct SuperOp {
    Mat matrix;  // d^2 x d^2 with d = m * n
    int m = 0, n = 0;

    int d() const { return m * n; }

    SuperOp() = default;
    SuperOp(Mat mat, int m_, int n_) : matrix(std::move(mat)), m(m_), n(n_) {
        const long dd = static_cast<long>(m) * n * m * n;
        if (matrix.rows() != dd || matrix.cols() != dd)
            throw std::invalid_argument("SuperOp: matrix must be (mn)^2 x (mn)^2");
    }

    Mat apply(const Mat& x) const;
};

SuperOp superop_from_function(int m, int n, const std::function<Mat(const Mat&)>& phi);
SuperOp identity_superop(int m, int n);
SuperOp transpose_superop(int m, int n);
// id_m x T: transpose on the second tensor factor.
SuperOp partial_transpose_superop(int m, int n);
// X -> L X L^* for L on H_m x H_n.
SuperOp conjugation_superop(const Mat& l, int m, int n);
// X -> Tr(X) I / (mn).
SuperOp depolarizing_superop(int m, int n);
SuperOp compose(const SuperOp& a, const SuperOp& b);  // a after b

// Choi matrix C[(i,a),(j,b)] = Phi(E_ij)[a,b], size d^2 x d^2.
Mat choi_matrix(const SuperOp& phi);

struct KrausSet {
    std::vector<Mat> ops;               // scaled by sqrt of the Choi eigenvalues
    std::vector<double> eigenvalue_weights;
    double cp_defect = 0.0;             // most negative Choi eigenvalue, 0 if PSD
    double herm_defect = 0.0;           // ||C - C^*||_F / ||C||_F
    bool completely_positive = false;
    bool trace_preserving = false;      // sum A_i^* A_i = I
};

// Eigendecomposition of the Choi matrix; Kraus operators are the eigenvector
// reshapes for eigenvalues above tol (the PSD part is returned even when the
// map is not CP).
KrausSet choi_kraus(const SuperOp& phi, double tol = 1e-8);

// Superoperator reconstructed from a Kraus set (for round-trip checks).
SuperOp kraus_superop(const std::vector<Mat>& ops, int m, int n);

}  // namespace entnorms

#endif
