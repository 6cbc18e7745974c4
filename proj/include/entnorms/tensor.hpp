#ifndef ENTNORMS_TENSOR_HPP
#define ENTNORMS_TENSOR_HPP

#include "entnorms/types.hpp"

#include <set>

namespace entnorms {

// Kronecker products; shapes concatenate, so row-major flattening of the
// multi-index is preserved.
Ket tensor_product(const Ket& a, const Ket& b);
Opr tensor_product(const Opr& a, const Opr& b);
Mat kron(const Mat& a, const Mat& b);
Vec kron(const Vec& a, const Vec& b);

// Vector-operator isomorphism for a bipartite ket in (m, n):
// A_v[i, j] = v[i * n + j], i.e. |a> x |b> -> |a> b^T (no conjugation; the
// conjugation lives on the Schmidt right-vectors instead).
Opr vec_to_op(const Ket& v);
Ket op_to_vec(const Opr& a);

// Plain reshape helpers between row-major kets/matrices.
Mat reshape_rm(const Vec& v, int rows, int cols);
Vec vec_rm(const Mat& a);

// Reorders the factors of a ket: output slot t holds input factor sigma.map[t].
Ket permute_ket_factors(const Ket& v, const Permutation& sigma);

// S_sigma as an explicit permutation matrix with row_shape the permuted dims.
Opr swap_operator(const Permutation& sigma, const Shape& shape);

// The bipartite SWAP on (n, n).
Opr swap_bipartite(int n);

// Groups the factors of v into (subset, complement) and returns the resulting
// bipartite ket together with the factor permutation that was applied.
struct Regrouped {
    Ket ket;               // two-factor shape (prod left dims, prod rest)
    Permutation perm;      // original factor placed at each new slot
    Shape grouped_fine;    // permuted fine-grained shape
};
Regrouped regroup_bipartite(const Ket& v, const std::vector<int>& left_factors);

// Transposes X on exactly the factors in `subset` (0-based); full subset is
// the ordinary transpose, empty subset the identity.
Opr axis_transpose(const Opr& x, const std::set<int>& subset);

}  // namespace entnorms

#endif
