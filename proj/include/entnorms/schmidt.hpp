#ifndef ENTNORMS_SCHMIDT_HPP
#define ENTNORMS_SCHMIDT_HPP

#include "entnorms/types.hpp"

#include <cstdint>

namespace entnorms {

// Schmidt decomposition |v> = sum_i alpha_i |a_i> x |b_i| for a chosen cut.
// Right vectors are the conjugated right singular vectors, so reconstruction
// uses plain tensor products.
struct SchmidtDecomposition {
    RVec coeffs;                 // all min(m, n) singular values, descending
    std::vector<Vec> left;       // orthonormal in the grouped left space
    std::vector<Vec> right;      // orthonormal in the grouped right space
    Shape grouped_shape;         // (m, n) of the cut grouping
    Permutation regroup;         // factor reordering applied before reshaping
    Shape original_shape;

    // Reassembles sum over the first `terms` coefficients, in the original
    // factor ordering of the input ket.
    Ket reconstruct(int terms = -1) const;
};

SchmidtDecomposition schmidt_decompose(const Ket& v, const std::vector<int>& left_cut);

// Convenience overload: for two-factor kets the cut defaults to {0}.
SchmidtDecomposition schmidt_decompose(const Ket& v);

int schmidt_rank(const Ket& v, const std::vector<int>& left_cut, double tol = 1e-8);
int schmidt_rank(const Ket& v, double tol = 1e-8);

// Closed-form s(k) norm sqrt(sum_{i<=k} alpha_i^2) with the normalized top-k
// truncation as witness.
struct SNormValue {
    double value;
    Ket witness;
};
SNormValue s_norm(const Ket& v, int k, const std::vector<int>& left_cut);
SNormValue s_norm(const Ket& v, int k);

// Unnormalized top-k Schmidt truncation of a two-factor ket.
Ket truncate_to_rank(const Ket& v, int k);

struct SNormOptions {
    int restarts = 50;
    int max_iters = 500;
    double tol = 1e-12;
    uint64_t seed = 0;
};

struct NormResult {
    double value = 0.0;
    Ket witness_left, witness_right;
    int restarts_used = 0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace;  // best restart, nondecreasing
    double restart_spread = 0.0;          // max - min over restart finals
};

// See-saw lower bound on ||X||_{S(k)}. Each half-step is an exact argmax
// (top-k Schmidt truncation), so the objective never decreases; iterates are
// only accepted when they improve.
NormResult S_norm(const Opr& x, int k, const SNormOptions& opts = {});

}  // namespace entnorms

#endif
