#ifndef ENTNORMS_MULTIPARTITE_HPP
#define ENTNORMS_MULTIPARTITE_HPP

#include "entnorms/types.hpp"

#include <cstdint>

namespace entnorms {

struct FactorList {
    std::vector<Vec> factors;  // one ket per party

    Ket assemble(const Shape& shape) const;
};

// Relative parallelism defect 1 - |<a|b>| / (||a|| ||b||); the paper's
// "differ on a subsystem" relation at a tolerance.
double parallel_defect(const Vec& a, const Vec& b);

struct ProductTest {
    bool is_product = false;
    FactorList factors;      // phases fixed so the reconstruction is exact
    double residual = 1.0;   // ||v - reconstruction|| / ||v||
};

// True iff every single-party-vs-rest cut has Schmidt rank 1 at tol.
ProductTest is_product_state(const Ket& v, double tol = 1e-8);

struct SeparableSumResult {
    int differ_count = 0;
    bool sum_is_separable = false;
    bool degenerate_sum = false;  // a + b == 0; the lemma does not apply
};

// differ_count counts the parties where the two factor lists are not
// parallel; separability of a + b is tested independently through
// is_product_state, so the two sides of the lemma stay decoupled.
SeparableSumResult separable_sum_test(const FactorList& a, const FactorList& b,
                                      const Shape& shape, double tol = 1e-8);

struct GmeOptions {
    int restarts = 20;
    int max_sweeps = 300;
    double tol = 1e-12;
    uint64_t seed = 0;
};

struct GmeResult {
    double G = 0.0;  // max overlap with unit product states
    double E = 0.0;  // 1 - G^2
    FactorList witness;
    int restarts_used = 0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;  // per-sweep objective of the best restart
};

// Alternating party-wise maximization of |<w|v>| over product states; each
// party update is the exact argmax (a contraction against the other factors).
GmeResult gme(const Ket& v, const GmeOptions& opts = {});

enum class RecoverStatus { Recovered, NotSeparabilityPreserving, InvertibilityUnknown, AmbiguousSubsystem };
const char* to_string(RecoverStatus s);

struct RecoveredForm {
    RecoverStatus status = RecoverStatus::AmbiguousSubsystem;
    Permutation sigma;          // L = S_sigma (P_1 x ... x P_p)
    std::vector<Mat> factors;
    double residual = 1.0;
    double condition_number = 0.0;
    Ket witness;                // separable input with entangled image, when rejected
};

// Constructive recovery of the S_sigma (P_1 x ... x P_p) form by probing with
// basis states party by party.
RecoveredForm recover_local_form_multipartite(const Opr& l, double tol = 1e-7,
                                              double cond_bound = 1e6);

struct InvarianceRecord {
    int samples = 0;
    double max_deviation = 0.0;  // max |E(Uv) - E(v)|
    bool known_form = false;     // recovered as S_sigma(unitaries)
};

InvarianceRecord gme_invariance_check(const Opr& u, int n_samples, double tol = 1e-6,
                                      uint64_t seed = 0);

}  // namespace entnorms

#endif
