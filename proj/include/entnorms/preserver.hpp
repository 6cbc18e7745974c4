#ifndef ENTNORMS_PRESERVER_HPP
#define ENTNORMS_PRESERVER_HPP

#include "entnorms/schmidt.hpp"
#include "entnorms/superop.hpp"
#include "entnorms/types.hpp"

namespace entnorms {

// Operator Schmidt decomposition (realignment SVD): L = sum_i c_i E_i x F_i
// with descending c_i and {E_i}, {F_i} orthonormal in the Frobenius inner
// product. L acts on H_m x H_n.
struct OperatorSchmidtSplit {
    RVec coeffs;
    std::vector<Mat> left_ops;   // m x m
    std::vector<Mat> right_ops;  // n x n
};
OperatorSchmidtSplit operator_schmidt_split(const Mat& l, int m, int n);

enum class LocalFormVerdict { Product, SwapTimesProduct, Neither };
const char* to_string(LocalFormVerdict v);

struct LocalFormReport {
    LocalFormVerdict verdict = LocalFormVerdict::Neither;
    Mat P, Q;                       // P unit Frobenius, leading entry real positive
    double residual = 1.0;          // ||L - reconstruction||_F / ||L||_F
    RVec operator_schmidt_coeffs;   // of L itself
    bool p_unitary = false;         // P proportional to a unitary
    bool q_unitary = false;
    bool l_unitary = false;         // L itself unitary (local-unitary form)
};

LocalFormReport classify_local_form(const Mat& l, int m, int n, double tol = 1e-7);

struct PreservationReport {
    int samples = 0;
    double max_leak = 0.0;  // largest relative (k+1)-th Schmidt coefficient of L*v
    bool verdict = false;
    Ket worst_input;
};

// Randomized necessary test of L S_k <= S_k: certifies violations, supports
// (but cannot prove) preservation.
PreservationReport check_schmidt_rank_preservation(const Mat& l, int m, int n, int k,
                                                   int n_samples, double tol, uint64_t seed);

enum class InvertStatus { Ok, InvertibilityUnknown };

struct ThmMainRecord {
    InvertStatus status = InvertStatus::Ok;
    double condition_number = 0.0;
    LocalFormReport local;
    PreservationReport preservation;
    bool consistent = false;  // local-form verdict and sampled preservation agree
};

struct VerifyOptions {
    int n_samples = 200;
    double leak_tol = 1e-6;
    double local_tol = 1e-7;
    double cond_bound = 1e6;
    uint64_t seed = 0;
};

// Cross-checks the equivalence "local form <=> Schmidt-rank-set preservation"
// on a concrete operator. Ill-conditioned inputs are gated instead of judged.
ThmMainRecord verify_thm_main(const Mat& l, int m, int n, int k, const VerifyOptions& opts = {});

enum class CpSkStatus { Classified, NotCP, MultipleKrausDirections };
const char* to_string(CpSkStatus s);

struct CpSkResult {
    CpSkStatus status = CpSkStatus::NotCP;
    Mat L;                       // single collapsed Kraus operator when classified
    LocalFormReport report;
    double proportionality_defect = 0.0;
    double cp_defect = 0.0;
    bool trace_preserving = false;
    bool l_unitary = false;
    Ket witness;                 // SR<=k state whose image has rank >= 2
    double witness_rank_ratio = 0.0;
};

CpSkResult classify_cp_sk_preserver(const SuperOp& phi, int k, double tol = 1e-7);

struct IsometryDecomposition {
    bool verdict = false;
    bool used_transpose = false;
    bool used_partial_transpose = false;
    bool frobenius_isometry = false;
    Mat U, V;  // Phi composed with the flagged transposes equals X -> U X V
    LocalFormReport u_report, v_report;
    double residual = 1.0;
    bool has_witness = false;
    Mat witness;
    double witness_gap = 0.0;  // |S_norm(Phi(X), k) - S_norm(X, k)| at the witness
};

IsometryDecomposition classify_norm_isometry(const SuperOp& phi, int k, double tol = 1e-6,
                                             uint64_t seed = 0);

struct SepIsometryRecord {
    int samples = 0;
    double max_product_deviation = 0.0;  // max | ||L(a x b)|| - 1 |
    double gram_residual = 0.0;          // ||L^* L - I||_F
};

SepIsometryRecord sep_isometry_check(const Mat& l, int m, int n, int n_samples, uint64_t seed);

double condition_number(const Mat& a);

}  // namespace entnorms

#endif
