#ifndef ENTNORMS_ORACLE_HPP
#define ENTNORMS_ORACLE_HPP

#include "entnorms/types.hpp"

#include <cstdint>
#include <string>

namespace entnorms {

struct OracleConfig {
    long sample_count = 100000;
    int polish_top = 40;
    int polish_sweeps = 40;
    uint64_t seed = 0;
};

// Brute-force lower bound on ||X||_{S(k)}: stratified sampling over SR<=k
// pairs (random plus truncated singular pairs) followed by exact
// per-coordinate line maximization; the polish itself is truncation-free, so
// it does not share a failure mode with the see-saw.
double brute_force_S_norm(const Opr& x, int k, const OracleConfig& config = {});

// Best overlap |<w|v>| over `samples` random SR<=k unit kets; used as the
// definitional check of the closed-form s(k) norm.
double brute_force_s_overlap(const Ket& v, int k, long samples, uint64_t seed);

// Multi-resolution grid maximization of |<w1 x ... x wp | v>| over unit
// product states; independent oracle for the geometric measure.
double gme_grid_oracle(const Ket& v, int base_density = 10, int levels = 6);

struct SearchCandidate {
    uint64_t seed = 0;
    double violation = 0.0;
    std::string note;
};

struct SearchReport {
    long trials = 0;
    std::vector<SearchCandidate> candidates;
    double best_violation = 0.0;
    long known_form_hits = 0;   // injected known-form inputs recognized as such
    long violations_found = 0;  // non-preservers certified by a witness
};

// Property harness for "pairwise rank-one sums of rank-one matrices have a
// rank-one total sum": candidates record any trial where the generated
// family satisfies the hypothesis but the sum is not rank one.
SearchReport rank_one_sum_property(int p, int m, int n, long trials, uint64_t seed);

enum class OpenQuestion { RankRBipartite, MultipartiteK };

struct CounterexampleConfig {
    Shape shape{{2, 2, 2}};
    int k = 2;  // tensor rank bound (MultipartiteK)
    int r = 2;  // operator rank bound (RankRBipartite; k is the Schmidt bound, fixed to 1)
    long trials = 10000;
    uint64_t seed = 0;
};

// Randomized search for preservers outside the known structural form.
// Candidates are advisory replay records, never a mathematical claim; the
// expected outcome on both questions is an empty candidate list.
SearchReport counterexample_search(OpenQuestion q, const CounterexampleConfig& config);

// Cayley hyperdeterminant of a 2x2x2 tensor (row-major amplitudes).
cxd hyperdeterminant_222(const Vec& t);

}  // namespace entnorms

#endif
