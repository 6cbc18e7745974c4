#ifndef ENTNORMS_RANDOM_HPP
#define ENTNORMS_RANDOM_HPP

#include "entnorms/types.hpp"

#include <cstdint>
#include <random>

namespace entnorms {

// Deterministic seed derivation for parallel/independent draws (splitmix64).
uint64_t derive_seed(uint64_t base, uint64_t index);

// Seeded sampler for test states and operators. All randomness in the library
// flows through explicit seeds; there is no hidden global state.
class Sampler {
  public:
    explicit Sampler(uint64_t seed) : rng_(seed) {}

    cxd gaussian();
    Vec gaussian_vec(long n);
    Mat gaussian_mat(long rows, long cols);

    Ket haar_ket(const Shape& shape);
    Mat haar_unitary(int dim);

    // Sum of k Gaussian elementary tensors on a two-factor shape, normalized;
    // Schmidt rank is exactly k almost surely.
    Ket sr_k_ket(const Shape& shape, int k);

    Ket product_multipartite_ket(const Shape& shape);

    // Gaussian matrix, resampled until the condition number is below `cond_bound`.
    Mat invertible_opr(int dim, double cond_bound = 1e6);

    std::mt19937_64& rng() { return rng_; }

  private:
    std::mt19937_64 rng_;
};

}  // namespace entnorms

#endif
