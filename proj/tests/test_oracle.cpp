#include "doctest.h"

#include "entnorms/multipartite.hpp"
#include "entnorms/oracle.hpp"
#include "entnorms/random.hpp"
#include "entnorms/schmidt.hpp"
#include "entnorms/tensor.hpp"
#include "test_helpers.hpp"

using namespace entnorms;

TEST_CASE("brute_force_S_norm anchors") {
    const Shape sh({2, 2});
    OracleConfig cfg;
    cfg.sample_count = 20000;
    cfg.seed = 1;
    CHECK(brute_force_S_norm(Opr(Mat::Identity(4, 4), sh, sh), 1, cfg) ==
          doctest::Approx(1.0).epsilon(1e-6));

    const Ket phi2 = entnorms::test::phi_max(2);
    const Opr proj(phi2.amps * phi2.amps.adjoint(), sh, sh);
    CHECK(brute_force_S_norm(proj, 1, cfg) == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("brute_force_S_norm is bounded and agrees with the see-saw") {
    Sampler s(7);
    const Shape sh({3, 3});
    OracleConfig cfg;
    cfg.sample_count = 20000;
    cfg.seed = 3;
    SNormOptions opts;
    opts.seed = 3;
    for (int trial = 0; trial < 5; ++trial) {
        const Opr x(s.gaussian_mat(9, 9), sh, sh);
        const double op_norm = x.entries.jacobiSvd().singularValues()[0];
        for (int k : {1, 2}) {
            const double brute = brute_force_S_norm(x, k, cfg);
            CHECK(brute <= op_norm + 1e-9);
            CHECK(std::abs(brute - S_norm(x, k, opts).value) < 1e-4 * op_norm);
        }
    }
}

TEST_CASE("brute_force_s_overlap never exceeds the closed form") {
    Sampler s(11);
    for (int trial = 0; trial < 10; ++trial) {
        const Ket v = s.haar_ket(Shape({3, 3}));
        for (int k : {1, 2}) {
            const double sampled = brute_force_s_overlap(v, k, 4000, 100 + trial);
            const double exact = s_norm(v, k).value;
            CHECK(sampled <= exact + 1e-12);
            CHECK(sampled > 0.7 * exact);
        }
    }
}

TEST_CASE("gme_grid_oracle on qubit states") {
    CHECK(gme_grid_oracle(entnorms::test::ghz()) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-5));
    CHECK(gme_grid_oracle(entnorms::test::w_state()) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-5));

    Sampler s(5);
    const Ket v = s.haar_ket(Shape({2, 2}));
    CHECK(gme_grid_oracle(v) == doctest::Approx(s_norm(v, 1).value).epsilon(1e-5));
    CHECK_THROWS_AS((void)gme_grid_oracle(s.haar_ket(Shape({2, 3}))), std::invalid_argument);
}

TEST_CASE("hyperdeterminant anchors and relative invariance") {
    Vec ghz_raw = Vec::Zero(8);
    ghz_raw[0] = ghz_raw[7] = 1.0;
    CHECK(std::abs(hyperdeterminant_222(ghz_raw) - cxd(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(hyperdeterminant_222(entnorms::test::w_state().amps)) < 1e-12);

    Sampler s(17);
    const Vec t = s.gaussian_vec(8);
    const Mat p1 = s.invertible_opr(2), p2 = s.invertible_opr(2), p3 = s.invertible_opr(2);
    const Vec lt = kron(kron(p1, p2), p3) * t;
    const cxd expected = hyperdeterminant_222(t) *
                         std::pow(p1.determinant() * p2.determinant() * p3.determinant(), 2);
    CHECK(std::abs(hyperdeterminant_222(lt) - expected) < 1e-9 * std::abs(expected));
}

TEST_CASE("rank_one_sum_property") {
    const auto rep = rank_one_sum_property(4, 3, 3, 300, 9);
    CHECK(rep.trials == 300);
    CHECK(rep.candidates.empty());
    CHECK(rep.violations_found > 0);
}

TEST_CASE("counterexample_search short runs stay clean") {
    CounterexampleConfig mc;
    mc.trials = 200;
    mc.seed = 4;
    const auto m = counterexample_search(OpenQuestion::MultipartiteK, mc);
    CHECK(m.trials == 200);
    CHECK(m.candidates.empty());
    CHECK(m.known_form_hits == 20);
    CHECK(m.violations_found > 0);

    CounterexampleConfig rc;
    rc.shape = Shape({3, 3});
    rc.trials = 100;
    rc.seed = 6;
    const auto r = counterexample_search(OpenQuestion::RankRBipartite, rc);
    CHECK(r.trials == 100);
    CHECK(r.candidates.empty());
    CHECK(r.known_form_hits == 10);
    CHECK(r.violations_found > 0);
}
