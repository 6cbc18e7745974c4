#include "doctest.h"

#include "entnorms/multipartite.hpp"
#include "entnorms/preserver.hpp"
#include "entnorms/random.hpp"
#include "entnorms/schmidt.hpp"
#include "entnorms/tensor.hpp"
#include "test_helpers.hpp"

using namespace entnorms;
using entnorms::test::basis;

namespace {

FactorList random_factors(Sampler& s, const Shape& shape) {
    FactorList f;
    for (int d : shape.dims) f.factors.push_back(s.gaussian_vec(d));
    return f;
}

}  // namespace

TEST_CASE("is_product_state") {
    Sampler s(3);
    const Shape sh({2, 3, 2});
    const Ket prod = s.product_multipartite_ket(sh);
    const auto yes = is_product_state(prod);
    CHECK(yes.is_product);
    CHECK(yes.residual <= 1e-10);
    CHECK((yes.factors.assemble(sh).amps - prod.amps).norm() < 1e-8);

    CHECK(!is_product_state(entnorms::test::ghz()).is_product);
    CHECK(!is_product_state(entnorms::test::w_state()).is_product);

    // product across one cut but not all cuts
    Vec bell_part = entnorms::test::bell().amps;
    const Ket half(kron(bell_part, s.gaussian_vec(3)), Shape({2, 2, 3}));
    CHECK(!is_product_state(half).is_product);
}

TEST_CASE("separable_sum_test matches the differ count rule") {
    Sampler s(5);
    const Shape sh({2, 2, 3});
    const FactorList a = random_factors(s, sh);

    // differ on zero parties (scaled copy)
    FactorList same = a;
    for (auto& f : same.factors) f *= 1.3;
    const auto r0 = separable_sum_test(a, same, sh);
    CHECK(r0.differ_count == 0);
    CHECK(r0.sum_is_separable);

    // differ on one party
    FactorList one = a;
    one.factors[1] = s.gaussian_vec(2);
    const auto r1 = separable_sum_test(a, one, sh);
    CHECK(r1.differ_count == 1);
    CHECK(r1.sum_is_separable);

    // differ on two parties: sum is entangled
    FactorList two = a;
    two.factors[0] = s.gaussian_vec(2);
    two.factors[2] = s.gaussian_vec(3);
    const auto r2 = separable_sum_test(a, two, sh);
    CHECK(r2.differ_count == 2);
    CHECK(!r2.sum_is_separable);

    // a + (-a) is degenerate and carries no information
    FactorList neg = a;
    neg.factors[0] = -neg.factors[0];
    CHECK(separable_sum_test(a, neg, sh).degenerate_sum);
}

TEST_CASE("images under local invertibles differ on no more parties") {
    Sampler s(9);
    const Shape sh({2, 2, 3});
    std::vector<Mat> ps = {s.invertible_opr(2), s.invertible_opr(2), s.invertible_opr(3)};
    for (int differ = 0; differ <= 3; ++differ) {
        const FactorList a = random_factors(s, sh);
        FactorList b = a;
        for (int t = 0; t < differ; ++t) b.factors[t] = s.gaussian_vec(sh.dims[t]);
        FactorList la, lb;
        for (int t = 0; t < 3; ++t) {
            la.factors.push_back(ps[t] * a.factors[t]);
            lb.factors.push_back(ps[t] * b.factors[t]);
        }
        int differ_img = 0;
        for (int t = 0; t < 3; ++t)
            if (parallel_defect(la.factors[t], lb.factors[t]) > 1e-8) ++differ_img;
        CHECK(differ_img <= separable_sum_test(a, b, sh).differ_count);
    }
}

TEST_CASE("gme on standard states") {
    Sampler s(13);
    GmeOptions opts;
    opts.seed = 1;

    const auto prod = gme(s.product_multipartite_ket(Shape({2, 2, 3})), opts);
    CHECK(prod.E <= 1e-10);
    CHECK(prod.converged);

    const auto g = gme(entnorms::test::ghz(), opts);
    CHECK(g.G == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
    CHECK(g.E == doctest::Approx(0.5).epsilon(1e-8));
    // witness is a unit product state attaining G
    Ket w = g.witness.assemble(Shape({2, 2, 2}));
    CHECK(w.norm() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(w.amps.dot(entnorms::test::ghz().amps)) ==
          doctest::Approx(g.G).epsilon(1e-8));

    const auto ww = gme(entnorms::test::w_state(), opts);
    CHECK(ww.G * ww.G == doctest::Approx(4.0 / 9.0).epsilon(1e-7));

    // bipartite gme reduces to the largest Schmidt coefficient
    const Ket v = s.haar_ket(Shape({3, 4}));
    CHECK(gme(v, opts).G == doctest::Approx(s_norm(v, 1).value).epsilon(1e-8));
}

TEST_CASE("recover_local_form_multipartite round trip") {
    Sampler s(21);
    const Shape sh({2, 2, 3});
    const Permutation sigma({1, 0, 2});
    std::vector<Mat> ps = {s.invertible_opr(2), s.invertible_opr(2), s.invertible_opr(3)};
    const Mat l = swap_operator(sigma, sh).entries * kron(kron(ps[0], ps[1]), ps[2]);
    const auto rec = recover_local_form_multipartite(Opr(l, sh, sh));
    REQUIRE(rec.status == RecoverStatus::Recovered);
    CHECK(rec.sigma.map == sigma.map);
    CHECK(rec.residual <= 1e-8);
    Mat rebuilt = swap_operator(rec.sigma, sh).entries *
                  kron(kron(rec.factors[0], rec.factors[1]), rec.factors[2]);
    CHECK((rebuilt - l).norm() < 1e-7 * l.norm());

    // bipartite local unitaries recover with the identity permutation
    const Shape sh2({2, 2});
    const Mat u = kron(s.haar_unitary(2), s.haar_unitary(2));
    const auto ru = recover_local_form_multipartite(Opr(u, sh2, sh2));
    REQUIRE(ru.status == RecoverStatus::Recovered);
    CHECK(ru.sigma.map == Permutation::identity(2).map);

    const auto bad = recover_local_form_multipartite(
        Opr(entnorms::test::cnot(), sh2, sh2));
    CHECK(bad.status == RecoverStatus::NotSeparabilityPreserving);
    const Ket img(entnorms::test::cnot() * bad.witness.amps, sh2);
    CHECK(is_product_state(bad.witness).is_product);
    CHECK(is_product_state(img).residual > 1e-4);
}

TEST_CASE("gme_invariance_check") {
    Sampler s(33);
    const Shape sh({2, 2, 2});
    const Mat u = swap_operator(Permutation({2, 0, 1}), sh).entries *
                  kron(kron(s.haar_unitary(2), s.haar_unitary(2)), s.haar_unitary(2));
    const auto inv = gme_invariance_check(Opr(u, sh, sh), 5, 1e-6, 7);
    CHECK(inv.known_form);
    CHECK(inv.max_deviation <= 1e-6);

    // global phase changes nothing
    const auto ph = gme_invariance_check(Opr(cxd(0.0, 1.0) * u, sh, sh), 3, 1e-6, 7);
    CHECK(ph.max_deviation <= 1e-6);

    const Shape sh2({2, 2});
    const auto cn = gme_invariance_check(Opr(entnorms::test::cnot(), sh2, sh2), 8, 1e-6, 7);
    CHECK(!cn.known_form);
    CHECK(cn.max_deviation > 1e-2);
}
