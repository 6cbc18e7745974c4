#include "doctest.h"

#include "entnorms/preserver.hpp"
#include "entnorms/random.hpp"
#include "entnorms/schmidt.hpp"
#include "entnorms/tensor.hpp"
#include "test_helpers.hpp"

using namespace entnorms;
using entnorms::test::basis;
using entnorms::test::cnot;

TEST_CASE("operator_schmidt_split coefficients") {
    Sampler s(1);
    const Mat a = s.gaussian_mat(2, 2), b = s.gaussian_mat(3, 3);
    const auto sp = operator_schmidt_split(kron(a, b), 2, 3);
    CHECK(sp.coeffs[0] == doctest::Approx(a.norm() * b.norm()).epsilon(1e-10));
    CHECK(sp.coeffs.tail(sp.coeffs.size() - 1).norm() < 1e-10);

    const auto sc = operator_schmidt_split(cnot(), 2, 2);
    CHECK(sc.coeffs[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(sc.coeffs[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(sc.coeffs[2] < 1e-10);

    const auto sw = operator_schmidt_split(swap_bipartite(2).entries, 2, 2);
    for (int i = 0; i < 4; ++i) CHECK(sw.coeffs[i] == doctest::Approx(1.0).epsilon(1e-10));

    // reconstruction
    const Mat l = s.gaussian_mat(6, 6);
    const auto sl = operator_schmidt_split(l, 2, 3);
    Mat recon = Mat::Zero(6, 6);
    for (long i = 0; i < sl.coeffs.size(); ++i)
        recon += sl.coeffs[i] * kron(sl.left_ops[i], sl.right_ops[i]);
    CHECK((recon - l).norm() < 1e-10);
}

TEST_CASE("classify_local_form on the three verdicts") {
    Mat h(2, 2), z(2, 2);
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    z << 1, 0, 0, -1;
    const auto ph = classify_local_form(kron(h, z), 2, 2);
    CHECK(ph.verdict == LocalFormVerdict::Product);
    CHECK(ph.residual <= 1e-12);
    CHECK(ph.p_unitary);
    CHECK(ph.q_unitary);
    CHECK(ph.l_unitary);

    Sampler s(10);
    const Mat a = s.invertible_opr(2), b = s.invertible_opr(2);
    const Mat l = swap_bipartite(2).entries * kron(a, b);
    const auto pq = classify_local_form(l, 2, 2);
    CHECK(pq.verdict == LocalFormVerdict::SwapTimesProduct);
    CHECK(pq.residual <= 1e-9);
    // recovered A up to scalar
    const cxd scale = (pq.P.adjoint() * a).trace() / (pq.P.adjoint() * pq.P).trace();
    CHECK((a - scale * pq.P).norm() < 1e-8 * a.norm());

    CHECK(classify_local_form(cnot(), 2, 2).verdict == LocalFormVerdict::Neither);
    CHECK(classify_local_form(swap_bipartite(2).entries * cnot(), 2, 2).verdict ==
          LocalFormVerdict::Neither);
}

TEST_CASE("local form round-trip with scale conventions") {
    Sampler s(20);
    const Mat p = s.invertible_opr(3), q = s.invertible_opr(3);
    const auto rep = classify_local_form(kron(p, q), 3, 3);
    CHECK(rep.verdict == LocalFormVerdict::Product);
    CHECK(rep.residual <= 1e-9);
    CHECK(rep.P.norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK((kron(rep.P, rep.Q) - kron(p, q)).norm() < 1e-8 * kron(p, q).norm());
}

TEST_CASE("check_schmidt_rank_preservation") {
    Sampler s(30);
    const Mat u = kron(s.haar_unitary(2), s.haar_unitary(2));
    const auto ok = check_schmidt_rank_preservation(u, 2, 2, 1, 200, 1e-6, 4);
    CHECK(ok.verdict);
    CHECK(ok.max_leak <= 1e-10);

    const auto bad = check_schmidt_rank_preservation(cnot(), 2, 2, 1, 200, 1e-6, 4);
    CHECK(!bad.verdict);
    CHECK(bad.max_leak > 0.1);
    // the canonical witness: CNOT maps (|0>+|1>)x|1> to a maximally entangled state
    Vec plus1 = Vec::Zero(4);
    plus1[1] = plus1[3] = 1.0 / std::sqrt(2.0);
    const Ket img(cnot() * plus1, Shape({2, 2}));
    const auto sd = schmidt_decompose(img);
    CHECK(sd.coeffs[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(sd.coeffs[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    // the singular preserver outside the local form
    Mat e11 = Mat::Zero(2, 2), e12 = Mat::Zero(2, 2);
    e11(0, 0) = 1.0;
    e12(0, 1) = 1.0;
    const Mat sing = kron(e11, e11) + kron(e12, e12);
    const auto pres = check_schmidt_rank_preservation(sing, 2, 2, 1, 200, 1e-6, 4);
    CHECK(pres.verdict);
    CHECK(classify_local_form(sing, 2, 2).verdict == LocalFormVerdict::Neither);
}

TEST_CASE("verify_thm_main equivalence and gate") {
    Sampler s(40);
    const Mat local = swap_bipartite(3).entries * kron(s.invertible_opr(3), s.invertible_opr(3));
    VerifyOptions vo;
    vo.seed = 3;
    const auto pos = verify_thm_main(local, 3, 3, 2, vo);
    CHECK(pos.status == InvertStatus::Ok);
    CHECK(pos.local.verdict != LocalFormVerdict::Neither);
    CHECK(pos.preservation.verdict);
    CHECK(pos.consistent);

    const auto neg = verify_thm_main(s.invertible_opr(9), 3, 3, 1, vo);
    CHECK(neg.status == InvertStatus::Ok);
    CHECK(neg.local.verdict == LocalFormVerdict::Neither);
    CHECK(!neg.preservation.verdict);
    CHECK(neg.consistent);

    Mat e11 = Mat::Zero(2, 2), e12 = Mat::Zero(2, 2);
    e11(0, 0) = 1.0;
    e12(0, 1) = 1.0;
    CHECK(verify_thm_main(kron(e11, e11) + kron(e12, e12), 2, 2, 1, vo).status ==
          InvertStatus::InvertibilityUnknown);
}

TEST_CASE("classify_cp_sk_preserver") {
    Sampler s(50);
    const Mat u = kron(s.haar_unitary(2), s.haar_unitary(2));
    const auto res = classify_cp_sk_preserver(conjugation_superop(u, 2, 2), 1);
    CHECK(res.status == CpSkStatus::Classified);
    CHECK(res.report.verdict == LocalFormVerdict::Product);
    CHECK(res.l_unitary);
    CHECK(res.trace_preserving);

    const auto dep = classify_cp_sk_preserver(depolarizing_superop(2, 2), 1);
    CHECK(dep.status == CpSkStatus::MultipleKrausDirections);
    CHECK(dep.witness_rank_ratio > 1e-3);
    CHECK(schmidt_rank(dep.witness) == 1);

    const Mat sl = swap_bipartite(3).entries * kron(s.invertible_opr(3), s.invertible_opr(3));
    const auto sw = classify_cp_sk_preserver(conjugation_superop(sl, 3, 3), 2);
    CHECK(sw.status == CpSkStatus::Classified);
    CHECK(sw.report.verdict == LocalFormVerdict::SwapTimesProduct);

    CHECK(classify_cp_sk_preserver(transpose_superop(2, 2), 1).status == CpSkStatus::NotCP);
}

TEST_CASE("classify_norm_isometry") {
    Sampler s(60);
    const Mat u = kron(s.haar_unitary(3), s.haar_unitary(3));
    const Mat v = kron(s.haar_unitary(3), s.haar_unitary(3));
    const SuperOp uv = SuperOp(kron(u, v.transpose()), 3, 3);  // X -> U X V
    const auto good = classify_norm_isometry(uv, 2, 1e-6, 1);
    CHECK(good.verdict);
    CHECK(!good.used_transpose);
    CHECK(!good.used_partial_transpose);
    CHECK(good.residual <= 1e-8);

    const auto pt1 = classify_norm_isometry(partial_transpose_superop(3, 3), 1, 1e-6, 1);
    CHECK(pt1.verdict);
    CHECK(pt1.used_partial_transpose);

    const auto pt2 = classify_norm_isometry(partial_transpose_superop(3, 3), 2, 1e-6, 1);
    CHECK(!pt2.verdict);
    CHECK(!pt2.used_partial_transpose);
    CHECK(pt2.has_witness);
    CHECK(pt2.witness_gap > 1e-3);
}

TEST_CASE("sep_isometry_check") {
    Sampler s(70);
    const auto uni = sep_isometry_check(s.haar_unitary(9), 3, 3, 100, 5);
    CHECK(uni.max_product_deviation <= 1e-10);
    CHECK(uni.gram_residual <= 1e-10);

    const auto scaled = sep_isometry_check(1.1 * Mat::Identity(9, 9), 3, 3, 100, 5);
    CHECK(scaled.max_product_deviation == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(scaled.gram_residual == doctest::Approx(0.21 * 3.0).epsilon(1e-6));

    const Mat pert = s.haar_unitary(9) + 1e-3 * s.gaussian_mat(9, 9);
    const auto p = sep_isometry_check(pert, 3, 3, 100, 5);
    CHECK(p.max_product_deviation > 1e-5);
    CHECK(p.gram_residual > 1e-5);
}
