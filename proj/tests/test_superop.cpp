#include "doctest.h"

#include "entnorms/random.hpp"
#include "entnorms/superop.hpp"
#include "entnorms/tensor.hpp"
#include "test_helpers.hpp"

using namespace entnorms;

TEST_CASE("superop matrix agrees with the function it came from") {
    Sampler s(2);
    const Mat l = s.gaussian_mat(4, 4);
    const SuperOp phi = conjugation_superop(l, 2, 2);
    const Mat x = s.gaussian_mat(4, 4);
    CHECK((phi.apply(x) - l * x * l.adjoint()).norm() < 1e-12);

    const SuperOp pt = partial_transpose_superop(2, 2);
    const Mat expected = axis_transpose(Opr(x, Shape({2, 2}), Shape({2, 2})), {1}).entries;
    CHECK((pt.apply(x) - expected).norm() < 1e-12);
}

TEST_CASE("choi_kraus on unitary conjugation and the identity map") {
    Sampler s(6);
    const Mat u = s.haar_unitary(4);
    const KrausSet ks = choi_kraus(conjugation_superop(u, 2, 2));
    CHECK(ks.completely_positive);
    CHECK(ks.trace_preserving);
    REQUIRE(ks.ops.size() == 1);
    // proportional to U with |c| = 1
    const cxd c = (u.adjoint() * ks.ops[0]).trace() / 4.0;
    CHECK((ks.ops[0] - c * u).norm() < 1e-10);
    CHECK(std::abs(std::abs(c) - 1.0) < 1e-10);

    const KrausSet id = choi_kraus(identity_superop(2, 2));
    REQUIRE(id.ops.size() == 1);
    const cxd ci = id.ops[0].trace() / 4.0;
    CHECK((id.ops[0] - ci * Mat::Identity(4, 4)).norm() < 1e-10);
}

TEST_CASE("transpose map is not completely positive") {
    const KrausSet ks = choi_kraus(transpose_superop(2, 2));
    CHECK(!ks.completely_positive);
    CHECK(ks.cp_defect < -1e-8);
    const KrausSet pt = choi_kraus(partial_transpose_superop(2, 2));
    CHECK(!pt.completely_positive);
}

TEST_CASE("Kraus reconstruction reproduces CP maps on a basis") {
    Sampler s(19);
    // random CP map: sum of two conjugations
    const Mat a = s.gaussian_mat(4, 4), b = s.gaussian_mat(4, 4);
    const SuperOp phi = SuperOp(
        conjugation_superop(a, 2, 2).matrix + conjugation_superop(b, 2, 2).matrix, 2, 2);
    const KrausSet ks = choi_kraus(phi);
    CHECK(ks.completely_positive);
    const SuperOp rebuilt = kraus_superop(ks.ops, 2, 2);
    CHECK((rebuilt.matrix - phi.matrix).norm() < 1e-8 * phi.matrix.norm());
}

TEST_CASE("choi matrix of the identity map is the unnormalized phi projector") {
    const Mat c = choi_matrix(identity_superop(2, 2));
    const Ket phi4 = entnorms::test::phi_max(4);
    CHECK((c - 4.0 * phi4.amps * phi4.amps.adjoint()).norm() < 1e-12);
}

TEST_CASE("compose multiplies matrices in application order") {
    Sampler s(3);
    const Mat l = s.gaussian_mat(4, 4), m = s.gaussian_mat(4, 4);
    const SuperOp a = conjugation_superop(l, 2, 2), b = conjugation_superop(m, 2, 2);
    const Mat x = s.gaussian_mat(4, 4);
    CHECK((compose(a, b).apply(x) - a.apply(b.apply(x))).norm() < 1e-10);
}

TEST_CASE("depolarizing map sends everything to the normalized identity") {
    Sampler s(4);
    const Mat x = s.gaussian_mat(4, 4);
    const Mat out = depolarizing_superop(2, 2).apply(x);
    CHECK((out - x.trace() * Mat::Identity(4, 4) / 4.0).norm() < 1e-12);
}
