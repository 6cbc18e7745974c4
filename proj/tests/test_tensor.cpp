#include "doctest.h"

#include "entnorms/random.hpp"
#include "entnorms/tensor.hpp"
#include "test_helpers.hpp"

using namespace entnorms;
using entnorms::test::basis;

TEST_CASE("tensor_product on kets and operators") {
    const Ket a(basis(2, 0), Shape({2}));
    const Ket b(basis(2, 0), Shape({2}));
    const Ket ab = tensor_product(a, b);
    CHECK(ab.shape.dims == std::vector<int>{2, 2});
    CHECK(std::abs(ab.amps[0] - 1.0) < 1e-15);
    CHECK(ab.amps.tail(3).norm() < 1e-15);

    const Opr i2(Mat::Identity(2, 2), Shape({2}), Shape({2}));
    const Opr i4 = tensor_product(i2, i2);
    CHECK((i4.entries - Mat::Identity(4, 4)).norm() < 1e-15);
    CHECK(i4.row_shape.dims == std::vector<int>{2, 2});

    const Ket scaled = tensor_product(Ket(2.0 * basis(2, 0), Shape({2})),
                                      Ket(3.0 * basis(2, 1), Shape({2})));
    CHECK(std::abs(scaled.amps[1] - 6.0) < 1e-15);
    CHECK(std::abs(scaled.norm() - 6.0) < 1e-15);
}

TEST_CASE("vec_to_op is the row-major reshape without conjugation") {
    const Ket e11 = tensor_product(Ket(basis(2, 0), Shape({2})), Ket(basis(2, 0), Shape({2})));
    const Opr a = vec_to_op(e11);
    CHECK(std::abs(a.entries(0, 0) - 1.0) < 1e-15);
    CHECK(a.entries.norm() == doctest::Approx(1.0));

    const Opr bell_op = vec_to_op(entnorms::test::bell());
    CHECK((bell_op.entries - Mat::Identity(2, 2) / std::sqrt(2.0)).norm() < 1e-15);

    Vec raw(4);
    raw << 1, 2, 3, 4;
    raw /= std::sqrt(30.0);
    const Opr r = vec_to_op(Ket(raw, Shape({2, 2})));
    CHECK(std::abs(r.entries(0, 1) - raw[1]) < 1e-15);
    CHECK(std::abs(r.entries(1, 0) - raw[2]) < 1e-15);

    Sampler s(11);
    const Ket v = s.haar_ket(Shape({3, 4}));
    CHECK(vec_to_op(v).entries.norm() == doctest::Approx(v.norm()).epsilon(1e-12));
    CHECK((op_to_vec(vec_to_op(v)).amps - v.amps).norm() < 1e-15);
}

TEST_CASE("swap operators move elementary tensors") {
    const Shape sh({2, 2});
    CHECK((swap_operator(Permutation::identity(2), sh).entries - Mat::Identity(4, 4)).norm() <
          1e-15);

    Sampler s(5);
    const Vec a = s.gaussian_vec(2), b = s.gaussian_vec(2);
    const Opr sw = swap_bipartite(2);
    CHECK((sw.entries * kron(a, b) - kron(b, a)).norm() < 1e-14);
    CHECK((sw.entries.transpose() * sw.entries - Mat::Identity(4, 4)).norm() < 1e-14);

    // Cycle on three qubits: slot t receives factor sigma.map[t].
    const Permutation cyc({2, 0, 1});
    const Vec c = s.gaussian_vec(2);
    const Opr sc = swap_operator(cyc, Shape({2, 2, 2}));
    CHECK((sc.entries * kron(kron(a, b), c) - kron(kron(c, a), b)).norm() < 1e-14);
}

TEST_CASE("swap operator composition law") {
    Sampler s(17);
    const Shape sh({2, 3, 2});
    // Only dimension-profile-preserving permutations are composable here.
    const Permutation sigma({2, 1, 0}), tau({2, 1, 0});
    const Mat lhs = swap_operator(sigma, sh).entries * swap_operator(tau, sh).entries;
    const Mat rhs = swap_operator(Permutation::compose(sigma, tau), sh).entries;
    CHECK((lhs - rhs).norm() < 1e-14);

    const Shape q3({2, 2, 2});
    const Permutation s1({1, 2, 0}), s2({0, 2, 1});
    const Mat l2 = swap_operator(s1, q3).entries * swap_operator(s2, q3).entries;
    const Mat r2 = swap_operator(Permutation::compose(s1, s2), q3).entries;
    CHECK((l2 - r2).norm() < 1e-14);
}

TEST_CASE("axis_transpose cases") {
    Sampler s(3);
    const Shape sh({2, 2});
    const Opr x(s.gaussian_mat(4, 4), sh, sh);
    CHECK((axis_transpose(x, {0, 1}).entries - x.entries.transpose()).norm() < 1e-15);
    CHECK((axis_transpose(x, {}).entries - x.entries).norm() < 1e-15);
    CHECK((axis_transpose(axis_transpose(x, {1}), {1}).entries - x.entries).norm() < 1e-15);

    const Ket phi2 = entnorms::test::phi_max(2);
    const Opr proj(phi2.amps * phi2.amps.adjoint(), sh, sh);
    CHECK((axis_transpose(proj, {1}).entries - swap_bipartite(2).entries / 2.0).norm() < 1e-14);
}

TEST_CASE("samplers are deterministic and well formed") {
    Sampler s1(42), s2(42);
    const Ket v1 = s1.haar_ket(Shape({3, 3})), v2 = s2.haar_ket(Shape({3, 3}));
    CHECK((v1.amps - v2.amps).norm() == 0.0);

    Sampler s(9);
    const Mat u = s.haar_unitary(4);
    CHECK((u.adjoint() * u - Mat::Identity(4, 4)).norm() < 1e-12);

    const Ket pk = s.product_multipartite_ket(Shape({2, 2, 3}));
    CHECK(pk.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("regroup_bipartite groups a chosen cut") {
    Sampler s(23);
    const Ket v = s.haar_ket(Shape({2, 3, 2}));
    const Regrouped g = regroup_bipartite(v, {1});
    CHECK(g.ket.shape.dims == std::vector<int>{3, 4});
    CHECK(g.ket.norm() == doctest::Approx(1.0).epsilon(1e-12));
}
