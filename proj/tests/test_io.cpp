#include "doctest.h"

#include "entnorms/io.hpp"
#include "entnorms/random.hpp"
#include "entnorms/superop.hpp"
#include "entnorms/tensor.hpp"
#include "test_helpers.hpp"

#include <cstdio>
#include <fstream>
#include <string>

using namespace entnorms;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& contents)
        : path("/tmp/entnorms_test_" + name) {
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("ket JSON round trip") {
    Sampler s(1);
    const Ket v = s.haar_ket(Shape({2, 3}));
    const Ket back = ket_from_json(ket_to_json(v));
    CHECK(back.shape.dims == v.shape.dims);
    CHECK((back.amps - v.amps).norm() < 1e-15);

    // "im" is optional
    nlohmann::json j = {{"dims", {2}}, {"re", {1.0, 0.0}}};
    CHECK(ket_from_json(j).amps[0] == cxd(1.0, 0.0));
}

TEST_CASE("operator JSON round trip") {
    Sampler s(2);
    const Opr a(s.gaussian_mat(4, 6), Shape({2, 2}), Shape({2, 3}));
    const Opr back = opr_from_json(opr_to_json(a));
    CHECK(back.row_shape.dims == a.row_shape.dims);
    CHECK(back.col_shape.dims == a.col_shape.dims);
    CHECK((back.entries - a.entries).norm() < 1e-15);
}

TEST_CASE("superop JSON round trip") {
    Sampler s(3);
    const SuperOp phi = conjugation_superop(s.gaussian_mat(4, 4), 2, 2);
    const SuperOp back = superop_from_json(superop_to_json(phi));
    CHECK(back.m == 2);
    CHECK(back.n == 2);
    CHECK((back.matrix - phi.matrix).norm() < 1e-15);
}

TEST_CASE("text fixture formats") {
    TempFile ket_file("bell.txt",
                      "# bell state\n"
                      "ket 2 2\n"
                      "0.70710678118654752 0\n"
                      "0 0\n"
                      "0 0\n"
                      "0.70710678118654752 0\n");
    const Ket v = load_ket(ket_file.path);
    CHECK(v.shape.dims == std::vector<int>{2, 2});
    CHECK((v.amps - entnorms::test::bell().amps).norm() < 1e-12);

    TempFile op_file("op.txt",
                     "opr 2 | 3\n"
                     "1 0\n0 1\n2 0\n"
                     "0 0\n1 0\n0 -1\n");
    const Opr a = load_opr(op_file.path);
    CHECK(a.entries.rows() == 2);
    CHECK(a.entries.cols() == 3);
    CHECK(a.entries(0, 1) == cxd(0.0, 1.0));
    CHECK(a.entries(1, 2) == cxd(0.0, -1.0));
}

TEST_CASE("JSON files load through the sniffing loaders") {
    Sampler s(4);
    const Ket v = s.haar_ket(Shape({3, 2}));
    TempFile f("ket.json", ket_to_json(v).dump());
    CHECK((load_ket(f.path).amps - v.amps).norm() < 1e-15);

    const SuperOp phi = conjugation_superop(s.gaussian_mat(6, 6), 2, 3);
    TempFile g("sup.json", superop_to_json(phi).dump());
    CHECK((load_superop(g.path).matrix - phi.matrix).norm() < 1e-15);
}

TEST_CASE("Choi files convert back to the superoperator") {
    Sampler s(5);
    const SuperOp phi = conjugation_superop(s.gaussian_mat(4, 4), 2, 2);
    const Mat c = choi_matrix(phi);
    nlohmann::json j = opr_to_json(Opr(c, Shape({16}), Shape({16})));
    j["m"] = 2;
    j["n"] = 2;
    TempFile f("choi.json", j.dump());
    const SuperOp back = load_superop_from_choi(f.path);
    CHECK(back.m == 2);
    CHECK((back.matrix - phi.matrix).norm() < 1e-12);
}

TEST_CASE("malformed input raises IoError naming the field") {
    CHECK_THROWS_AS((void)ket_from_json(nlohmann::json{{"re", {1.0}}}), IoError);
    try {
        (void)ket_from_json(nlohmann::json{{"re", {1.0}}});
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("dims") != std::string::npos);
    }

    // amplitude count mismatch
    CHECK_THROWS_AS((void)ket_from_json(nlohmann::json{{"dims", {2, 2}}, {"re", {1.0, 0.0}}}),
                    IoError);

    TempFile bad("bad.txt", "ket 2 2\n1 0\n");  // too few rows
    CHECK_THROWS_AS((void)load_ket(bad.path), IoError);
    CHECK_THROWS_AS((void)load_ket("/tmp/entnorms_does_not_exist.json"), IoError);
}

TEST_CASE("write_report writes parseable JSON") {
    const std::string path = "/tmp/entnorms_test_report.json";
    write_report(path, nlohmann::json{{"value", 1.5}, {"seed", 0}});
    std::ifstream in(path);
    nlohmann::json j;
    in >> j;
    CHECK(j["value"] == 1.5);
    std::remove(path.c_str());
}
