#include "entnorms/multipartite.hpp"
#include "entnorms/oracle.hpp"
#include "entnorms/preserver.hpp"
#include "entnorms/schmidt.hpp"
#include "entnorms/superop.hpp"
#include "entnorms/tensor.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace entnorms;

namespace {

Ket make_ket(const Vec& amps, const std::vector<int>& dims) { return Ket(amps, Shape(dims)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Schmidt-decomposition entanglement norms and preserver classification";

    m.def(
        "schmidt_coefficients",
        [](const Vec& amps, const std::vector<int>& dims, const std::vector<int>& cut) {
            return schmidt_decompose(make_ket(amps, dims), cut).coeffs;
        },
        py::arg("amps"), py::arg("dims"), py::arg("cut") = std::vector<int>{0});

    m.def(
        "schmidt_rank",
        [](const Vec& amps, const std::vector<int>& dims, double tol) {
            const Ket v = make_ket(amps, dims);
            return schmidt_rank(v, std::vector<int>{0}, tol);
        },
        py::arg("amps"), py::arg("dims"), py::arg("tol") = 1e-8);

    m.def(
        "s_norm",
        [](const Vec& amps, const std::vector<int>& dims, int k) {
            return s_norm(make_ket(amps, dims), k).value;
        },
        py::arg("amps"), py::arg("dims"), py::arg("k"));

    m.def(
        "S_norm",
        [](const Mat& x, const std::vector<int>& row_dims, const std::vector<int>& col_dims,
           int k, int restarts, uint64_t seed) {
            SNormOptions opts;
            if (restarts > 0) opts.restarts = restarts;
            opts.seed = seed;
            const NormResult res = S_norm(Opr(x, Shape(row_dims), Shape(col_dims)), k, opts);
            py::dict d;
            d["value"] = res.value;
            d["converged"] = res.converged;
            d["iterations"] = res.iterations;
            d["restart_spread"] = res.restart_spread;
            return d;
        },
        py::arg("matrix"), py::arg("row_dims"), py::arg("col_dims"), py::arg("k"),
        py::arg("restarts") = 0, py::arg("seed") = 0);

    m.def(
        "gme",
        [](const Vec& amps, const std::vector<int>& dims, int restarts, uint64_t seed) {
            GmeOptions opts;
            if (restarts > 0) opts.restarts = restarts;
            opts.seed = seed;
            const GmeResult res = gme(make_ket(amps, dims), opts);
            py::dict d;
            d["G"] = res.G;
            d["E"] = res.E;
            d["converged"] = res.converged;
            return d;
        },
        py::arg("amps"), py::arg("dims"), py::arg("restarts") = 0, py::arg("seed") = 0);

    m.def(
        "classify_local_form",
        [](const Mat& l, int m_, int n_, double tol) {
            const LocalFormReport rep = classify_local_form(l, m_, n_, tol);
            py::dict d;
            d["verdict"] = std::string(to_string(rep.verdict));
            d["residual"] = rep.residual;
            d["P"] = rep.P;
            d["Q"] = rep.Q;
            d["l_unitary"] = rep.l_unitary;
            return d;
        },
        py::arg("matrix"), py::arg("m"), py::arg("n"), py::arg("tol") = 1e-7);

    m.def(
        "check_preserver",
        [](const Mat& l, int m_, int n_, int k, int samples, double tol, uint64_t seed) {
            const PreservationReport rep =
                check_schmidt_rank_preservation(l, m_, n_, k, samples, tol, seed);
            py::dict d;
            d["verdict"] = rep.verdict;
            d["max_leak"] = rep.max_leak;
            d["samples"] = rep.samples;
            return d;
        },
        py::arg("matrix"), py::arg("m"), py::arg("n"), py::arg("k"), py::arg("samples") = 200,
        py::arg("tol") = 1e-6, py::arg("seed") = 0);

    m.def(
        "recover_local_form",
        [](const Mat& l, const std::vector<int>& dims) {
            const Shape shape(dims);
            const RecoveredForm rec = recover_local_form_multipartite(Opr(l, shape, shape));
            py::dict d;
            d["status"] = std::string(to_string(rec.status));
            d["residual"] = rec.residual;
            d["sigma"] = rec.sigma.map;
            return d;
        },
        py::arg("matrix"), py::arg("dims"));

    m.def(
        "brute_force_S_norm",
        [](const Mat& x, const std::vector<int>& row_dims, const std::vector<int>& col_dims,
           int k, long samples, uint64_t seed) {
            OracleConfig cfg;
            if (samples > 0) cfg.sample_count = samples;
            cfg.seed = seed;
            return brute_force_S_norm(Opr(x, Shape(row_dims), Shape(col_dims)), k, cfg);
        },
        py::arg("matrix"), py::arg("row_dims"), py::arg("col_dims"), py::arg("k"),
        py::arg("samples") = 0, py::arg("seed") = 0);
}
