#include "entnorms/io.hpp"
#include "entnorms/multipartite.hpp"
#include "entnorms/oracle.hpp"
#include "entnorms/preserver.hpp"
#include "entnorms/schmidt.hpp"
#include "entnorms/selftest.hpp"
#include "entnorms/superop.hpp"
#include "entnorms/tensor.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

namespace {

using entnorms::cxd;
using entnorms::Ket;
using entnorms::Mat;
using entnorms::Opr;
using entnorms::Shape;
using entnorms::Vec;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 success/classified, 2 violation or counterexample witnessed,
// 3 hypothesis failure, 4 input/format error.
constexpr int kOk = 0, kViolation = 2, kHypothesis = 3, kBadInput = 4;

double env_tol(const char* name, double fallback) {
    const char* v = std::getenv(name);
    if (!v) return fallback;
    char* end = nullptr;
    const double x = std::strtod(v, &end);
    if (end == v || x <= 0.0) return fallback;
    return x;
}

json report_header(const std::string& command, uint64_t seed) {
    json j;
    j["tool"] = "entnorms";
    j["version"] = kVersion;
    j["command"] = command;
    j["seed"] = seed;
    return j;
}

json vec_json(const Vec& v) {
    json re = json::array(), im = json::array();
    for (long i = 0; i < v.size(); ++i) {
        re.push_back(v[i].real());
        im.push_back(v[i].imag());
    }
    return json{{"re", re}, {"im", im}};
}

json mat_json(const Mat& a) {
    Vec flat(a.size());
    for (long r = 0; r < a.rows(); ++r)
        for (long c = 0; c < a.cols(); ++c) flat[r * a.cols() + c] = a(r, c);
    json j = vec_json(flat);
    j["rows"] = a.rows();
    j["cols"] = a.cols();
    return j;
}

void require_k(int k, int bound) {
    if (k < 1 || k > bound) throw entnorms::IoError("k out of range");
}

struct Emitter {
    std::string out_path;
    void operator()(const json& doc) const { entnorms::write_report(out_path, doc); }
};

int run(int argc, char** argv) {
    CLI::App app{"Schmidt-decomposition entanglement norms and preserver classification"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string input, out_path, cut_arg = "1", question, shape_arg = "2,2,2", kind;
    int k = 1, samples = 200, restarts = 0;
    long trials = 10000;
    uint64_t seed = 0;
    std::string only_arg;
    int exit_code = kOk;

    auto add_common = [&](CLI::App* sub, bool with_input = true) {
        if (with_input) sub->add_option("--input", input, "input file")->required();
        sub->add_option("--out", out_path, "write the JSON report here instead of stdout");
        sub->add_option("--seed", seed, "base RNG seed (default 0)");
    };

    // schmidt
    auto* sc_schmidt = app.add_subcommand("schmidt", "Schmidt decomposition of a ket");
    add_common(sc_schmidt);
    sc_schmidt->add_option("--cut", cut_arg, "comma-separated 1-based left factors (default 1)");
    sc_schmidt->callback([&] {
        const Ket v = entnorms::load_ket(input);
        std::vector<int> cut;
        for (const auto& tok : CLI::detail::split(cut_arg, ',')) {
            const int f = std::atoi(tok.c_str());
            if (f < 1 || f > v.shape.factors())
                throw entnorms::IoError("cut factor out of range: " + tok);
            cut.push_back(f - 1);
        }
        const auto sd = entnorms::schmidt_decompose(v, cut);
        json j = report_header("schmidt", seed);
        j["coefficients"] = json::array();
        for (long i = 0; i < sd.coeffs.size(); ++i) j["coefficients"].push_back(sd.coeffs[i]);
        j["grouped_dims"] = sd.grouped_shape.dims;
        j["schmidt_rank"] = entnorms::schmidt_rank(v, cut);
        j["left"] = json::array();
        j["right"] = json::array();
        for (const auto& l : sd.left) j["left"].push_back(vec_json(l));
        for (const auto& r : sd.right) j["right"].push_back(vec_json(r));
        Emitter{out_path}(j);
    });

    // norm
    auto* sc_norm = app.add_subcommand("norm", "s(k) norm of a ket or S(k) norm of an operator");
    add_common(sc_norm);
    sc_norm->add_option("--k", k, "Schmidt rank bound")->required();
    sc_norm->add_option("--kind", kind, "s (ket) or S (operator); inferred from the file if omitted");
    sc_norm->add_option("--restarts", restarts, "see-saw restarts (default 50)");
    sc_norm->callback([&] {
        json j = report_header("norm", seed);
        j["k"] = k;
        bool is_ket = kind == "s";
        if (kind.empty()) {
            try {
                entnorms::load_opr(input);
            } catch (const entnorms::IoError&) {
                is_ket = true;
            }
        }
        if (is_ket) {
            const Ket v = entnorms::load_ket(input);
            const Ket grouped =
                v.shape.factors() == 2 ? v : entnorms::regroup_bipartite(v, {0}).ket;
            require_k(k, std::min(grouped.shape.dims[0], grouped.shape.dims[1]));
            const auto res = entnorms::s_norm(grouped, k);
            j["kind"] = "s";
            j["value"] = res.value;
            j["witness"] = entnorms::ket_to_json(res.witness);
        } else {
            const Opr x = entnorms::load_opr(input);
            if (x.row_shape.factors() != 2 || x.col_shape.factors() != 2)
                throw entnorms::IoError("operator must have bipartite row_dims/col_dims");
            require_k(k, std::min({x.row_shape.dims[0], x.row_shape.dims[1],
                                   x.col_shape.dims[0], x.col_shape.dims[1]}));
            entnorms::SNormOptions opts;
            if (restarts > 0) opts.restarts = restarts;
            opts.seed = seed;
            const auto res = entnorms::S_norm(x, k, opts);
            j["kind"] = "S";
            j["value"] = res.value;
            j["restarts"] = opts.restarts;
            j["iterations"] = res.iterations;
            j["converged"] = res.converged;
            j["restart_spread"] = res.restart_spread;
            j["witness_left"] = entnorms::ket_to_json(res.witness_left);
            j["witness_right"] = entnorms::ket_to_json(res.witness_right);
        }
        Emitter{out_path}(j);
    });

    // classify
    auto* sc_classify = app.add_subcommand("classify", "preserver classification");
    sc_classify->require_subcommand(1);

    auto* sc_local = sc_classify->add_subcommand("local-form", "P x Q / S(P x Q) split");
    add_common(sc_local);
    sc_local->callback([&] {
        const Opr l = entnorms::load_opr(input);
        if (l.row_shape.factors() != 2 || l.row_shape != l.col_shape)
            throw entnorms::IoError("local-form expects a square operator with bipartite dims");
        const double tol = env_tol("ENTNORMS_LOCAL_TOL", 1e-7);
        const auto rep = entnorms::classify_local_form(l.entries, l.row_shape.dims[0],
                                                       l.row_shape.dims[1], tol);
        json j = report_header("classify local-form", seed);
        j["tolerances"] = {{"local_tol", tol}};
        j["verdict"] = entnorms::to_string(rep.verdict);
        j["residual"] = rep.residual;
        j["p_unitary"] = rep.p_unitary;
        j["q_unitary"] = rep.q_unitary;
        j["l_unitary"] = rep.l_unitary;
        json coeffs = json::array();
        for (long i = 0; i < rep.operator_schmidt_coeffs.size(); ++i)
            coeffs.push_back(rep.operator_schmidt_coeffs[i]);
        j["operator_schmidt_coeffs"] = coeffs;
        if (rep.verdict != entnorms::LocalFormVerdict::Neither) {
            j["P"] = mat_json(rep.P);
            j["Q"] = mat_json(rep.Q);
        }
        Emitter{out_path}(j);
    });

    auto* sc_pres = sc_classify->add_subcommand("preserver", "sampled Schmidt-rank preservation");
    add_common(sc_pres);
    sc_pres->add_option("--k", k, "Schmidt rank bound")->required();
    sc_pres->add_option("--samples", samples, "random SR<=k probes (default 200)");
    sc_pres->callback([&] {
        const Opr l = entnorms::load_opr(input);
        if (l.row_shape.factors() != 2 || l.row_shape != l.col_shape)
            throw entnorms::IoError("preserver expects a square operator with bipartite dims");
        const int m = l.row_shape.dims[0], n = l.row_shape.dims[1];
        require_k(k, std::min(m, n));
        const double tol = env_tol("ENTNORMS_LEAK_TOL", 1e-6);
        const auto rep =
            entnorms::check_schmidt_rank_preservation(l.entries, m, n, k, samples, tol, seed);
        json j = report_header("classify preserver", seed);
        j["tolerances"] = {{"leak_tol", tol}};
        j["k"] = k;
        j["samples"] = rep.samples;
        j["verdict"] = rep.verdict;
        j["max_leak"] = rep.max_leak;
        if (!rep.verdict) j["worst_input"] = entnorms::ket_to_json(rep.worst_input);
        Emitter{out_path}(j);
        if (!rep.verdict) exit_code = kViolation;
    });

    std::string choi_path, superop_path;
    auto* sc_cp = sc_classify->add_subcommand("cp", "CP maps preserving S_k up to scalars");
    sc_cp->add_option("--choi", choi_path, "Choi matrix file");
    sc_cp->add_option("--superop", superop_path, "superoperator matrix file");
    sc_cp->add_option("--k", k, "Schmidt rank bound")->required();
    sc_cp->add_option("--out", out_path, "write the JSON report here instead of stdout");
    sc_cp->add_option("--seed", seed, "base RNG seed (default 0)");
    sc_cp->callback([&] {
        if (choi_path.empty() == superop_path.empty())
            throw entnorms::IoError("provide exactly one of --choi / --superop");
        const entnorms::SuperOp phi = choi_path.empty()
                                          ? entnorms::load_superop(superop_path)
                                          : entnorms::load_superop_from_choi(choi_path);
        require_k(k, std::min(phi.m, phi.n));
        const double tol = env_tol("ENTNORMS_CP_TOL", 1e-7);
        const auto res = entnorms::classify_cp_sk_preserver(phi, k, tol);
        json j = report_header("classify cp", seed);
        j["k"] = k;
        j["tolerances"] = {{"cp_tol", tol}};
        j["status"] = entnorms::to_string(res.status);
        j["cp_defect"] = res.cp_defect;
        j["trace_preserving"] = res.trace_preserving;
        if (res.status == entnorms::CpSkStatus::Classified) {
            j["proportionality_defect"] = res.proportionality_defect;
            j["l_unitary"] = res.l_unitary;
            j["kraus"] = mat_json(res.L);
            j["local_form"] = entnorms::to_string(res.report.verdict);
        }
        if (res.status == entnorms::CpSkStatus::MultipleKrausDirections) {
            j["witness"] = entnorms::ket_to_json(res.witness);
            j["witness_rank_ratio"] = res.witness_rank_ratio;
            exit_code = kViolation;
        }
        if (res.status == entnorms::CpSkStatus::NotCP) exit_code = kHypothesis;
        Emitter{out_path}(j);
    });

    auto* sc_iso = sc_classify->add_subcommand("isometry", "S(k) norm isometry decomposition");
    sc_iso->add_option("--superop", superop_path, "superoperator matrix file")->required();
    sc_iso->add_option("--k", k, "Schmidt rank bound")->required();
    sc_iso->add_option("--out", out_path, "write the JSON report here instead of stdout");
    sc_iso->add_option("--seed", seed, "base RNG seed (default 0)");
    sc_iso->callback([&] {
        const entnorms::SuperOp phi = entnorms::load_superop(superop_path);
        require_k(k, std::min(phi.m, phi.n));
        const double tol = env_tol("ENTNORMS_ISO_TOL", 1e-6);
        const auto res = entnorms::classify_norm_isometry(phi, k, tol, seed);
        json j = report_header("classify isometry", seed);
        j["k"] = k;
        j["tolerances"] = {{"iso_tol", tol}};
        j["verdict"] = res.verdict;
        j["frobenius_isometry"] = res.frobenius_isometry;
        j["used_transpose"] = res.used_transpose;
        j["used_partial_transpose"] = res.used_partial_transpose;
        j["residual"] = res.residual;
        if (res.verdict) {
            j["U"] = mat_json(res.U);
            j["V"] = mat_json(res.V);
        } else if (res.has_witness) {
            j["witness"] = mat_json(res.witness);
            j["witness_gap"] = res.witness_gap;
            exit_code = kViolation;
        } else {
            exit_code = kHypothesis;
        }
        Emitter{out_path}(j);
    });

    // gme
    auto* sc_gme = app.add_subcommand("gme", "geometric measure of entanglement");
    add_common(sc_gme);
    sc_gme->add_option("--restarts", restarts, "restarts (default 20)");
    sc_gme->callback([&] {
        const Ket v = entnorms::load_ket(input);
        entnorms::GmeOptions opts;
        if (restarts > 0) opts.restarts = restarts;
        opts.seed = seed;
        const auto res = entnorms::gme(v, opts);
        json j = report_header("gme", seed);
        j["restarts"] = opts.restarts;
        j["G"] = res.G;
        j["E"] = res.E;
        j["converged"] = res.converged;
        j["iterations"] = res.iterations;
        json factors = json::array();
        for (const auto& f : res.witness.factors) factors.push_back(vec_json(f));
        j["nearest_product_factors"] = factors;
        Emitter{out_path}(j);
    });

    // recover
    auto* sc_recover = app.add_subcommand("recover", "multipartite S_sigma(P1 x ... x Pp) recovery");
    add_common(sc_recover);
    sc_recover->callback([&] {
        const Opr l = entnorms::load_opr(input);
        if (l.row_shape != l.col_shape)
            throw entnorms::IoError("recover expects a square operator (row_dims == col_dims)");
        const double tol = env_tol("ENTNORMS_RECOVER_TOL", 1e-7);
        const double cond = env_tol("ENTNORMS_COND_BOUND", 1e6);
        const auto res = entnorms::recover_local_form_multipartite(l, tol, cond);
        json j = report_header("recover", seed);
        j["tolerances"] = {{"recover_tol", tol}, {"cond_bound", cond}};
        j["status"] = entnorms::to_string(res.status);
        j["condition_number"] = res.condition_number;
        switch (res.status) {
            case entnorms::RecoverStatus::Recovered: {
                json sigma = json::array();
                for (int t : res.sigma.map) sigma.push_back(t + 1);  // 1-based for humans
                j["sigma"] = sigma;
                j["residual"] = res.residual;
                json facs = json::array();
                for (const auto& f : res.factors) facs.push_back(mat_json(f));
                j["factors"] = facs;
                break;
            }
            case entnorms::RecoverStatus::NotSeparabilityPreserving:
                j["witness"] = entnorms::ket_to_json(res.witness);
                exit_code = kViolation;
                break;
            default:
                exit_code = kHypothesis;
        }
        Emitter{out_path}(j);
    });

    // gme-invariance
    auto* sc_inv = app.add_subcommand("gme-invariance", "E(Uv) = E(v) spot check");
    add_common(sc_inv);
    sc_inv->add_option("--samples", samples, "random states to compare (default 50)");
    sc_inv->callback([&] {
        const Opr u = entnorms::load_opr(input);
        if (u.row_shape != u.col_shape)
            throw entnorms::IoError("gme-invariance expects a square operator");
        const double tol = env_tol("ENTNORMS_GME_TOL", 1e-6);
        const auto res = entnorms::gme_invariance_check(u, samples, tol, seed);
        json j = report_header("gme-invariance", seed);
        j["tolerances"] = {{"gme_tol", tol}};
        j["samples"] = res.samples;
        j["max_deviation"] = res.max_deviation;
        j["known_form"] = res.known_form;
        Emitter{out_path}(j);
        if (res.max_deviation > tol) exit_code = kViolation;
    });

    // search
    auto* sc_search = app.add_subcommand("search", "randomized open-question counterexample search");
    sc_search->add_option("--question", question, "multipartite-k or rank-r-bipartite")->required();
    sc_search->add_option("--shape", shape_arg, "comma-separated dims (default 2,2,2)");
    sc_search->add_option("--k", k, "Schmidt/tensor rank bound (multipartite-k)");
    int r_opt = 2;
    sc_search->add_option("--r", r_opt, "operator rank bound (rank-r-bipartite, default 2)");
    sc_search->add_option("--trials", trials, "trial count (default 10000)");
    sc_search->add_option("--seed", seed, "base RNG seed (default 0)");
    sc_search->add_option("--out", out_path, "write the JSON report here instead of stdout");
    sc_search->callback([&] {
        std::vector<int> dims;
        for (const auto& tok : CLI::detail::split(shape_arg, ','))
            dims.push_back(std::atoi(tok.c_str()));
        entnorms::CounterexampleConfig cfg;
        try {
            cfg.shape = Shape(dims);
        } catch (const std::invalid_argument& e) {
            throw entnorms::IoError(std::string("bad --shape: ") + e.what());
        }
        cfg.k = k;
        cfg.r = r_opt;
        cfg.trials = trials;
        cfg.seed = seed;
        entnorms::OpenQuestion q;
        if (question == "multipartite-k")
            q = entnorms::OpenQuestion::MultipartiteK;
        else if (question == "rank-r-bipartite")
            q = entnorms::OpenQuestion::RankRBipartite;
        else
            throw entnorms::IoError("unknown --question: " + question);
        entnorms::SearchReport rep;
        try {
            rep = entnorms::counterexample_search(q, cfg);
        } catch (const std::invalid_argument& e) {
            throw entnorms::IoError(e.what());
        }
        json j = report_header("search", seed);
        j["question"] = question;
        j["shape"] = cfg.shape.dims;
        j["k"] = cfg.k;
        j["r"] = cfg.r;
        j["trials"] = rep.trials;
        j["violations_found"] = rep.violations_found;
        j["known_form_hits"] = rep.known_form_hits;
        j["best_violation"] = rep.best_violation;
        j["advisory"] =
            "no candidate found is not a proof; candidates are replayable leads, not claims";
        json cands = json::array();
        for (const auto& cand : rep.candidates)
            cands.push_back({{"seed", cand.seed}, {"violation", cand.violation}, {"note", cand.note}});
        j["candidates"] = cands;
        Emitter{out_path}(j);
        if (!rep.candidates.empty()) exit_code = kViolation;
    });

    // selftest
    auto* sc_self = app.add_subcommand("selftest", "run the acceptance criteria");
    sc_self->add_option("--only", only_arg, "comma-separated criterion ids");
    sc_self->add_option("--seed", seed, "base RNG seed (default 0)");
    sc_self->add_option("--out", out_path, "write the JSON report here instead of stdout");
    sc_self->callback([&] {
        entnorms::SelftestOptions opts;
        opts.seed = seed;
        for (const auto& tok : CLI::detail::split(only_arg, ','))
            if (!tok.empty()) opts.only.push_back(std::atoi(tok.c_str()));
        const auto results = entnorms::run_acceptance(opts, &std::cerr);
        json j = report_header("selftest", seed);
        json arr = json::array();
        for (const auto& res : results)
            arr.push_back({{"id", res.id},
                           {"name", res.name},
                           {"passed", res.passed},
                           {"detail", res.detail},
                           {"seconds", res.seconds}});
        j["criteria"] = arr;
        j["all_passed"] = entnorms::all_passed(results);
        Emitter{out_path}(j);
        if (!entnorms::all_passed(results)) exit_code = 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return kBadInput;
    } catch (const entnorms::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadInput;
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
