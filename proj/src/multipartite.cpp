#include "entnorms/multipartite.hpp"

#include "entnorms/random.hpp"
#include "entnorms/schmidt.hpp"
#include "entnorms/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace entnorms {

const char* to_string(RecoverStatus s) {
    switch (s) {
        case RecoverStatus::Recovered: return "Recovered";
        case RecoverStatus::NotSeparabilityPreserving: return "NotSeparabilityPreserving";
        case RecoverStatus::InvertibilityUnknown: return "InvertibilityUnknown";
        default: return "AmbiguousSubsystem";
    }
}

Ket FactorList::assemble(const Shape& shape) const {
    if (factors.size() != shape.dims.size())
        throw std::invalid_argument("FactorList::assemble: party count mismatch");
    Vec v = factors[0];
    for (size_t i = 1; i < factors.size(); ++i) v = kron(v, factors[i]);
    return Ket(v, shape);
}

double parallel_defect(const Vec& a, const Vec& b) {
    const double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0)
        throw std::invalid_argument("parallel_defect: zero factor");
    return 1.0 - std::abs(a.dot(b)) / (na * nb);
}

namespace {

// Contracts v against the conjugates of `factors` on every party except
// `party`; the result lives in that party's space. Factors must be unit norm
// for the contraction to be the exact per-party argmax.
Vec contract_except(const Ket& v, const std::vector<Vec>& factors, int party) {
    const auto& dims = v.shape.dims;
    Vec out = Vec::Zero(dims[party]);
    std::vector<int> idx;
    for (long f = 0; f < v.amps.size(); ++f) {
        unflatten_index(f, dims, idx);
        cxd weight = 1.0;
        for (size_t j = 0; j < dims.size(); ++j)
            if (static_cast<int>(j) != party) weight *= std::conj(factors[j](idx[j]));
        out(idx[party]) += weight * v.amps(f);
    }
    return out;
}

}  // namespace

ProductTest is_product_state(const Ket& v, double tol) {
    if (v.norm() == 0.0) throw std::invalid_argument("is_product_state: zero vector");
    ProductTest pt;
    const int p = v.shape.factors();
    pt.factors.factors.resize(p);
    bool all_rank_one = true;
    if (p == 1) {
        pt.factors.factors[0] = v.amps;
        pt.is_product = true;
        pt.residual = 0.0;
        return pt;
    }
    for (int i = 0; i < p; ++i) {
        Regrouped rg = regroup_bipartite(v, {i});
        const int m = rg.ket.shape.dims[0], n = rg.ket.shape.dims[1];
        Eigen::JacobiSVD<Mat> svd(reshape_rm(rg.ket.amps, m, n), Eigen::ComputeThinU);
        const auto& s = svd.singularValues();
        if (s.size() > 1 && s(1) > tol * s(0)) all_rank_one = false;
        pt.factors.factors[i] = svd.matrixU().col(0);
    }
    // Fix phases so the reconstruction is exact; the overall scalar (and the
    // norm of v) is folded into the first factor.
    Ket t = pt.factors.assemble(v.shape);
    const cxd scale = t.amps.dot(v.amps);  // <t|v>, t is unit norm
    pt.factors.factors[0] *= scale;
    t = pt.factors.assemble(v.shape);
    pt.residual = (v.amps - t.amps).norm() / v.norm();
    pt.is_product = all_rank_one;
    return pt;
}

SeparableSumResult separable_sum_test(const FactorList& a, const FactorList& b,
                                      const Shape& shape, double tol) {
    SeparableSumResult res;
    for (size_t i = 0; i < shape.dims.size(); ++i)
        if (parallel_defect(a.factors[i], b.factors[i]) > tol) ++res.differ_count;
    Ket sa = a.assemble(shape), sb = b.assemble(shape);
    Vec sum = sa.amps + sb.amps;
    if (sum.norm() <= 1e-12 * (sa.norm() + sb.norm())) {
        res.degenerate_sum = true;
        return res;
    }
    res.sum_is_separable = is_product_state(Ket(sum, shape), 1e-6).is_product;
    return res;
}

GmeResult gme(const Ket& v_in, const GmeOptions& opts) {
    Ket v(v_in.amps / v_in.norm(), v_in.shape);
    const int p = v.shape.factors();
    GmeResult result;
    for (int r = 0; r < opts.restarts; ++r) {
        Sampler s(derive_seed(opts.seed, r));
        std::vector<Vec> w(p);
        for (int i = 0; i < p; ++i) {
            w[i] = s.gaussian_vec(v.shape.dims[i]);
            w[i] /= w[i].norm();
        }
        double best = 0.0;
        std::vector<double> trace;
        int sweeps = 0;
        bool converged = false;
        for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
            double obj = 0.0;
            for (int i = 0; i < p; ++i) {
                Vec c = contract_except(v, w, i);
                const double nc = c.norm();
                if (nc > 1e-300) w[i] = c / nc;
                obj = nc;  // after the update, |<w|v>| equals ||c||
            }
            ++sweeps;
            if (obj <= best) {
                converged = true;
                break;
            }
            const double improvement = obj - best;
            best = obj;
            trace.push_back(best);
            if (improvement < opts.tol) {
                converged = true;
                break;
            }
        }
        ++result.restarts_used;
        if (best > result.G) {
            result.G = best;
            result.witness.factors = w;
            result.iterations = sweeps;
            result.converged = converged;
            result.trace = trace;
        }
    }
    result.E = 1.0 - result.G * result.G;
    return result;
}

namespace {

struct RecoverAttempt {
    RecoverStatus status = RecoverStatus::AmbiguousSubsystem;
    Permutation sigma;
    std::vector<Mat> factors;
    double residual = 1.0;
    Ket witness;
};

Ket product_with(const std::vector<Vec>& refs, const Shape& shape, int party, const Vec& repl) {
    Vec v = (party == 0) ? repl : refs[0];
    for (int i = 1; i < shape.factors(); ++i) v = kron(v, (i == party) ? repl : refs[i]);
    return Ket(v, shape);
}

RecoverAttempt recover_attempt(const Opr& l, const std::vector<Vec>& refs, double tol) {
    RecoverAttempt out;
    const Shape& shape = l.col_shape;
    const int p = shape.factors();
    const double par_tol = 1e-6;

    Ket r = product_with(refs, shape, -1, refs[0]);
    Ket w0(l.entries * r.amps, l.row_shape);
    if (w0.norm() <= 1e-12) return out;  // degenerate reference; caller retries
    ProductTest pt0 = is_product_state(w0, tol);
    if (!pt0.is_product) {
        out.status = RecoverStatus::NotSeparabilityPreserving;
        out.witness = r;
        return out;
    }
    std::vector<Vec> base(p);
    for (int h = 0; h < p; ++h) base[h] = pt0.factors.factors[h] / pt0.factors.factors[h].norm();

    std::vector<int> slot_of(p, -1);  // input party -> output slot
    std::vector<Mat> raw(p);
    for (int i = 0; i < p; ++i) {
        const int ni = shape.dims[i];
        std::vector<Ket> images;
        images.reserve(ni);
        int slot = -1;
        for (int j = 0; j < ni; ++j) {
            Vec ej = Vec::Zero(ni);
            ej(j) = 1.0;
            Ket probe = product_with(refs, shape, i, ej);
            Ket img(l.entries * probe.amps, l.row_shape);
            ProductTest pt = is_product_state(img, tol);
            if (!pt.is_product) {
                out.status = RecoverStatus::NotSeparabilityPreserving;
                out.witness = probe;
                return out;
            }
            // Which output slots moved relative to the reference image?
            std::vector<int> moved;
            for (int h = 0; h < p; ++h)
                if (parallel_defect(pt.factors.factors[h], base[h]) > par_tol) moved.push_back(h);
            if (moved.size() > 1) {
                // A single-party change spread over several output parties:
                // the separable input r + probe has an entangled image.
                Vec wsum = r.amps + probe.amps;
                out.status = RecoverStatus::NotSeparabilityPreserving;
                out.witness = Ket(wsum / wsum.norm(), shape);
                return out;
            }
            if (moved.size() == 1) {
                if (slot == -1) slot = moved[0];
                else if (slot != moved[0]) return out;  // inconsistent: ambiguous
            }
            images.push_back(img);
        }
        if (slot == -1) {
            if (ni == 1) {
                // Trivial party; its output slot is resolved after the loop.
                raw[i] = Mat::Zero(1, 1);
                continue;
            }
            return out;  // no probe moved anything: degenerate reference
        }
        if (l.row_shape.dims[slot] != ni) return out;
        slot_of[i] = slot;
        // Columns of P_i up to one common scalar: contract each probe image
        // against the shared (non-varying) reference factors.
        Mat pi(ni, ni);
        for (int j = 0; j < ni; ++j) {
            std::vector<Vec> ctx = base;
            Vec col = contract_except(images[j], ctx, slot);
            pi.col(j) = col;
        }
        raw[i] = pi;
    }

    // Dim-1 parties never move a probe; give them the leftover dim-1 slots.
    for (int i = 0; i < p; ++i) {
        if (slot_of[i] != -1) continue;
        for (int t = 0; t < p; ++t) {
            if (l.row_shape.dims[t] != 1) continue;
            if (std::find(slot_of.begin(), slot_of.end(), t) == slot_of.end()) {
                slot_of[i] = t;
                Vec col = contract_except(Ket(l.entries * r.amps, l.row_shape), base, t);
                raw[i](0, 0) = col(0);
                break;
            }
        }
        if (slot_of[i] == -1) return out;
    }

    std::vector<int> sigma_map(p, -1);  // sigma(t) = input party at output slot t
    for (int i = 0; i < p; ++i) {
        if (sigma_map[slot_of[i]] != -1) return out;  // two parties on one slot
        sigma_map[slot_of[i]] = i;
    }
    Permutation sigma(sigma_map);

    // Assemble S_sigma (P_1 x ... x P_p) and fix the global scale.
    Mat prod = raw[0];
    std::vector<int> out_dims{shape.dims[slot_of[0]]};
    for (int i = 1; i < p; ++i) {
        prod = kron(prod, raw[i]);
        out_dims.push_back(shape.dims[slot_of[i]]);
    }
    Mat recon = swap_operator(sigma, Shape(out_dims)).entries * prod;
    const cxd scale = recon.conjugate().cwiseProduct(l.entries).sum() / recon.squaredNorm();
    raw[0] *= scale;
    recon *= scale;
    const double residual = (l.entries - recon).norm() / l.entries.norm();
    if (residual > std::max(tol, 1e-8) * 10) return out;

    // Presentation convention: unit-norm first column with real-positive
    // leading entry for P_2..P_p; the compensating scalar sits on P_1.
    for (int i = 1; i < p; ++i) {
        cxd c = raw[i].col(0).norm();
        for (int s = 0; s < raw[i].rows(); ++s)
            if (std::abs(raw[i](s, 0)) > 1e-12 * raw[i].norm()) {
                c *= raw[i](s, 0) / std::abs(raw[i](s, 0));
                break;
            }
        raw[i] /= c;
        raw[0] *= c;
    }

    out.status = RecoverStatus::Recovered;
    out.sigma = sigma;
    out.factors = raw;
    out.residual = residual;
    return out;
}

}  // namespace

RecoveredForm recover_local_form_multipartite(const Opr& l, double tol, double cond_bound) {
    if (l.row_shape != l.col_shape)
        throw std::invalid_argument("recover_local_form_multipartite: operator must be square "
                                    "on a factor shape");
    RecoveredForm form;
    const Shape& shape = l.col_shape;
    const int p = shape.factors();
    const double cond = [&] {
        Eigen::JacobiSVD<Mat> svd(l.entries);
        const auto& s = svd.singularValues();
        return s(s.size() - 1) > 0 ? s(0) / s(s.size() - 1)
                                   : std::numeric_limits<double>::infinity();
    }();
    form.condition_number = cond;
    if (!(cond <= cond_bound)) {
        form.status = RecoverStatus::InvertibilityUnknown;
        return form;
    }

    for (int attempt = 0; attempt < 3; ++attempt) {
        std::vector<Vec> refs(p);
        if (attempt == 0) {
            for (int i = 0; i < p; ++i) {
                refs[i] = Vec::Zero(shape.dims[i]);
                refs[i](0) = 1.0;
            }
        } else {
            Sampler s(derive_seed(0xfeed, attempt));
            for (int i = 0; i < p; ++i) {
                refs[i] = s.gaussian_vec(shape.dims[i]);
                refs[i] /= refs[i].norm();
            }
        }
        RecoverAttempt a = recover_attempt(l, refs, tol);
        if (a.status == RecoverStatus::Recovered ||
            a.status == RecoverStatus::NotSeparabilityPreserving) {
            form.status = a.status;
            form.sigma = a.sigma;
            form.factors = a.factors;
            form.residual = a.residual;
            form.witness = a.witness;
            return form;
        }
    }
    form.status = RecoverStatus::AmbiguousSubsystem;
    return form;
}

InvarianceRecord gme_invariance_check(const Opr& u, int n_samples, double /*tol*/,
                                      uint64_t seed) {
    InvarianceRecord rec;
    rec.samples = n_samples;
    const Shape& shape = u.col_shape;
    GmeOptions gopts;
    for (int i = 0; i < n_samples; ++i) {
        Sampler s(derive_seed(seed, i));
        Ket v = s.haar_ket(shape);
        Ket uv(u.entries * v.amps, u.row_shape);
        gopts.seed = derive_seed(seed, 1000 + i);
        const double ev = gme(v, gopts).E;
        gopts.seed = derive_seed(seed, 2000 + i);
        const double euv = gme(uv, gopts).E;
        rec.max_deviation = std::max(rec.max_deviation, std::abs(ev - euv));
    }
    RecoveredForm rf = recover_local_form_multipartite(u);
    if (rf.status == RecoverStatus::Recovered) {
        bool unitary = (u.entries.adjoint() * u.entries -
                        Mat::Identity(u.entries.cols(), u.entries.cols()))
                           .norm() <= 1e-6 * u.entries.cols();
        rec.known_form = unitary;
    }
    return rec;
}

}  // namespace entnorms
