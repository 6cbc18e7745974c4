#include "entnorms/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace entnorms {
namespace {

using nlohmann::json;

std::vector<int> int_list(const json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_array())
        throw IoError(std::string("missing or non-array field \"") + field + "\"");
    std::vector<int> out;
    for (const auto& e : j[field]) {
        if (!e.is_number_integer() || e.get<long>() < 1)
            throw IoError(std::string("field \"") + field + "\" must hold positive integers");
        out.push_back(e.get<int>());
    }
    if (out.empty()) throw IoError(std::string("field \"") + field + "\" is empty");
    return out;
}

Vec amplitudes(const json& j, long expected) {
    if (!j.contains("re") || !j["re"].is_array())
        throw IoError("missing or non-array field \"re\"");
    const auto& re = j["re"];
    if (static_cast<long>(re.size()) != expected)
        throw IoError("field \"re\" has length " + std::to_string(re.size()) +
                      ", expected " + std::to_string(expected));
    Vec v(expected);
    for (long i = 0; i < expected; ++i) {
        if (!re[i].is_number()) throw IoError("field \"re\" must hold numbers");
        v[i] = cxd(re[i].get<double>(), 0.0);
    }
    if (j.contains("im")) {
        const auto& im = j["im"];
        if (!im.is_array() || static_cast<long>(im.size()) != expected)
            throw IoError("field \"im\" must match the length of \"re\"");
        for (long i = 0; i < expected; ++i) {
            if (!im[i].is_number()) throw IoError("field \"im\" must hold numbers");
            v[i] += cxd(0.0, im[i].get<double>());
        }
    }
    return v;
}

json complex_fields(const Vec& v) {
    json j;
    j["re"] = json::array();
    j["im"] = json::array();
    for (long i = 0; i < v.size(); ++i) {
        j["re"].push_back(v[i].real());
        j["im"].push_back(v[i].imag());
    }
    return j;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool looks_like_json(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{';
    }
    return false;
}

json parse_json(const std::string& text, const std::string& path) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw IoError("malformed JSON in " + path);
    return j;
}

// Text fixtures: "ket n1 n2 ..." or "opr r1 r2 | c1 c2 ..." header, then one
// "re im" pair per line (blank lines and #-comments ignored).
struct TextDoc {
    std::string kind;
    std::vector<int> dims_a, dims_b;
    Vec amps;
};

TextDoc parse_text(const std::string& text, const std::string& path) {
    std::istringstream in(text);
    std::string line;
    TextDoc doc;
    std::vector<double> flat;
    bool have_header = false;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        if (!have_header) {
            if (!(ls >> doc.kind)) continue;
            if (doc.kind != "ket" && doc.kind != "opr")
                throw IoError("text header must start with \"ket\" or \"opr\" in " + path);
            std::string tok;
            bool second = false;
            while (ls >> tok) {
                if (tok == "|") {
                    second = true;
                    continue;
                }
                const int n = std::atoi(tok.c_str());
                if (n < 1) throw IoError("bad dimension \"" + tok + "\" in " + path);
                (second ? doc.dims_b : doc.dims_a).push_back(n);
            }
            if (doc.dims_a.empty() || (doc.kind == "opr" && doc.dims_b.empty()))
                throw IoError("text header is missing dimensions in " + path);
            have_header = true;
            continue;
        }
        double re, im;
        if (ls >> re) {
            if (!(ls >> im)) throw IoError("expected \"re im\" pairs in " + path);
            flat.push_back(re);
            flat.push_back(im);
        }
    }
    if (!have_header) throw IoError("empty fixture file: " + path);
    doc.amps.resize(static_cast<long>(flat.size() / 2));
    for (long i = 0; i < doc.amps.size(); ++i) doc.amps[i] = cxd(flat[2 * i], flat[2 * i + 1]);
    return doc;
}

}  // namespace

json ket_to_json(const Ket& v) {
    json j = complex_fields(v.amps);
    j["dims"] = v.shape.dims;
    return j;
}

json opr_to_json(const Opr& a) {
    Vec flat(a.entries.size());
    for (long r = 0; r < a.entries.rows(); ++r)
        for (long c = 0; c < a.entries.cols(); ++c)
            flat[r * a.entries.cols() + c] = a.entries(r, c);
    json j = complex_fields(flat);
    j["row_dims"] = a.row_shape.dims;
    j["col_dims"] = a.col_shape.dims;
    return j;
}

json superop_to_json(const SuperOp& phi) {
    Vec flat(phi.matrix.size());
    for (long r = 0; r < phi.matrix.rows(); ++r)
        for (long c = 0; c < phi.matrix.cols(); ++c)
            flat[r * phi.matrix.cols() + c] = phi.matrix(r, c);
    json j = complex_fields(flat);
    j["m"] = phi.m;
    j["n"] = phi.n;
    return j;
}

Ket ket_from_json(const json& j) {
    Shape shape(int_list(j, "dims"));
    return Ket(amplitudes(j, shape.total()), shape);
}

Opr opr_from_json(const json& j) {
    Shape rows(int_list(j, "row_dims"));
    Shape cols(int_list(j, "col_dims"));
    const Vec flat = amplitudes(j, rows.total() * cols.total());
    Mat a(rows.total(), cols.total());
    for (long r = 0; r < a.rows(); ++r)
        for (long c = 0; c < a.cols(); ++c) a(r, c) = flat[r * a.cols() + c];
    return Opr(a, rows, cols);
}

SuperOp superop_from_json(const json& j) {
    if (!j.contains("m") || !j.contains("n") || !j["m"].is_number_integer() ||
        !j["n"].is_number_integer())
        throw IoError("superoperator needs integer fields \"m\" and \"n\"");
    const int m = j["m"].get<int>(), n = j["n"].get<int>();
    if (m < 1 || n < 1) throw IoError("fields \"m\" and \"n\" must be positive");
    const long dd = static_cast<long>(m) * n * m * n;
    const Vec flat = amplitudes(j, dd * dd);
    Mat a(dd, dd);
    for (long r = 0; r < dd; ++r)
        for (long c = 0; c < dd; ++c) a(r, c) = flat[r * dd + c];
    return SuperOp(a, m, n);
}

Ket load_ket(const std::string& path) {
    const std::string text = slurp(path);
    if (looks_like_json(text)) return ket_from_json(parse_json(text, path));
    TextDoc doc = parse_text(text, path);
    if (doc.kind != "ket") throw IoError("expected a ket fixture in " + path);
    Shape shape(doc.dims_a);
    if (doc.amps.size() != shape.total())
        throw IoError("amplitude count does not match dims in " + path);
    return Ket(doc.amps, shape);
}

Opr load_opr(const std::string& path) {
    const std::string text = slurp(path);
    if (looks_like_json(text)) return opr_from_json(parse_json(text, path));
    TextDoc doc = parse_text(text, path);
    if (doc.kind != "opr") throw IoError("expected an operator fixture in " + path);
    Shape rows(doc.dims_a), cols(doc.dims_b);
    if (doc.amps.size() != rows.total() * cols.total())
        throw IoError("entry count does not match dims in " + path);
    Mat a(rows.total(), cols.total());
    for (long r = 0; r < a.rows(); ++r)
        for (long c = 0; c < a.cols(); ++c) a(r, c) = doc.amps[r * a.cols() + c];
    return Opr(a, rows, cols);
}

SuperOp load_superop(const std::string& path) {
    const std::string text = slurp(path);
    if (!looks_like_json(text)) throw IoError("superoperators use the JSON format: " + path);
    return superop_from_json(parse_json(text, path));
}

SuperOp superop_from_choi(const Mat& choi, int m, int n) {
    const long d = static_cast<long>(m) * n;
    if (choi.rows() != d * d || choi.cols() != d * d)
        throw IoError("Choi matrix has the wrong size for the given m, n");
    Mat mat(d * d, d * d);
    // C[(i,a),(j,b)] = Phi(E_ij)[a,b]  =>  M[(a,b),(i,j)] = C[(i,a),(j,b)].
    for (long i = 0; i < d; ++i)
        for (long a = 0; a < d; ++a)
            for (long j = 0; j < d; ++j)
                for (long b = 0; b < d; ++b)
                    mat(a * d + b, i * d + j) = choi(i * d + a, j * d + b);
    return SuperOp(mat, m, n);
}

SuperOp load_superop_from_choi(const std::string& path) {
    const std::string text = slurp(path);
    if (!looks_like_json(text)) throw IoError("Choi matrices use the JSON format: " + path);
    const json j = parse_json(text, path);
    const Opr c = opr_from_json(j);
    const long dd = c.row_shape.total();
    if (dd != c.col_shape.total()) throw IoError("Choi matrix must be square");
    const long d = static_cast<long>(std::llround(std::sqrt(static_cast<double>(dd))));
    if (d * d != dd) throw IoError("Choi matrix size must be a perfect square d^2");
    // The (m, n) split of d is ambiguous from the matrix alone; "m"/"n"
    // fields override the default (d, 1).
    int m = static_cast<int>(d), n = 1;
    if (j.contains("m") && j.contains("n")) {
        m = j["m"].get<int>();
        n = j["n"].get<int>();
        if (static_cast<long>(m) * n != d) throw IoError("fields \"m\"*\"n\" must equal d");
    }
    return superop_from_choi(c.entries, m, n);
}

void write_report(const std::string& path, const json& doc) {
    if (path.empty()) {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write file: " + path);
    out << doc.dump(2) << "\n";
}

}  // namespace entnorms
