#ifndef ENTNORMS_IO_HPP
#define ENTNORMS_IO_HPP

#include "entnorms/superop.hpp"
#include "entnorms/types.hpp"

#include <stdexcept>
#include <string>

#include "json.hpp"

namespace entnorms {

// Raised on malformed files; the message names the offending field.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// JSON forms. Kets: {"dims": [n1,...,np], "re": [...], "im": [...]} row-major
// ("im" optional, defaults to zero). Operators carry "row_dims"/"col_dims"
// and the row-major flattening of the matrix. Superoperators carry "m", "n"
// and the (mn)^2 x (mn)^2 matrix in the row-major vectorization basis.
nlohmann::json ket_to_json(const Ket& v);
nlohmann::json opr_to_json(const Opr& a);
nlohmann::json superop_to_json(const SuperOp& phi);
Ket ket_from_json(const nlohmann::json& j);
Opr opr_from_json(const nlohmann::json& j);
SuperOp superop_from_json(const nlohmann::json& j);

// Loaders sniff the format: JSON documents start with '{'; anything else is
// the plain-text fixture format ("ket n1 n2 ..." or "opr r1 r2 | c1 c2 ..."
// header, then one "re im" pair per line).
Ket load_ket(const std::string& path);
Opr load_opr(const std::string& path);
SuperOp load_superop(const std::string& path);

// A Choi matrix stored as an operator file (row/col dims both (mn, mn) or a
// flat (mn)^2 square matrix), converted back to the superoperator.
SuperOp load_superop_from_choi(const std::string& path);
SuperOp superop_from_choi(const Mat& choi, int m, int n);

// Serializes to `path`, or stdout when path is empty.
void write_report(const std::string& path, const nlohmann::json& doc);

}  // namespace entnorms

#endif
