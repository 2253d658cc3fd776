#pragma once

// Matrix files come in two forms:
//   text:  first line "n m", then n lines of m quaternion literals
//   JSON:  {"rows": n, "cols": m, "entries": [[w,x,y,z], ...]} row-major
// Readers accept both (JSON is detected by a leading '{'); writers emit JSON.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qla/qmatrix.hpp"

namespace qla {

QMatrix parse_matrix(std::string_view text);
QMatrix read_matrix_file(const std::filesystem::path& path);

nlohmann::json to_json(const Quaternion& q);
nlohmann::json to_json(const QVector& v);
nlohmann::json to_json(const QMatrix& m);
QMatrix matrix_from_json(const nlohmann::json& doc);

/// Comma-separated quaternion literals, e.g. "1,i,0.5-j".
QVector parse_vector(std::string_view text);

}  // namespace qla
