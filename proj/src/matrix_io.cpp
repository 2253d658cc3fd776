#include "qla/matrix_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace qla {

namespace {

[[noreturn]] void parse_fail(const std::string& why) { throw Error(Errc::ParseError, why); }

QMatrix parse_text_matrix(std::string_view text) {
  std::istringstream in{std::string(text)};
  long long rows = 0, cols = 0;
  if (!(in >> rows >> cols)) parse_fail("matrix header must be 'rows cols'");
  if (rows <= 0 || cols <= 0) parse_fail("matrix dimensions must be positive");
  std::vector<Quaternion> entries;
  entries.reserve(static_cast<std::size_t>(rows * cols));
  std::string token;
  while (in >> token) entries.push_back(parse_quaternion(token));
  if (entries.size() != static_cast<std::size_t>(rows * cols)) {
    parse_fail("expected " + std::to_string(rows * cols) + " entries, found " + std::to_string(entries.size()));
  }
  return QMatrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(entries));
}

Quaternion quaternion_from_json(const nlohmann::json& e) {
  if (e.is_array() && e.size() == 4 && std::all_of(e.begin(), e.end(), [](const auto& x) { return x.is_number(); })) {
    return {e[0].get<double>(), e[1].get<double>(), e[2].get<double>(), e[3].get<double>()};
  }
  if (e.is_string()) return parse_quaternion(e.get<std::string>());
  parse_fail("entry must be [w,x,y,z] or a quaternion literal");
}

}  // namespace

QMatrix matrix_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("rows") || !doc.contains("cols") || !doc.contains("entries")) {
    parse_fail("matrix document needs rows, cols and entries");
  }
  if (!doc["rows"].is_number_integer() || !doc["cols"].is_number_integer()) {
    parse_fail("rows and cols must be integers");
  }
  const auto rows = doc["rows"].get<long long>();
  const auto cols = doc["cols"].get<long long>();
  if (rows <= 0 || cols <= 0) parse_fail("matrix dimensions must be positive");
  const auto& entries = doc["entries"];
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(rows * cols)) {
    parse_fail("entries must be a row-major array of rows*cols quaternions");
  }
  std::vector<Quaternion> data;
  data.reserve(entries.size());
  for (const auto& e : entries) data.push_back(quaternion_from_json(e));
  return QMatrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(data));
}

QMatrix parse_matrix(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) parse_fail("empty matrix input");
  if (text[first] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      parse_fail(std::string("invalid JSON: ") + e.what());
    }
    return matrix_from_json(doc);
  }
  return parse_text_matrix(text);
}

QMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix(buf.str());
}

nlohmann::json to_json(const Quaternion& q) { return nlohmann::json::array({q.w, q.x, q.y, q.z}); }

nlohmann::json to_json(const QVector& v) {
  auto out = nlohmann::json::array();
  for (const auto& q : v) out.push_back(to_json(q));
  return out;
}

nlohmann::json to_json(const QMatrix& m) {
  auto entries = nlohmann::json::array();
  for (const auto& q : m.entries()) entries.push_back(to_json(q));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

QVector parse_vector(std::string_view text) {
  std::vector<Quaternion> entries;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    entries.push_back(parse_quaternion(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return QVector(std::move(entries));
}

}  // namespace qla
