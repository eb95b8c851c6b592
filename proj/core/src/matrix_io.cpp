#include "qibg/matrix_io.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace qibg {

namespace {

template <typename Scalar>
nlohmann::json entries_json(const SquareMatrix<Scalar>& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.n(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.n(); ++j) {
      if constexpr (std::is_same_v<Scalar, mpq_class>)
        row.push_back(to_string(m(i, j)));
      else
        row.push_back(m(i, j).get_str());
    }
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"n", m.n()}, {"entries", std::move(rows)}};
}

std::string entry_text(const nlohmann::json& e) {
  if (e.is_string()) return e.get<std::string>();
  if (e.is_number_integer()) return e.dump();
  throw ParseError("matrix entries must be strings or integers, got " + e.dump());
}

}  // namespace

nlohmann::json to_json(const IntegerMatrix& m) { return entries_json(m); }
nlohmann::json to_json(const RationalMatrix& m) { return entries_json(m); }
nlohmann::json to_json(const UnimodularMatrix& m) { return entries_json(m.matrix()); }

mpq_class parse_rational(const std::string& text) {
  mpq_class q;
  std::string t = text;
  if (!t.empty() && t.front() == '+') t.erase(0, 1);
  if (t.empty() || q.set_str(t, 10) != 0) throw ParseError("not a rational number: '" + text + "'");
  if (q.get_den() == 0) throw ParseError("zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

mpz_class parse_integer(const std::string& text) {
  mpq_class q = parse_rational(text);
  if (q.get_den() != 1) throw ParseError("not an integer: '" + text + "'");
  return q.get_num();
}

RationalMatrix rational_matrix_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array())
    throw ParseError("matrix document needs an \"entries\" array");
  const auto& rows = doc["entries"];
  const std::size_t n = rows.size();
  if (n == 0) throw ParseError("matrix must have at least one row");
  if (doc.contains("n")) {
    if (!doc["n"].is_number_unsigned() || doc["n"].get<std::size_t>() != n)
      throw ParseError("\"n\" does not match the number of rows");
  }
  RationalMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != n) throw ParseError("matrix is not square");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = parse_rational(entry_text(rows[i][j]));
  }
  return m;
}

IntegerMatrix integer_matrix_from_json(const nlohmann::json& doc) {
  RationalMatrix r = rational_matrix_from_json(doc);
  try {
    return to_integer(r);
  } catch (const NotIntegral& e) {
    throw ParseError(e.what());
  }
}

UnimodularMatrix unimodular_from_json(const nlohmann::json& doc) {
  return UnimodularMatrix(integer_matrix_from_json(doc));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::string text = read_text_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot move result into " + path.string() + ": " + ec.message());
  }
}

}  // namespace qibg
