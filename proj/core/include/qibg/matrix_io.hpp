#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "qibg/exactmat.hpp"

namespace qibg {

// Matrix documents look like {"n": 3, "entries": [["1","0","2"], ...]}.
// Entries are decimal strings ("p/q" allowed for rationals); plain JSON
// integers are accepted on input. "n" is optional on input and must agree
// with the row count when present.
nlohmann::json to_json(const IntegerMatrix& m);
nlohmann::json to_json(const RationalMatrix& m);
nlohmann::json to_json(const UnimodularMatrix& m);

RationalMatrix rational_matrix_from_json(const nlohmann::json& doc);
IntegerMatrix integer_matrix_from_json(const nlohmann::json& doc);
// Throws NotUnimodular when the parsed matrix has det != 1.
UnimodularMatrix unimodular_from_json(const nlohmann::json& doc);

mpq_class parse_rational(const std::string& text);
mpz_class parse_integer(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

// Writes through a temporary sibling file and renames it into place, so a
// crash never leaves a half-written result behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace qibg
