#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "form.hpp"
#include "numkernel.hpp"

namespace blocktrid {

enum class MatrixFormat { MatrixMarketArray, MatrixMarketCoordinate, Csv, Json };

/// "mm" (array on output; either layout on input), "mm-coord", "csv", "json".
MatrixFormat parse_format_name(std::string_view name);
const char* format_name(MatrixFormat format);
/// .mtx/.mm, .csv, .json; nullopt otherwise.
std::optional<MatrixFormat> format_from_extension(const std::filesystem::path& path);
const char* file_extension(MatrixFormat format);

/// Shortest-safe decimal: 17 significant digits, exact on re-parse.
std::string format_real(double x);
/// CSV token grammar: `a`, `bi`, `a+bi`, `a-bi`, whitespace tolerant.
std::string format_complex_token(Complex z);
/// Throws `Parse` on malformed input.
Complex parse_complex_token(std::string_view token);

/// Either Matrix Market layout is accepted when `format` is a Matrix Market
/// format; the header decides. Throws `Parse` with a line number, or
/// `DimensionMismatch` when `require_square` and the matrix is not square.
Matrix read_matrix(std::istream& in, MatrixFormat format, bool require_square = true);
Matrix read_matrix_file(const std::filesystem::path& path, MatrixFormat format,
                        bool require_square = true);

void write_matrix(std::ostream& out, const Matrix& m, MatrixFormat format);
void write_matrix_file(const std::filesystem::path& path, const Matrix& m, MatrixFormat format);

std::string matrix_to_string(const Matrix& m, MatrixFormat format);
Matrix matrix_from_string(std::string_view text, MatrixFormat format, bool require_square = true);

/// Report JSON plus schedule and construction log of the form.
nlohmann::json form_report_json(const SparsifiedForm& form);

struct EmitOptions {
  MatrixFormat format = MatrixFormat::MatrixMarketArray;
  bool svg = false;
  double threshold = kPatternThreshold;
  std::string prefix;  // file-name prefix, e.g. "S1_" for family members
};

/// Writes <prefix>M.<ext>, <prefix>U.<ext>, <prefix>report.json and, with
/// `svg`, <prefix>M.svg. Throws `Io`.
void emit_form(const SparsifiedForm& form, const std::filesystem::path& out_dir,
               const EmitOptions& options);

}  // namespace blocktrid
