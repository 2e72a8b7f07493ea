#include "matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "render.hpp"

namespace blocktrid {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": " + what);
}

std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size()) return std::nullopt;
  return value;
}

double real_at(std::string_view s, std::size_t line) {
  const auto v = parse_real(s);
  if (!v) parse_fail(line, "malformed numeric token '" + std::string(s) + "'");
  if (!std::isfinite(*v)) parse_fail(line, "non-finite value '" + std::string(s) + "'");
  return *v;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t b = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

struct Line {
  std::size_t number;
  std::string text;
};

std::vector<Line> read_lines(std::istream& in) {
  std::vector<Line> lines;
  std::string s;
  std::size_t n = 0;
  while (std::getline(in, s)) lines.push_back({++n, s});
  return lines;
}

std::size_t size_at(std::string_view s, std::size_t line) {
  std::size_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) parse_fail(line, "malformed size '" + std::string(s) + "'");
  return v;
}

enum class Symmetry { General, Symmetric, Hermitian, Skew };

Matrix read_matrix_market(std::istream& in) {
  const std::vector<Line> lines = read_lines(in);
  if (lines.empty()) throw Error(ErrorCode::Parse, "line 1: empty Matrix Market file");
  const auto header = split_ws(lines[0].text);
  if (header.size() != 5 || lower(header[0]) != "%%matrixmarket" || lower(header[1]) != "matrix")
    parse_fail(1, "unsupported header '" + lines[0].text + "'");
  const std::string layout = lower(header[2]), field = lower(header[3]), sym = lower(header[4]);
  if (layout != "array" && layout != "coordinate") parse_fail(1, "unsupported layout '" + layout + "'");
  std::size_t values_per_entry = 0;
  if (field == "complex") values_per_entry = 2;
  else if (field == "real" || field == "integer" || field == "double") values_per_entry = 1;
  else parse_fail(1, "unsupported field '" + field + "'");
  Symmetry symmetry = Symmetry::General;
  if (sym == "symmetric") symmetry = Symmetry::Symmetric;
  else if (sym == "hermitian") symmetry = Symmetry::Hermitian;
  else if (sym == "skew-symmetric") symmetry = Symmetry::Skew;
  else if (sym != "general") parse_fail(1, "unsupported symmetry '" + sym + "'");
  if (symmetry == Symmetry::Hermitian && values_per_entry != 2) parse_fail(1, "hermitian requires complex field");

  std::size_t k = 1;
  auto next_data = [&]() -> const Line* {
    while (k < lines.size()) {
      const Line& l = lines[k++];
      const auto t = trim(l.text);
      if (t.empty() || t.front() == '%') continue;
      return &l;
    }
    return nullptr;
  };

  const Line* size_line = next_data();
  if (!size_line) parse_fail(lines.size(), "missing size line");
  const auto dims = split_ws(size_line->text);
  const bool coordinate = layout == "coordinate";
  if (dims.size() != (coordinate ? 3u : 2u)) parse_fail(size_line->number, "malformed size line");
  const std::size_t rows = size_at(dims[0], size_line->number);
  const std::size_t cols = size_at(dims[1], size_line->number);
  if (symmetry != Symmetry::General && rows != cols)
    parse_fail(size_line->number, "symmetric storage requires a square matrix");

  Matrix m(rows, cols);
  auto read_value = [&](const std::vector<std::string_view>& tok, std::size_t first, std::size_t line) {
    if (tok.size() != first + values_per_entry) parse_fail(line, "expected " + std::to_string(first + values_per_entry) + " tokens");
    const double re = real_at(tok[first], line);
    const double im = values_per_entry == 2 ? real_at(tok[first + 1], line) : 0.0;
    return Complex(re, im);
  };
  auto place = [&](std::size_t i, std::size_t j, Complex z, std::size_t line) {
    if (i == j && symmetry == Symmetry::Skew) parse_fail(line, "skew-symmetric diagonal entry");
    m(i, j) = z;
    if (i == j) return;
    switch (symmetry) {
      case Symmetry::General: break;
      case Symmetry::Symmetric: m(j, i) = z; break;
      case Symmetry::Hermitian: m(j, i) = std::conj(z); break;
      case Symmetry::Skew: m(j, i) = -z; break;
    }
  };

  if (!coordinate) {
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t i0 = symmetry == Symmetry::General ? 0 : (symmetry == Symmetry::Skew ? j + 1 : j);
      for (std::size_t i = i0; i < rows; ++i) {
        const Line* l = next_data();
        if (!l) parse_fail(lines.size(), "too few entries");
        place(i, j, read_value(split_ws(l->text), 0, l->number), l->number);
      }
    }
  } else {
    const std::size_t nnz = size_at(dims[2], size_line->number);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t e = 0; e < nnz; ++e) {
      const Line* l = next_data();
      if (!l) parse_fail(lines.size(), "too few entries");
      const auto tok = split_ws(l->text);
      if (tok.size() < 2) parse_fail(l->number, "malformed coordinate entry");
      const std::size_t i = size_at(tok[0], l->number), j = size_at(tok[1], l->number);
      if (i < 1 || i > rows || j < 1 || j > cols) parse_fail(l->number, "index out of range");
      if (symmetry != Symmetry::General && i < j) parse_fail(l->number, "entry above the diagonal in symmetric storage");
      if (!seen.insert({i, j}).second) parse_fail(l->number, "duplicate entry");
      place(i - 1, j - 1, read_value(tok, 2, l->number), l->number);
    }
  }
  if (const Line* extra = next_data()) parse_fail(extra->number, "unexpected trailing data");
  return m;
}

Matrix read_csv(std::istream& in) {
  std::vector<std::vector<Complex>> rows;
  for (const Line& l : read_lines(in)) {
    const auto t = trim(l.text);
    if (t.empty() || t.front() == '#') continue;
    std::vector<Complex> row;
    std::size_t b = 0;
    while (true) {
      const auto comma = t.find(',', b);
      const auto token = t.substr(b, comma == std::string_view::npos ? std::string_view::npos : comma - b);
      try {
        row.push_back(parse_complex_token(token));
      } catch (const Error& e) {
        parse_fail(l.number, e.what());
      }
      if (comma == std::string_view::npos) break;
      b = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      parse_fail(l.number, "row has " + std::to_string(row.size()) + " entries, expected " +
                               std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::Parse, "line 1: CSV input has no rows");
  std::vector<Complex> data;
  for (auto& r : rows) data.insert(data.end(), r.begin(), r.end());
  return Matrix(rows.size(), rows.front().size(), std::move(data));
}

Matrix read_json(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw Error(ErrorCode::Parse, "JSON matrix needs \"rows\", \"cols\" and \"data\"");
  if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned())
    throw Error(ErrorCode::Parse, "\"rows\" and \"cols\" must be non-negative integers");
  const auto rows = j["rows"].get<std::size_t>(), cols = j["cols"].get<std::size_t>();
  const auto& data = j["data"];
  if (!data.is_array() || data.size() != rows) throw Error(ErrorCode::Parse, "\"data\" must hold \"rows\" rows");
  std::vector<Complex> values;
  values.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = data[i];
    if (!row.is_array() || row.size() != cols)
      throw Error(ErrorCode::Parse, "row " + std::to_string(i + 1) + " must hold \"cols\" entries");
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& e = row[c];
      if (e.is_number()) {
        values.emplace_back(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        values.emplace_back(e[0].get<double>(), e[1].get<double>());
      } else {
        throw Error(ErrorCode::Parse, "entry (" + std::to_string(i + 1) + "," + std::to_string(c + 1) +
                                          ") must be [re, im] or a number");
      }
    }
  }
  return Matrix(rows, cols, std::move(values));
}

}  // namespace

MatrixFormat parse_format_name(std::string_view name) {
  const std::string n = lower(name);
  if (n == "mm" || n == "mtx" || n == "matrixmarket") return MatrixFormat::MatrixMarketArray;
  if (n == "mm-coord" || n == "coordinate") return MatrixFormat::MatrixMarketCoordinate;
  if (n == "csv") return MatrixFormat::Csv;
  if (n == "json") return MatrixFormat::Json;
  throw Error(ErrorCode::InvalidArgument, "unknown matrix format '" + std::string(name) + "'");
}

const char* format_name(MatrixFormat format) {
  switch (format) {
    case MatrixFormat::MatrixMarketArray: return "mm";
    case MatrixFormat::MatrixMarketCoordinate: return "mm-coord";
    case MatrixFormat::Csv: return "csv";
    case MatrixFormat::Json: return "json";
  }
  return "mm";
}

std::optional<MatrixFormat> format_from_extension(const std::filesystem::path& path) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".mtx" || ext == ".mm") return MatrixFormat::MatrixMarketArray;
  if (ext == ".csv") return MatrixFormat::Csv;
  if (ext == ".json") return MatrixFormat::Json;
  return std::nullopt;
}

const char* file_extension(MatrixFormat format) {
  switch (format) {
    case MatrixFormat::MatrixMarketArray:
    case MatrixFormat::MatrixMarketCoordinate: return ".mtx";
    case MatrixFormat::Csv: return ".csv";
    case MatrixFormat::Json: return ".json";
  }
  return ".mtx";
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_complex_token(Complex z) {
  const double im = z.imag();
  std::string out = format_real(z.real());
  out += std::signbit(im) ? '-' : '+';
  out += format_real(std::fabs(im));
  out += 'i';
  return out;
}

Complex parse_complex_token(std::string_view token) {
  const std::string_view t = trim(token);
  auto bad = [&]() -> Error {
    return Error(ErrorCode::Parse, "malformed complex token '" + std::string(t) + "'");
  };
  if (t.empty()) throw bad();
  if (t.back() != 'i') {
    const auto re = parse_real(t);
    if (!re || !std::isfinite(*re)) throw bad();
    return {*re, 0.0};
  }
  const std::string_view body = trim(t.substr(0, t.size() - 1));
  // The imaginary part starts at the last sign not belonging to an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  std::optional<double> re = 0.0, im;
  if (split == std::string_view::npos) {
    im = parse_real(body);
  } else {
    re = parse_real(body.substr(0, split));
    std::string_view imag = trim(body.substr(split + 1));
    if (imag.empty()) imag = "1";
    im = parse_real(imag);
    if (im && body[split] == '-') im = -*im;
  }
  if (!re || !im || !std::isfinite(*re) || !std::isfinite(*im)) throw bad();
  return {*re, *im};
}

Matrix read_matrix(std::istream& in, MatrixFormat format, bool require_square) {
  Matrix m;
  switch (format) {
    case MatrixFormat::MatrixMarketArray:
    case MatrixFormat::MatrixMarketCoordinate: m = read_matrix_market(in); break;
    case MatrixFormat::Csv: m = read_csv(in); break;
    case MatrixFormat::Json: m = read_json(in); break;
  }
  if (require_square && !m.is_square())
    throw Error(ErrorCode::DimensionMismatch, "matrix is " + std::to_string(m.rows()) + "x" +
                                                  std::to_string(m.cols()) + ", expected square");
  return m;
}

Matrix read_matrix_file(const std::filesystem::path& path, MatrixFormat format, bool require_square) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  try {
    return read_matrix(in, format, require_square);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_matrix(std::ostream& out, const Matrix& m, MatrixFormat format) {
  switch (format) {
    case MatrixFormat::MatrixMarketArray:
      out << "%%MatrixMarket matrix array complex general\n" << m.rows() << ' ' << m.cols() << '\n';
      for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i)
          out << format_real(m(i, j).real()) << ' ' << format_real(m(i, j).imag()) << '\n';
      break;
    case MatrixFormat::MatrixMarketCoordinate: {
      std::size_t nnz = 0;
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) nnz += m(i, j) != Complex{} ? 1 : 0;
      out << "%%MatrixMarket matrix coordinate complex general\n"
          << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
      for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i)
          if (m(i, j) != Complex{})
            out << i + 1 << ' ' << j + 1 << ' ' << format_real(m(i, j).real()) << ' '
                << format_real(m(i, j).imag()) << '\n';
      break;
    }
    case MatrixFormat::Csv:
      for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? ", " : "") << format_complex_token(m(i, j));
        out << '\n';
      }
      break;
    case MatrixFormat::Json: {
      nlohmann::json data = nlohmann::json::array();
      for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        data.push_back(std::move(row));
      }
      out << nlohmann::json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}}.dump() << '\n';
      break;
    }
  }
}

void write_matrix_file(const std::filesystem::path& path, const Matrix& m, MatrixFormat format) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  write_matrix(out, m, format);
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

std::string matrix_to_string(const Matrix& m, MatrixFormat format) {
  std::ostringstream out;
  write_matrix(out, m, format);
  return out.str();
}

Matrix matrix_from_string(std::string_view text, MatrixFormat format, bool require_square) {
  std::istringstream in{std::string(text)};
  return read_matrix(in, format, require_square);
}

nlohmann::json form_report_json(const SparsifiedForm& form) {
  nlohmann::json j = form.report.to_json();
  j["dimension"] = form.input.rows();
  if (form.schedule) j["schedule"] = form.schedule->effective_sizes();
  if (form.kind == FormKind::Family) {
    j["family"] = {{"member", form.family_index}, {"stride", form.family_stride}};
  }
  if (!form.log.empty()) j["log"] = log_to_json(form.log);
  return j;
}

void emit_form(const SparsifiedForm& form, const std::filesystem::path& out_dir,
               const EmitOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + out_dir.string() + "': " + ec.message());
  const std::string ext = file_extension(options.format);
  write_matrix_file(out_dir / (options.prefix + "M" + ext), form.transformed, options.format);
  write_matrix_file(out_dir / (options.prefix + "U" + ext), form.basis, options.format);
  {
    const auto path = out_dir / (options.prefix + "report.json");
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out << form_report_json(form).dump(2) << '\n';
  }
  if (options.svg) {
    const auto path = out_dir / (options.prefix + "M.svg");
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out << render_svg(form.transformed, options.threshold, form_boundaries(form));
  }
}

}  // namespace blocktrid
