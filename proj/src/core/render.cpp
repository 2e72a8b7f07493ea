#include "render.hpp"

#include <algorithm>
#include <sstream>

namespace blocktrid {

namespace {

constexpr int kCell = 12;
constexpr int kMargin = 4;

bool is_boundary(const std::vector<std::size_t>& b, std::size_t after) {
  return std::find(b.begin(), b.end(), after) != b.end();
}

}  // namespace

std::vector<std::size_t> boundaries_from_sizes(const std::vector<std::size_t>& sizes) {
  std::vector<std::size_t> out;
  std::size_t s = 0;
  for (std::size_t n : sizes) out.push_back(s += n);
  return out;
}

std::vector<std::size_t> form_boundaries(const SparsifiedForm& form) {
  if (form.schedule) return boundaries_from_sizes(form.schedule->effective_sizes());
  return boundaries_from_sizes(form.segments);
}

std::string render_svg(const Matrix& m, double threshold, const std::vector<std::size_t>& boundaries) {
  const int w = static_cast<int>(m.cols()) * kCell + 2 * kMargin;
  const int h = static_cast<int>(m.rows()) * kCell + 2 * kMargin;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  out << "<rect class=\"frame\" x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
      << m.cols() * kCell << "\" height=\"" << m.rows() * kCell
      << "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (std::abs(m(i, j)) > threshold)
        out << "<rect class=\"cell\" x=\"" << kMargin + static_cast<int>(j) * kCell << "\" y=\""
            << kMargin + static_cast<int>(i) * kCell << "\" width=\"" << kCell << "\" height=\"" << kCell
            << "\" fill=\"#1f4e79\"/>\n";
  for (std::size_t b : boundaries) {
    const int x = kMargin + static_cast<int>(b) * kCell;
    if (b < m.cols())
      out << "<line class=\"grid\" x1=\"" << x << "\" y1=\"" << kMargin << "\" x2=\"" << x << "\" y2=\""
          << h - kMargin << "\" stroke=\"#c00000\" stroke-width=\"1\"/>\n";
    if (b < m.rows())
      out << "<line class=\"grid\" x1=\"" << kMargin << "\" y1=\"" << x << "\" x2=\"" << w - kMargin
          << "\" y2=\"" << x << "\" stroke=\"#c00000\" stroke-width=\"1\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_ascii(const Matrix& m, double threshold, const std::vector<std::size_t>& boundaries) {
  std::ostringstream out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      out << (std::abs(m(i, j)) > threshold ? '*' : '.');
      if (j + 1 < m.cols() && is_boundary(boundaries, j + 1)) out << '|';
    }
    out << '\n';
    if (i + 1 < m.rows() && is_boundary(boundaries, i + 1)) {
      for (std::size_t j = 0; j < m.cols(); ++j) {
        out << '-';
        if (j + 1 < m.cols() && is_boundary(boundaries, j + 1)) out << '+';
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace blocktrid
