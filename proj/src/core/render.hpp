#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "form.hpp"
#include "numkernel.hpp"

namespace blocktrid {

/// Cumulative block ends (e.g. {1, 3, 9}) used as gridlines.
std::vector<std::size_t> boundaries_from_sizes(const std::vector<std::size_t>& sizes);

/// Schedule blocks if present, otherwise the invariant segments.
std::vector<std::size_t> form_boundaries(const SparsifiedForm& form);

/// One `<rect class="cell">` per entry with |M(i,j)| > threshold, plus
/// block gridlines after each boundary index.
std::string render_svg(const Matrix& m, double threshold, const std::vector<std::size_t>& boundaries = {});

/// '*' for |entry| > threshold, '.' otherwise, '|' and '-' at boundaries.
std::string render_ascii(const Matrix& m, double threshold, const std::vector<std::size_t>& boundaries = {});

}  // namespace blocktrid
