#include "blocktrid/blocktrid.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "matrix_io.hpp"
#include "render.hpp"
#include "transforms.hpp"

struct bt_matrix {
  blocktrid::Matrix m;
};

struct bt_schedule {
  blocktrid::BlockSchedule s;
};

struct bt_form {
  blocktrid::SparsifiedForm form;
  std::vector<blocktrid::SparsifiedForm> summands;
  double threshold = blocktrid::kPatternThreshold;
};

namespace {

using namespace blocktrid;

thread_local std::string g_last_error;

bt_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return BT_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return BT_ERR_DIMENSION;
    case ErrorCode::NonFinite: return BT_ERR_NON_FINITE;
    case ErrorCode::Parse: return BT_ERR_PARSE;
    case ErrorCode::Io: return BT_ERR_IO;
    case ErrorCode::Schedule: return BT_ERR_SCHEDULE;
    case ErrorCode::Numeric: return BT_ERR_NUMERIC;
    case ErrorCode::Internal: return BT_ERR_INTERNAL;
  }
  return BT_ERR_INTERNAL;
}

template <class F>
bt_status guarded(F&& body) noexcept {
  try {
    g_last_error.clear();
    body();
    return BT_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return BT_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BT_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return BT_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

TransformOptions to_options(const bt_options* o) {
  TransformOptions t;
  if (o) {
    require(o->dependence_tol > 0.0 && o->threshold > 0.0, "tolerances must be positive");
    t.dependence_tol = o->dependence_tol;
    t.threshold = o->threshold;
  }
  return t;
}

ScheduleKind to_kind(bt_schedule_kind k) {
  return k == BT_SCHEDULE_CYCLIC ? ScheduleKind::Cyclic : ScheduleKind::General;
}

MatrixFormat resolve_format(const char* format, const char* path) {
  if (format && *format) return parse_format_name(format);
  if (path) {
    if (auto f = format_from_extension(path)) return *f;
  }
  return MatrixFormat::MatrixMarketArray;
}

Vector read_vector(const double* v, std::size_t d) {
  require(v != nullptr, "vector is null");
  Vector out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = {v[2 * i], v[2 * i + 1]};
  return out;
}

bt_form* wrap(SparsifiedForm f, const TransformOptions& o) {
  auto* h = new bt_form{std::move(f), {}, o.threshold};
  return h;
}

}  // namespace

extern "C" {

const char* bt_version(void) { return "0.1.0"; }

const char* bt_last_error(void) { return g_last_error.c_str(); }

const char* bt_status_string(bt_status status) {
  switch (status) {
    case BT_OK: return "ok";
    case BT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BT_ERR_DIMENSION: return "dimension mismatch";
    case BT_ERR_NON_FINITE: return "non-finite value";
    case BT_ERR_PARSE: return "parse error";
    case BT_ERR_IO: return "i/o error";
    case BT_ERR_SCHEDULE: return "schedule error";
    case BT_ERR_NUMERIC: return "numeric failure";
    case BT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void bt_string_free(char* s) { std::free(s); }

void bt_options_default(bt_options* options) {
  if (!options) return;
  options->dependence_tol = kDefaultDependenceTol;
  options->threshold = kPatternThreshold;
}

bt_status bt_matrix_create(size_t rows, size_t cols, bt_matrix** out) {
  return guarded([&] {
    require(out, "out is null");
    *out = new bt_matrix{Matrix(rows, cols)};
  });
}

bt_status bt_matrix_from_interleaved(size_t rows, size_t cols, const double* data, bt_matrix** out) {
  return guarded([&] {
    require(out && (data || rows * cols == 0), "null argument");
    std::vector<Complex> values(rows * cols);
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = {data[2 * k], data[2 * k + 1]};
    *out = new bt_matrix{Matrix(rows, cols, std::move(values))};
  });
}

void bt_matrix_destroy(bt_matrix* m) { delete m; }

size_t bt_matrix_rows(const bt_matrix* m) { return m ? m->m.rows() : 0; }

size_t bt_matrix_cols(const bt_matrix* m) { return m ? m->m.cols() : 0; }

bt_status bt_matrix_get(const bt_matrix* m, size_t i, size_t j, double* re, double* im) {
  return guarded([&] {
    require(m && re && im, "null argument");
    if (i >= m->m.rows() || j >= m->m.cols()) throw Error(ErrorCode::DimensionMismatch, "index out of range");
    *re = m->m(i, j).real();
    *im = m->m(i, j).imag();
  });
}

bt_status bt_matrix_set(bt_matrix* m, size_t i, size_t j, double re, double im) {
  return guarded([&] {
    require(m != nullptr, "null matrix");
    if (i >= m->m.rows() || j >= m->m.cols()) throw Error(ErrorCode::DimensionMismatch, "index out of range");
    if (!std::isfinite(re) || !std::isfinite(im)) throw Error(ErrorCode::NonFinite, "non-finite entry");
    m->m(i, j) = {re, im};
  });
}

bt_status bt_matrix_copy_interleaved(const bt_matrix* m, double* out, size_t out_len) {
  return guarded([&] {
    require(m && out, "null argument");
    const std::size_t n = m->m.rows() * m->m.cols();
    if (out_len < 2 * n) throw Error(ErrorCode::DimensionMismatch, "output buffer too small");
    for (std::size_t i = 0; i < m->m.rows(); ++i)
      for (std::size_t j = 0; j < m->m.cols(); ++j) {
        out[2 * (i * m->m.cols() + j)] = m->m(i, j).real();
        out[2 * (i * m->m.cols() + j) + 1] = m->m(i, j).imag();
      }
  });
}

bt_status bt_matrix_read(const char* path, const char* format, bt_matrix** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new bt_matrix{read_matrix_file(path, resolve_format(format, path), false)};
  });
}

bt_status bt_matrix_write(const bt_matrix* m, const char* path, const char* format) {
  return guarded([&] {
    require(m && path, "null argument");
    write_matrix_file(path, m->m, resolve_format(format, path));
  });
}

bt_status bt_matrix_from_string(const char* text, const char* format, bt_matrix** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = new bt_matrix{matrix_from_string(text, resolve_format(format, nullptr), false)};
  });
}

bt_status bt_matrix_to_string(const bt_matrix* m, const char* format, char** out) {
  return guarded([&] {
    require(m && out, "null argument");
    *out = dup_string(matrix_to_string(m->m, resolve_format(format, nullptr)));
  });
}

bt_status bt_conjugate(const bt_matrix* t, const bt_matrix* u, bt_matrix** out) {
  return guarded([&] {
    require(t && u && out, "null argument");
    *out = new bt_matrix{conjugate(t->m, u->m)};
  });
}

bt_status bt_schedule_parse(const char* text, bt_schedule_kind custom_kind, size_t dim, bt_schedule** out) {
  return guarded([&] {
    require(text && out, "null argument");
    std::optional<std::size_t> d;
    if (dim > 0) d = dim;
    *out = new bt_schedule{parse_schedule(text, to_kind(custom_kind), d)};
  });
}

bt_status bt_schedule_canonical(size_t dim, size_t n1, bt_schedule_kind kind, bt_schedule** out) {
  return guarded([&] {
    require(out && dim > 0 && n1 > 0, "invalid argument");
    *out = new bt_schedule{canonical_schedule_for_dim(dim, n1, to_kind(kind))};
  });
}

void bt_schedule_destroy(bt_schedule* s) { delete s; }

size_t bt_schedule_block_count(const bt_schedule* s) { return s ? s->s.block_count() : 0; }

size_t bt_schedule_block_size(const bt_schedule* s, size_t k) {
  if (!s || k >= s->s.block_count()) return 0;
  return s->s.effective_sizes()[k];
}

bt_status bt_schedule_validate(const bt_schedule* s, bt_schedule_kind kind, size_t* violation_k) {
  return guarded([&] {
    require(s && violation_k, "null argument");
    *violation_k = validate(s->s.sizes(), to_kind(kind)).value_or(0);
  });
}

bt_status bt_schedule_to_string(const bt_schedule* s, char** out) {
  return guarded([&] {
    require(s && out, "null argument");
    *out = dup_string(s->s.to_string());
  });
}

bt_status bt_staircase(const bt_matrix* t, const bt_options* options, bt_form** out) {
  return guarded([&] {
    require(t && out, "null argument");
    const auto o = to_options(options);
    *out = wrap(staircase(t->m, o), o);
  });
}

bt_status bt_block_tridiagonalize(const bt_matrix* t, const bt_schedule* s, const bt_options* options,
                                  bt_form** out) {
  return guarded([&] {
    require(t && s && out, "null argument");
    const auto o = to_options(options);
    *out = wrap(block_tridiagonalize(t->m, s->s, o), o);
  });
}

bt_status bt_polar_sparsify(const bt_matrix* t, const bt_schedule* s, int alt, const bt_options* options,
                            bt_form** out) {
  return guarded([&] {
    require(t && s && out, "null argument");
    const auto o = to_options(options);
    *out = wrap(alt ? polar_sparsify_alt(t->m, s->s, o) : polar_sparsify(t->m, s->s, o), o);
  });
}

bt_status bt_polar_sparsify_banded(const bt_matrix* m, const bt_schedule* s, const bt_options* options,
                                   bt_form** out) {
  return guarded([&] {
    require(m && s && out, "null argument");
    const auto o = to_options(options);
    *out = wrap(polar_sparsify_banded(m->m, s->s, o), o);
  });
}

bt_status bt_tri_sparsify(const bt_matrix* t, int alt, const bt_options* options, bt_form** out) {
  return guarded([&] {
    require(t && out, "null argument");
    const auto o = to_options(options);
    *out = wrap(alt ? tri_sparsify_alt(t->m, o) : tri_sparsify(t->m, o), o);
  });
}

bt_status bt_krylov_hessenberg(const bt_matrix* t, const double* v, const bt_options* options, bt_form** out) {
  return guarded([&] {
    require(t && out, "null argument");
    const auto o = to_options(options);
    *out = wrap(krylov_hessenberg(t->m, read_vector(v, t->m.rows()), o), o);
  });
}

bt_status bt_joint_cyclic(const bt_matrix* t, const double* v, const bt_options* options, bt_form** out) {
  return guarded([&] {
    require(t && out, "null argument");
    const auto o = to_options(options);
    *out = wrap(joint_cyclic_staircase(t->m, read_vector(v, t->m.rows()), o), o);
  });
}

bt_status bt_family_staircase(const bt_matrix* const* ops, size_t count, int selfadjoint,
                              const bt_options* options, bt_form** out_forms) {
  return guarded([&] {
    require(ops && out_forms && count > 0, "invalid argument");
    const auto o = to_options(options);
    std::vector<Matrix> family;
    for (std::size_t k = 0; k < count; ++k) {
      require(ops[k] != nullptr, "null operator");
      family.push_back(ops[k]->m);
    }
    FamilyForm f = family_staircase(family, selfadjoint != 0, o);
    std::vector<std::unique_ptr<bt_form>> forms;
    for (auto& m : f.members) forms.emplace_back(wrap(std::move(m), o));
    for (std::size_t k = 0; k < count; ++k) out_forms[k] = forms[k].release();
  });
}

bt_status bt_decompose(const bt_matrix* t, const bt_options* options, bt_form** out) {
  return guarded([&] {
    require(t && out, "null argument");
    const auto o = to_options(options);
    Decomposition d = decompose(t->m, o);
    auto h = std::unique_ptr<bt_form>(wrap(std::move(d.whole), o));
    h->summands = std::move(d.summands);
    *out = h.release();
  });
}

void bt_form_destroy(bt_form* f) { delete f; }

const char* bt_form_kind(const bt_form* f) { return f ? to_string(f->form.kind) : ""; }

int bt_form_passing(const bt_form* f) {
  if (!f || !f->form.report.passing()) return 0;
  for (const auto& s : f->summands)
    if (!s.report.passing()) return 0;
  return 1;
}

size_t bt_form_dim(const bt_form* f) { return f ? f->form.input.rows() : 0; }

bt_status bt_form_transformed(const bt_form* f, bt_matrix** out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = new bt_matrix{f->form.transformed};
  });
}

bt_status bt_form_basis(const bt_form* f, bt_matrix** out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = new bt_matrix{f->form.basis};
  });
}

bt_status bt_form_report_json(const bt_form* f, char** out) {
  return guarded([&] {
    require(f && out, "null argument");
    nlohmann::json j = form_report_json(f->form);
    if (!f->summands.empty()) {
      nlohmann::json parts = nlohmann::json::array();
      for (const auto& s : f->summands) parts.push_back(form_report_json(s));
      j["summands"] = std::move(parts);
      j["passing"] = bt_form_passing(f) != 0;
    }
    *out = dup_string(j.dump(2));
  });
}

size_t bt_form_summand_count(const bt_form* f) { return f ? f->summands.size() : 0; }

bt_status bt_form_summand(const bt_form* f, size_t k, bt_form** out) {
  return guarded([&] {
    require(f && out, "null argument");
    if (k >= f->summands.size()) throw Error(ErrorCode::DimensionMismatch, "summand index out of range");
    *out = new bt_form{f->summands[k], {}, f->threshold};
  });
}

bt_status bt_form_write(const bt_form* f, const char* dir, const char* format, int svg, const char* prefix) {
  return guarded([&] {
    require(f && dir, "null argument");
    EmitOptions e;
    e.format = resolve_format(format, nullptr);
    e.svg = svg != 0;
    e.threshold = f->threshold;
    e.prefix = prefix ? prefix : "";
    emit_form(f->form, dir, e);
  });
}

bt_status bt_form_render_ascii(const bt_form* f, char** out) {
  return guarded([&] {
    require(f && out, "null argument");
    *out = dup_string(render_ascii(f->form.transformed, f->threshold, form_boundaries(f->form)));
  });
}

bt_status bt_verify(const bt_matrix* m, const char* pattern, const bt_schedule* s, double threshold,
                    int* passing, char** report_json) {
  return guarded([&] {
    require(m && pattern && passing, "null argument");
    require(threshold > 0.0, "threshold must be positive");
    std::optional<BlockSchedule> schedule;
    if (s) schedule = s->s.truncated(m->m.rows());
    const VerificationReport r = pattern_report(m->m, parse_pattern(pattern, schedule), threshold);
    *passing = r.passing() ? 1 : 0;
    if (report_json) *report_json = dup_string(r.to_json().dump(2));
  });
}

bt_status bt_render_svg(const bt_matrix* m, double threshold, const bt_schedule* s, char** out) {
  return guarded([&] {
    require(m && out, "null argument");
    *out = dup_string(render_svg(m->m, threshold, s ? boundaries_from_sizes(s->s.effective_sizes())
                                                     : std::vector<std::size_t>{}));
  });
}

bt_status bt_render_ascii(const bt_matrix* m, double threshold, const bt_schedule* s, char** out) {
  return guarded([&] {
    require(m && out, "null argument");
    *out = dup_string(render_ascii(m->m, threshold, s ? boundaries_from_sizes(s->s.effective_sizes())
                                                       : std::vector<std::size_t>{}));
  });
}

}  // extern "C"
