/* blocktrid: unitary-similarity sparsified forms of dense complex matrices.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_destroy function. Functions return a bt_status; on failure the
 * thread-local message from bt_last_error() describes the cause. Strings
 * returned through char** are released with bt_string_free. Indices are
 * 0-based. Complex data is interleaved (re, im) in row-major order.
 */
#ifndef BLOCKTRID_H
#define BLOCKTRID_H

#include <stddef.h>

#if defined(_WIN32)
#define BT_API __declspec(dllexport)
#else
#define BT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bt_status {
  BT_OK = 0,
  BT_ERR_INVALID_ARGUMENT = 1,
  BT_ERR_DIMENSION = 2,
  BT_ERR_NON_FINITE = 3,
  BT_ERR_PARSE = 4,
  BT_ERR_IO = 5,
  BT_ERR_SCHEDULE = 6,
  BT_ERR_NUMERIC = 7,
  BT_ERR_INTERNAL = 8
} bt_status;

typedef enum bt_schedule_kind { BT_SCHEDULE_GENERAL = 0, BT_SCHEDULE_CYCLIC = 1 } bt_schedule_kind;

typedef struct bt_matrix bt_matrix;
typedef struct bt_schedule bt_schedule;
typedef struct bt_form bt_form;

typedef struct bt_options {
  double dependence_tol; /* Gram-Schmidt rejection tolerance, default 1e-10 */
  double threshold;      /* pattern zero threshold, default 1e-10 */
} bt_options;

BT_API const char* bt_version(void);
BT_API const char* bt_last_error(void);
BT_API const char* bt_status_string(bt_status status);
BT_API void bt_string_free(char* s);
BT_API void bt_options_default(bt_options* options);

/* Matrices. Formats: "mm", "mm-coord", "csv", "json"; NULL picks by file
 * extension (Matrix Market otherwise). */
BT_API bt_status bt_matrix_create(size_t rows, size_t cols, bt_matrix** out);
BT_API bt_status bt_matrix_from_interleaved(size_t rows, size_t cols, const double* data, bt_matrix** out);
BT_API void bt_matrix_destroy(bt_matrix* m);
BT_API size_t bt_matrix_rows(const bt_matrix* m);
BT_API size_t bt_matrix_cols(const bt_matrix* m);
BT_API bt_status bt_matrix_get(const bt_matrix* m, size_t i, size_t j, double* re, double* im);
BT_API bt_status bt_matrix_set(bt_matrix* m, size_t i, size_t j, double re, double im);
BT_API bt_status bt_matrix_copy_interleaved(const bt_matrix* m, double* out, size_t out_len);
BT_API bt_status bt_matrix_read(const char* path, const char* format, bt_matrix** out);
BT_API bt_status bt_matrix_write(const bt_matrix* m, const char* path, const char* format);
BT_API bt_status bt_matrix_from_string(const char* text, const char* format, bt_matrix** out);
BT_API bt_status bt_matrix_to_string(const bt_matrix* m, const char* format, char** out);
/* out = u^* t u */
BT_API bt_status bt_conjugate(const bt_matrix* t, const bt_matrix* u, bt_matrix** out);

/* Schedules. Text: "canonical", "cyclic", "custom:1,2,6" or "1,2,6".
 * dim = 0 leaves the schedule untruncated. */
BT_API bt_status bt_schedule_parse(const char* text, bt_schedule_kind custom_kind, size_t dim, bt_schedule** out);
BT_API bt_status bt_schedule_canonical(size_t dim, size_t n1, bt_schedule_kind kind, bt_schedule** out);
BT_API void bt_schedule_destroy(bt_schedule* s);
BT_API size_t bt_schedule_block_count(const bt_schedule* s);
BT_API size_t bt_schedule_block_size(const bt_schedule* s, size_t k);
/* Writes 0 when valid for `kind`, else the 1-based k where n_{k+1} fails. */
BT_API bt_status bt_schedule_validate(const bt_schedule* s, bt_schedule_kind kind, size_t* violation_k);
BT_API bt_status bt_schedule_to_string(const bt_schedule* s, char** out);

/* Pipelines. `options` may be NULL for defaults. */
BT_API bt_status bt_staircase(const bt_matrix* t, const bt_options* options, bt_form** out);
BT_API bt_status bt_block_tridiagonalize(const bt_matrix* t, const bt_schedule* s, const bt_options* options,
                                         bt_form** out);
BT_API bt_status bt_polar_sparsify(const bt_matrix* t, const bt_schedule* s, int alt, const bt_options* options,
                                   bt_form** out);
BT_API bt_status bt_polar_sparsify_banded(const bt_matrix* m, const bt_schedule* s, const bt_options* options,
                                          bt_form** out);
BT_API bt_status bt_tri_sparsify(const bt_matrix* t, int alt, const bt_options* options, bt_form** out);
/* v holds 2*dim doubles, interleaved. */
BT_API bt_status bt_krylov_hessenberg(const bt_matrix* t, const double* v, const bt_options* options,
                                      bt_form** out);
BT_API bt_status bt_joint_cyclic(const bt_matrix* t, const double* v, const bt_options* options, bt_form** out);
/* Writes `count` forms, one per operator, into out_forms. */
BT_API bt_status bt_family_staircase(const bt_matrix* const* ops, size_t count, int selfadjoint,
                                     const bt_options* options, bt_form** out_forms);
/* The whole block diagonal form; summands via bt_form_summand. */
BT_API bt_status bt_decompose(const bt_matrix* t, const bt_options* options, bt_form** out);

/* Forms. */
BT_API void bt_form_destroy(bt_form* f);
BT_API const char* bt_form_kind(const bt_form* f);
BT_API int bt_form_passing(const bt_form* f);
BT_API size_t bt_form_dim(const bt_form* f);
BT_API bt_status bt_form_transformed(const bt_form* f, bt_matrix** out);
BT_API bt_status bt_form_basis(const bt_form* f, bt_matrix** out);
BT_API bt_status bt_form_report_json(const bt_form* f, char** out);
BT_API size_t bt_form_summand_count(const bt_form* f);
BT_API bt_status bt_form_summand(const bt_form* f, size_t k, bt_form** out);
/* Writes <prefix>M, <prefix>U, <prefix>report.json and optionally <prefix>M.svg. */
BT_API bt_status bt_form_write(const bt_form* f, const char* dir, const char* format, int svg, const char* prefix);
BT_API bt_status bt_form_render_ascii(const bt_form* f, char** out);

/* Verification of a bare matrix against a named pattern: staircase,
 * staircase-refined, jointcyclic, hessenberg, family:S, band, polar,
 * polar-alt, tri, tri-alt. Block patterns need a schedule. */
BT_API bt_status bt_verify(const bt_matrix* m, const char* pattern, const bt_schedule* s, double threshold,
                           int* passing, char** report_json);

/* Rendering; s may be NULL (no gridlines). */
BT_API bt_status bt_render_svg(const bt_matrix* m, double threshold, const bt_schedule* s, char** out);
BT_API bt_status bt_render_ascii(const bt_matrix* m, double threshold, const bt_schedule* s, char** out);

#ifdef __cplusplus
}
#endif

#endif /* BLOCKTRID_H */
