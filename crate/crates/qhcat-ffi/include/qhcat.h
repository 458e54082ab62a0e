#ifndef QHCAT_H
#define QHCAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of a call.
typedef enum QhcatStatus {
  QHCAT_STATUS_OK = 0,
  QHCAT_STATUS_NULL_POINTER = 1,
  QHCAT_STATUS_INVALID_UTF8 = 2,
  QHCAT_STATUS_DIMENSION_MISMATCH = 3,
  QHCAT_STATUS_WINDOW_TOO_SMALL = 4,
  QHCAT_STATUS_PRECONDITION = 5,
  QHCAT_STATUS_INVALID = 6,
  QHCAT_STATUS_NOT_FUNCTORIAL = 7,
  QHCAT_STATUS_UNKNOWN_OBJECT = 8,
  QHCAT_STATUS_OUT_OF_RANGE = 9,
  QHCAT_STATUS_PANIC = 10,
} QhcatStatus;

// A category with its filtration.
typedef struct QhcatCategory QhcatCategory;

// A verification certificate.
typedef struct QhcatCertificate QhcatCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds a category from a JSON spec (the format of the command-line `--spec` files).
//
// # Safety
// `json` is a NUL-terminated string and `out` is a valid pointer.
enum QhcatStatus qhcat_category_from_spec(const char *json, struct QhcatCategory **out);

// Builds a truncation of a builtin family. `filtration` and `field` may be null for
// `standard` and `q`.
//
// # Safety
// String arguments are null or NUL-terminated; `name` is not null; `out` is valid.
enum QhcatStatus qhcat_category_family(const char *name,
                                       const char *filtration,
                                       size_t layers,
                                       const char *field,
                                       struct QhcatCategory **out);

// Number of objects; 0 for a null handle.
//
// # Safety
// `cat` is null or a live handle.
size_t qhcat_category_object_count(const struct QhcatCategory *cat);

// Number of filtration layers; 0 for a null handle.
//
// # Safety
// `cat` is null or a live handle.
size_t qhcat_category_layer_count(const struct QhcatCategory *cat);

// Index of an object given by name, `E<i>_<j>` label or `time,node`.
//
// # Safety
// `cat` is a live handle, `name` NUL-terminated, `out` valid.
enum QhcatStatus qhcat_category_find(const struct QhcatCategory *cat,
                                     const char *name,
                                     size_t *out);

// Name of object `x` as a new string, or null when out of range.
//
// # Safety
// `cat` is null or a live handle.
char *qhcat_category_object_name(const struct QhcatCategory *cat, size_t x);

// `dim Hom(x, y)`.
//
// # Safety
// `cat` is a live handle and `out` valid.
enum QhcatStatus qhcat_hom_dim(const struct QhcatCategory *cat, size_t x, size_t y, size_t *out);

// Quasi-hereditary check of the category with its filtration.
//
// # Safety
// `cat` is a live handle and `out` valid.
enum QhcatStatus qhcat_check_qh(const struct QhcatCategory *cat, struct QhcatCertificate **out);

// 1 when the certificate passed, 0 otherwise or for a null handle.
//
// # Safety
// `cert` is null or a live handle.
int qhcat_certificate_passed(const struct QhcatCertificate *cert);

// Plain-text report as a new string; null for a null handle.
//
// # Safety
// `cert` is null or a live handle.
char *qhcat_certificate_report(const struct QhcatCertificate *cert);

// JSON report as a new string; null for a null handle.
//
// # Safety
// `cert` is null or a live handle.
char *qhcat_certificate_json(const struct QhcatCertificate *cert);

// Runs the command line with `argv[0..argc]` (program name first) and returns its exit code.
// `out_stdout` and `out_stderr` may be null; otherwise they receive new strings.
//
// # Safety
// `argv` holds `argc` NUL-terminated strings.
int qhcat_run(size_t argc, const char *const *argv, char **out_stdout, char **out_stderr);

// Message of the last failed call on this thread, or null. Valid until the next call.
const char *qhcat_last_error(void);

// # Safety
// `s` is null or a string returned by this library, not yet freed.
void qhcat_string_free(char *s);

// # Safety
// `cat` is null or a handle returned by this library, not yet freed.
void qhcat_category_free(struct QhcatCategory *cat);

// # Safety
// `cert` is null or a handle returned by this library, not yet freed.
void qhcat_certificate_free(struct QhcatCertificate *cert);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QHCAT_H */
