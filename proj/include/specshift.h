/* specshift C API: opaque handles over the spectral-shift core.
 *
 * Every function returns a specshift_status; on failure a thread-local
 * message is available through specshift_last_error(). Handles come from
 * the create/load/parse calls and are released with the matching free
 * call. Handles are immutable after creation and safe to share across
 * threads.
 */
#ifndef SPECSHIFT_H
#define SPECSHIFT_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  SPECSHIFT_OK = 0,
  SPECSHIFT_ERR_PARSE = 1,       /* malformed spec strings or files */
  SPECSHIFT_ERR_INVALID = 2,     /* precondition violation */
  SPECSHIFT_ERR_HERMITICITY = 3, /* matrix fails the Hermitian tolerance */
  SPECSHIFT_ERR_ENVELOPE = 4,    /* tuple count beyond the desk-scale envelope */
  SPECSHIFT_ERR_EVAL = 5,        /* numerical evaluation failure */
  SPECSHIFT_ERR_IO = 6,          /* file system failure */
  SPECSHIFT_ERR_NULL = 7         /* required pointer argument was NULL */
} specshift_status;

/* Density construction routes: 1 integrates the order-(p-1) spline kernel
 * against m^(1), 2 integrates the kernel of one order less against m. */
#define SPECSHIFT_VARIANT_NUP1 1
#define SPECSHIFT_VARIANT_NUP2 2

const char* specshift_version(void);
const char* specshift_last_error(void);

typedef struct specshift_function specshift_function;
typedef struct specshift_matrix specshift_matrix;
typedef struct specshift_density specshift_density;

/* --- scalar test functions ------------------------------------------- */

/* Mini-language: poly:c0,c1,...  exp:s  gauss:center,width  rat:re+imi
 * sum:(spec;spec;...) with optional complex scalar prefixes a*spec. */
int specshift_function_parse(const char* spec, specshift_function** out);
void specshift_function_free(specshift_function* fn);
int specshift_function_eval(const specshift_function* fn, double t, int order, double* re,
                            double* im);

/* --- Hermitian matrices ---------------------------------------------- */

/* File format: {"n": n, "re": n x n, "im": n x n}; "im" optional. */
int specshift_matrix_load(const char* path, specshift_matrix** out);
/* Row-major entries; im may be NULL for a real matrix. */
int specshift_matrix_create(int n, const double* re, const double* im, specshift_matrix** out);
int specshift_matrix_save(const specshift_matrix* m, const char* path);
int specshift_matrix_dim(const specshift_matrix* m, int* n);
int specshift_matrix_get(const specshift_matrix* m, int row, int col, double* re, double* im);
void specshift_matrix_free(specshift_matrix* m);

/* --- divided differences ---------------------------------------------- */

/* cluster_tol < 0 selects the default 1e-8 * (1 + max |knot|). */
int specshift_divided_difference(const specshift_function* fn, const double* knots,
                                 int n_knots, double cluster_tol, double* re, double* im);

/* --- spectral shift densities ------------------------------------------ */

int specshift_ssf_compute(const specshift_matrix* h0, const specshift_matrix* v, int order,
                          int variant, double cluster_tol, specshift_density** out);
int specshift_density_order(const specshift_density* d, int* order);
int specshift_density_eval(const specshift_density* d, double t, double* re, double* im);
int specshift_density_mass(const specshift_density* d, double* re, double* im);
int specshift_density_hull(const specshift_density* d, double* lo, double* hi);
/* Serialized record: breakpoints, pieces (local coefficients, lowest degree
 * first), left_value, right_value; complex values encoded as [re, im]. */
int specshift_density_save(const specshift_density* d, const char* path);
int specshift_density_load(const char* path, specshift_density** out);
/* CSV with header t,eta_re,eta_im over m uniform samples on [a, b]. */
int specshift_density_write_csv(const specshift_density* d, double a, double b, int m,
                                const char* path);
void specshift_density_free(specshift_density* d);

/* --- trace formula ------------------------------------------------------ */

typedef struct {
  double trace_re, trace_im;       /* Tr[R_p(f)] */
  double integral_re, integral_im; /* integral of f^(p) eta_p */
  double abs_err;
  double rel_err; /* abs_err / (1 + |trace|) */
} specshift_trace_check;

int specshift_trace_formula_check(const specshift_matrix* h0, const specshift_matrix* v,
                                  int order, const specshift_function* f, int variant,
                                  double cluster_tol, specshift_trace_check* out);

/* --- verification suite -------------------------------------------------- */

typedef struct {
  const char* h0_path; /* both NULL -> seeded random pairs */
  const char* v_path;
  int p_max;                   /* <= 0 -> 4 */
  unsigned long long seed;     /* report is byte-identical for a fixed seed */
  int n_pairs;                 /* <= 0 -> 6 */
  int max_dim;                 /* <= 0 -> 6 */
  double cluster_tol;          /* < 0 -> default */
  int corrupt_density;         /* nonzero: negative control */
} specshift_verify_options;

/* Streams one JSON record per check to report_path (NULL -> stdout).
 * Returns SPECSHIFT_OK even when checks fail; *n_failures reports them. */
int specshift_verify_run(const specshift_verify_options* options, const char* report_path,
                         int* n_checks, int* n_failures);

/* Summarizes a report stream into `buffer` and counts recorded failures. */
int specshift_report_summary(const char* report_path, char* buffer, int buffer_len,
                             int* n_failures);

#ifdef __cplusplus
}
#endif

#endif /* SPECSHIFT_H */
