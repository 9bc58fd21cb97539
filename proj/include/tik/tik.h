/* tik — tensor index notation kit: C API.
 *
 * A session owns a tensor species, an environment of named tensors
 * (species constants are pre-bound), and the expression pipeline:
 * parse/elaborate, evaluate, normalize, equality checking, axiom audit.
 *
 * All functions returning tik_status store a message retrievable via
 * tik_last_error on failure. Strings returned through char** out
 * parameters are owned by the caller and released with tik_string_free.
 */
#ifndef TIK_H
#define TIK_H

#ifdef __cplusplus
extern "C" {
#endif

#ifndef TIK_API
#define TIK_API __attribute__((visibility("default")))
#endif

typedef enum tik_status {
  TIK_OK = 0,
  TIK_ERR_INTERNAL = 1,
  TIK_ERR_PARSE = 2,
  TIK_ERR_ELAB_ARITY = 3,
  TIK_ERR_ELAB_DUALITY = 4,
  TIK_ERR_ELAB_MULTIPLICITY = 5,
  TIK_ERR_ENV_MISSING = 6,
  TIK_ERR_NOT_EQUAL = 7,
  TIK_ERR_AXIOMS_FAIL = 8,
  TIK_ERR_BAD_ARGUMENT = 9,
  TIK_ERR_IO = 10
} tik_status;

typedef struct tik_session tik_session;

/* species_name: "complex-lorentz" or "unit"; NULL means complex-lorentz.
 * Returns NULL for an unknown species. */
TIK_API tik_session* tik_session_create(const char* species_name);
TIK_API void tik_session_destroy(tik_session* s);

/* Stable machine-readable category string for a status, e.g. "parse",
 * "elaborate-duality", "not-equal". */
TIK_API const char* tik_status_category(tik_status st);

/* Message of the most recent failure on this session; empty if none. */
TIK_API const char* tik_last_error(const tik_session* s);

/* Binds a tensor from a JSON literal file
 * {"signature": ["up", ...], "data": [[re, im], ...]} ("data" optional,
 * zeros assumed). A NULL or empty name takes the file stem. */
TIK_API tik_status tik_env_load_file(tik_session* s, const char* name, const char* path);
TIK_API tik_status tik_env_load_json(tik_session* s, const char* name,
                                     const char* tensor_json);

/* Elaborates expr and returns its canonical tree dump. */
TIK_API tik_status tik_parse(tik_session* s, const char* expr, char** out_dump);

/* Evaluates a non-equality expression to its tensor, in the JSON literal
 * format. */
TIK_API tik_status tik_eval(tik_session* s, const char* expr, char** out_tensor_json);

/* Normalizes a non-equality expression; *out_dump receives the canonical
 * dump of the normal form. With with_trace nonzero and out_trace
 * non-NULL, *out_trace receives one block per rewrite step. */
TIK_API tik_status tik_simplify(tik_session* s, const char* expr, int with_trace,
                                char** out_dump, char** out_trace);

/* Checks an equality expression. TIK_OK when the sides agree (by normal
 * form or numerically within tol), TIK_ERR_NOT_EQUAL otherwise;
 * *out_report describes the verdict either way. tol <= 0 selects the
 * default 1e-10. */
TIK_API tik_status tik_prove_eq(tik_session* s, const char* expr, double tol,
                                char** out_report);

/* Runs the four species axioms per color. TIK_OK iff all pass;
 * *out_report is a text table, or JSON when as_json is nonzero. tol <= 0
 * selects the default 1e-12. */
TIK_API tik_status tik_check_axioms(tik_session* s, double tol, int as_json,
                                    char** out_report);

/* Writes every named constant of the species to dir/<name>.json. */
TIK_API tik_status tik_constants_dump(tik_session* s, const char* dir);

TIK_API void tik_string_free(char* s);

TIK_API const char* tik_version(void);

#ifdef __cplusplus
}
#endif

#endif /* TIK_H */
