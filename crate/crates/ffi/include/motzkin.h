#ifndef MOTZKIN_H
#define MOTZKIN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MzStatus {
  MZ_STATUS_OK = 0,
  MZ_STATUS_NULL_POINTER = 1,
  MZ_STATUS_INVALID_ARGUMENT = 2,
  MZ_STATUS_RESOURCE_LIMIT = 3,
  MZ_STATUS_INTERNAL = 4,
  MZ_STATUS_BUFFER_TOO_SMALL = 5,
  MZ_STATUS_UNKNOWN_SELECTOR = 6,
  MZ_STATUS_OVERFLOW = 7,
  MZ_STATUS_PANIC = 8,
} MzStatus;

typedef enum MzMod8Kind {
  MZ_MOD8_KIND_ODD = 0,
  MZ_MOD8_KIND_RESIDUE4 = 4,
  MZ_MOD8_KIND_RESIDUE2 = 2,
  MZ_MOD8_KIND_RESIDUE6 = 6,
} MzMod8Kind;

typedef struct MzBigNat MzBigNat;

typedef struct MzDensityReport MzDensityReport;

typedef struct MzEngine MzEngine;

typedef struct MzResidueStream MzResidueStream;

typedef struct MzCrossValidation {
  bool consistent;
  // Meaningful only when `consistent` is false.
  uint64_t first_mismatch;
} MzCrossValidation;

// `n = (4i + epsilon) 4^(j+1) - delta` when `has_witness`.
typedef struct MzMod8Classification {
  enum MzMod8Kind kind;
  bool has_witness;
  uint8_t epsilon;
  uint8_t delta;
  uint64_t i;
  uint32_t j;
  bool has_y;
  uint64_t y;
} MzMod8Classification;

// `form` is 0 when `M_n` is not divisible by 5, else 1 to 4; `j >= 1`.
typedef struct MzDiv5Form {
  uint8_t form;
  uint64_t i;
  uint32_t j;
} MzDiv5Form;

// `{ (q i + r) q^(s j + t) + c : i >= 0, j >= j_min }`.
typedef struct MzSetSpec {
  uint64_t q;
  uint64_t r;
  uint32_t s;
  uint32_t t;
  int64_t c;
  uint32_t j_min;
} MzSetSpec;

typedef struct MzWitness {
  bool found;
  uint64_t i;
  uint32_t j;
} MzWitness;

typedef struct MzRational {
  uint64_t numer;
  uint64_t denom;
} MzRational;

typedef struct MzDensitySummary {
  struct MzRational limit;
  uint64_t horizon;
  uint64_t observed_count;
  double observed_ratio;
  double abs_discrepancy;
  bool has_error_bound;
  double error_bound;
} MzDensitySummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static, NUL-terminated description of a status code.
const char *mz_status_message(enum MzStatus status);

// Engine with explicit ceilings; 0 selects the default for that engine.
struct MzEngine *mz_engine_new(uint64_t exact_ceiling, uint64_t modular_ceiling);

// Engine whose ceilings come from `MOTZKIN_EXACT_CEILING` / `MOTZKIN_MOD_CEILING`.
struct MzEngine *mz_engine_from_env(void);

void mz_engine_free(struct MzEngine *engine);

// Exact `M_n` from the defining sum.
enum MzStatus mz_motzkin_exact(const struct MzEngine *engine, uint64_t n, struct MzBigNat **out);

// Writes the decimal expansion plus NUL into `buf`. `needed` (optional)
// receives the required capacity including the NUL, also on
// `MZ_STATUS_BUFFER_TOO_SMALL`.
enum MzStatus mz_bignat_to_decimal(const struct MzBigNat *value,
                                   char *buf,
                                   size_t capacity,
                                   size_t *needed);

enum MzStatus mz_bignat_mod(const struct MzBigNat *value, uint64_t modulus, uint64_t *out);

void mz_bignat_free(struct MzBigNat *value);

// `M_n mod modulus` for `n < len` from the convolution recurrence.
enum MzStatus mz_mod_stream(const struct MzEngine *engine,
                            uint64_t modulus,
                            uint64_t len,
                            struct MzResidueStream **out);

uint64_t mz_residue_stream_len(const struct MzResidueStream *stream);

uint64_t mz_residue_stream_modulus(const struct MzResidueStream *stream);

// Borrowed pointer to `len` residues, valid until the stream is freed.
const uint64_t *mz_residue_stream_values(const struct MzResidueStream *stream);

enum MzStatus mz_residue_stream_get(const struct MzResidueStream *stream,
                                    uint64_t index,
                                    uint64_t *out);

void mz_residue_stream_free(struct MzResidueStream *stream);

enum MzStatus mz_cross_validate(const struct MzEngine *engine,
                                uint64_t modulus,
                                uint64_t len,
                                struct MzCrossValidation *out);

enum MzStatus mz_classify_mod8(uint64_t n, struct MzMod8Classification *out);

// `M_n mod 3`.
uint8_t mz_classify_mod3(uint64_t n);

enum MzStatus mz_classify_div5(uint64_t n, struct MzDiv5Form *out);

bool mz_is_t01(uint64_t n);

enum MzStatus mz_is_in_set(uint64_t n, const struct MzSetSpec *spec, struct MzWitness *out);

enum MzStatus mz_closed_density_s(uint64_t q, uint32_t s, uint32_t t, struct MzRational *out);

enum MzStatus mz_closed_density_sprime(uint64_t q, uint32_t s, uint32_t t, struct MzRational *out);

// `#{ 0 <= n <= horizon : n in spec }`.
enum MzStatus mz_count_set_exact(uint64_t horizon, const struct MzSetSpec *spec, uint64_t *out);

// `#{ 0 <= n <= horizon : n in T(01) }`; the count never exceeds `horizon + 1`.
uint64_t mz_count_t01_upto(uint64_t horizon);

// Empirical density of the class named by `selector` over `n < horizon`.
// Selector spellings match the CLI (`even`, `mod8=4`, `div5`, `t01`, ...).
enum MzStatus mz_empirical_density(const char *selector,
                                   uint64_t horizon,
                                   struct MzDensityReport **out);

// UTF-8 label, valid until the report is freed.
const char *mz_density_report_label(const struct MzDensityReport *report);

enum MzStatus mz_density_report_summary(const struct MzDensityReport *report,
                                        struct MzDensitySummary *out);

void mz_density_report_free(struct MzDensityReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MOTZKIN_H */
