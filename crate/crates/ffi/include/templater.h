#ifndef TEMPLATER_H
#define TEMPLATER_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call. Codes 3 and up match the exit codes of the
 * `templater` binary.
 */
typedef enum TemplaterStatus {
  TEMPLATER_STATUS_OK = 0,
  TEMPLATER_STATUS_INVALID_ARGUMENT = 1,
  TEMPLATER_STATUS_PANIC = 2,
  TEMPLATER_STATUS_IO = 3,
  TEMPLATER_STATUS_PARSE = 4,
  TEMPLATER_STATUS_CONFIG = 5,
  TEMPLATER_STATUS_GRAPH = 6,
  TEMPLATER_STATUS_NO_COMMON_SUBGRAPH = 7,
  TEMPLATER_STATUS_BUDGET_EXCEEDED = 8,
  TEMPLATER_STATUS_NO_REACTION_DETECTED = 9,
  TEMPLATER_STATUS_UNSUPPORTED_REACTION = 10,
  TEMPLATER_STATUS_INCONSISTENT_PRUNING = 11,
  TEMPLATER_STATUS_INVALID_MAP = 12,
  TEMPLATER_STATUS_UNKNOWN_STAGE = 13,
} TemplaterStatus;

/**
 * Text outputs of a finished run.
 */
typedef enum TemplaterOutput {
  TEMPLATER_OUTPUT_PRE_TEMPLATE = 0,
  TEMPLATER_OUTPUT_POST_TEMPLATE = 1,
  TEMPLATER_OUTPUT_MAP_FILE = 2,
  TEMPLATER_OUTPUT_REPORT_TEXT = 3,
  TEMPLATER_OUTPUT_REPORT_JSON = 4,
  /**
   * Empty when every atom was placed before the similarity stage.
   */
  TEMPLATER_OUTPUT_SIMILARITY_CSV = 5,
  TEMPLATER_OUTPUT_DOT_REACTANTS = 6,
  TEMPLATER_OUTPUT_DOT_PRODUCTS = 7,
  TEMPLATER_OUTPUT_DOT_MAPPED = 8,
} TemplaterOutput;

/**
 * A finished run.
 */
typedef struct TemplaterResult TemplaterResult;

/**
 * A parsed LAMMPS data file.
 */
typedef struct TemplaterTopology TemplaterTopology;

/**
 * Run settings. Start from [`templater_config_default`].
 */
typedef struct TemplaterConfig {
  double alpha;
  double beta;
  double gamma;
  uint32_t iterations;
  uint32_t cutoff;
  uint64_t budget;
  double hydrogen_tolerance;
  double centrality_weight;
} TemplaterConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *templater_last_error_message(void);

struct TemplaterConfig templater_config_default(void);

/**
 * Parses the text of a LAMMPS data file.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TemplaterStatus templater_topology_parse(const char *text, struct TemplaterTopology **out);

/**
 * Number of atoms, 0 for NULL.
 *
 * # Safety
 * `topology` must be NULL or a live handle.
 */
size_t templater_topology_atom_count(const struct TemplaterTopology *topology);

/**
 * # Safety
 * `topology` must be NULL or a handle not freed before.
 */
void templater_topology_free(struct TemplaterTopology *topology);

/**
 * Maps reactants onto products and builds the templates. `config` may be
 * NULL for defaults.
 *
 * # Safety
 * `reactants` and `products` must point to arrays of live handles of the
 * given lengths, `config` must be NULL or valid, `out` must be valid.
 */
enum TemplaterStatus templater_run(const struct TemplaterTopology *const *reactants,
                                   size_t reactant_count,
                                   const struct TemplaterTopology *const *products,
                                   size_t product_count,
                                   const struct TemplaterConfig *config,
                                   struct TemplaterResult **out);

/**
 * Copies one output into a new string, released with
 * [`templater_string_free`].
 *
 * # Safety
 * `result` must be a live handle and `out` a valid pointer.
 */
enum TemplaterStatus templater_result_output(const struct TemplaterResult *result,
                                             enum TemplaterOutput which,
                                             char **out);

/**
 * Writes the two initiator atoms as 1-based global reactant ids.
 *
 * # Safety
 * `result` must be a live handle and `out` must hold two elements.
 */
enum TemplaterStatus templater_result_initiators(const struct TemplaterResult *result,
                                                 uint64_t *out);

/**
 * # Safety
 * `result` must be NULL or a handle not freed before.
 */
void templater_result_free(struct TemplaterResult *result);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not freed before.
 */
void templater_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TEMPLATER_H */
