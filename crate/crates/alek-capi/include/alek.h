#ifndef ALEK_H
#define ALEK_H

/* Generated by cbindgen from the alek-capi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Success.
 */
#define ALEK_OK 0

/**
 * A required pointer argument was null.
 */
#define ALEK_NULL_POINTER 1

/**
 * Scenario JSON failed to parse or validate.
 */
#define ALEK_PARSE 2

/**
 * Evaluation failed (invalid tolerances, model resolution, quadrature, …).
 */
#define ALEK_DOMAIN 3

/**
 * An internal panic was caught at the boundary.
 */
#define ALEK_PANIC 4

/**
 * Finished classification report handle.
 */
typedef struct AlekReport AlekReport;

/**
 * Parsed scenario handle.
 */
typedef struct AlekScenario AlekScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string; never freed.
 */
const char *alek_version(void);

/**
 * Message of the most recent failure on the calling thread, empty if none.
 * Valid until the next failing call on this thread; do not free.
 */
const char *alek_last_error(void);

/**
 * Parses scenario JSON into a handle. On success stores the handle in `*out`
 * and returns `ALEK_OK`; on failure stores null and returns `ALEK_PARSE`
 * (or `ALEK_NULL_POINTER`).
 *
 * # Safety
 * `json` must be a NUL-terminated UTF-8 string; `out` must be writable.
 */
int alek_scenario_parse(const char *json, AlekScenario **out);

/**
 * Releases a scenario handle; null is a no-op.
 *
 * # Safety
 * `scenario` must come from [`alek_scenario_parse`] and not be used after.
 */
void alek_scenario_free(AlekScenario *scenario);

/**
 * Classifies a scenario and stores a report handle in `*out`.
 *
 * `zero_tol`/`rank_tol` override the scenario's tolerances when positive;
 * pass 0 (or any non-positive value) to keep the scenario's own, falling
 * back to the library defaults. Reports carry no timestamp, so their JSON
 * is byte-reproducible.
 *
 * # Safety
 * `scenario` must be a live handle from [`alek_scenario_parse`]; `out` must
 * be writable.
 */
int alek_classify(const AlekScenario *scenario, double zero_tol, double rank_tol, AlekReport **out);

/**
 * Serializes the full report as pretty-printed JSON into `*out`
 * (free with [`alek_string_free`]).
 *
 * # Safety
 * `report` must be a live handle from [`alek_classify`]; `out` must be
 * writable.
 */
int alek_report_to_json(const AlekReport *report, char **out);

/**
 * Stores the report's regime as a human-readable string in `*out`
 * (free with [`alek_string_free`]).
 *
 * # Safety
 * `report` must be a live handle from [`alek_classify`]; `out` must be
 * writable.
 */
int alek_report_regime(const AlekReport *report, char **out);

/**
 * Releases a string returned through a `char **out` parameter; null is a
 * no-op.
 *
 * # Safety
 * `s` must come from this library and not be used after.
 */
void alek_string_free(char *s);

/**
 * Releases a report handle; null is a no-op.
 *
 * # Safety
 * `report` must come from [`alek_classify`] and not be used after.
 */
void alek_report_free(AlekReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ALEK_H */
