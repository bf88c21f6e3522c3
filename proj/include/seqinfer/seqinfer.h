/* SPDX-License-Identifier: Apache-2.0 */
#ifndef SEQINFER_SEQINFER_H
#define SEQINFER_SEQINFER_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SEQINFER_BUILDING)
#define SEQINFER_API __declspec(dllexport)
#else
#define SEQINFER_API __declspec(dllimport)
#endif
#else
#define SEQINFER_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum seqinfer_status {
  SEQINFER_OK = 0,
  SEQINFER_ERR_CONFIG = 2,   /* invalid config, arguments or input data */
  SEQINFER_ERR_RUNTIME = 3,  /* numeric or I/O failure during a run */
} seqinfer_status;

typedef enum seqinfer_format {
  SEQINFER_FORMAT_CSV = 0,
  SEQINFER_FORMAT_JSON = 1,
} seqinfer_format;

typedef struct seqinfer_config seqinfer_config;
typedef struct seqinfer_coverage seqinfer_coverage;
typedef struct seqinfer_quantiles seqinfer_quantiles;

/* One coverage cell. `method` points into the owning report. */
typedef struct seqinfer_coverage_row {
  double mu;
  const char* method;
  double L_pct;
  double U_pct;
  double L_se;
  double U_se;
  double mean_length;
  double mean_T;
  int n_valid;
  int failures;
} seqinfer_coverage_row;

/* Message for the last failed call on this thread; "" if none. */
SEQINFER_API const char* seqinfer_last_error(void);
SEQINFER_API const char* seqinfer_version(void);

/* Strings and arrays returned through out-parameters are owned by the caller. */
SEQINFER_API void seqinfer_string_free(char* s);
SEQINFER_API void seqinfer_doubles_free(double* values);

SEQINFER_API seqinfer_status seqinfer_config_from_file(const char* path, seqinfer_config** out);
SEQINFER_API seqinfer_status seqinfer_config_from_json(const char* json, seqinfer_config** out);
SEQINFER_API seqinfer_status seqinfer_config_set_seed(seqinfer_config* config, uint64_t seed);
SEQINFER_API void seqinfer_config_free(seqinfer_config* config);

/* Coverage study. Results do not depend on `jobs`. */
SEQINFER_API seqinfer_status seqinfer_run_coverage(const seqinfer_config* config, int jobs,
                                                   seqinfer_coverage** out);
SEQINFER_API size_t seqinfer_coverage_rows(const seqinfer_coverage* report);
SEQINFER_API seqinfer_status seqinfer_coverage_row_at(const seqinfer_coverage* report, size_t index,
                                                      seqinfer_coverage_row* out);
SEQINFER_API seqinfer_status seqinfer_coverage_render(const seqinfer_coverage* report, seqinfer_format format,
                                                      char** out);
SEQINFER_API seqinfer_status seqinfer_coverage_write(const seqinfer_coverage* report, const char* path,
                                                     seqinfer_format format);
SEQINFER_API void seqinfer_coverage_free(seqinfer_coverage* report);

/* Quantile table of R, R0, R1 and R1 with estimated sigma. */
SEQINFER_API seqinfer_status seqinfer_run_quantiles(const seqinfer_config* config, int jobs,
                                                    seqinfer_quantiles** out);
SEQINFER_API seqinfer_status seqinfer_quantiles_render(const seqinfer_quantiles* table, seqinfer_format format,
                                                       char** out);
SEQINFER_API seqinfer_status seqinfer_quantiles_write(const seqinfer_quantiles* table, const char* path,
                                                      seqinfer_format format);
SEQINFER_API void seqinfer_quantiles_free(seqinfer_quantiles* table);

/* CSV text "mu,trial,T,mean,sum,crossed" for `trials` stopped samples per mu. */
SEQINFER_API seqinfer_status seqinfer_simulate(const seqinfer_config* config, uint64_t seed, int trials,
                                               char** out);

/* One value per line, or a CSV column headed "x". */
SEQINFER_API seqinfer_status seqinfer_load_dataset(const char* path, double** values, size_t* count);

/* Interval for `data` taken as the stopped sample. `rule` is a preset name
   ("rst", "studentized_rst", "smoothed_absolute[:delta]") or a scenario JSON
   file. Writes the result as a JSON object. */
SEQINFER_API seqinfer_status seqinfer_interval(const double* data, size_t count, const char* rule,
                                               const char* method, double alpha, int B, uint64_t seed,
                                               char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* SEQINFER_SEQINFER_H */
