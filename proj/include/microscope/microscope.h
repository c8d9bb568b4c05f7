/*
 * Copyright 2026 The microscope authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef MICROSCOPE_MICROSCOPE_H
#define MICROSCOPE_MICROSCOPE_H

/* C interface to the microscope library. Every call returns MS_OK or an
 * error status; ms_last_error() describes the latest failure on the calling
 * thread. Strings returned through char** are owned by the caller and must be
 * released with ms_string_free. */

#include <stdint.h>

#if defined(_WIN32)
#define MS_API __declspec(dllexport)
#else
#define MS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ms_tree ms_tree_t;
typedef struct ms_system ms_system_t;

enum ms_status {
  MS_OK = 0,
  MS_ERR_INVALID_ARGUMENT = 1,
  MS_ERR_PREFIX_VIOLATION,
  MS_ERR_NOT_TIDY,
  MS_ERR_EMPTY_ROOT,
  MS_ERR_POINT_OUT_OF_RANGE,
  MS_ERR_VERTEX_NOT_OCCUPIED,
  MS_ERR_DEPTH_OUT_OF_RANGE,
  MS_ERR_MIXED_PARAMS,
  MS_ERR_HEIGHT_TOO_SMALL,
  MS_ERR_NOT_LOCALLY_LARGE,
  MS_ERR_NOT_EQUICONTRACTIVE,
  MS_ERR_DEPTH_TOO_DEEP_FOR_RATIO,
  MS_ERR_INVALID_S,
  MS_ERR_INF_NOT_ATTAINED,
  MS_ERR_DEPTH_TOO_SHALLOW_FOR_ALPHA,
  MS_ERR_UNKNOWN_NAME,
  MS_ERR_EMPTY_MINISET,
  MS_ERR_LAMBDA_TOO_SMALL,
  MS_ERR_NO_QUALIFYING_WINDOW,
  MS_ERR_K_TOO_LARGE_FOR_DEPTH,
  MS_ERR_SPEC_PARSE,
  MS_ERR_OVERFLOW,
  MS_ERR_IO,
  MS_ERR_INTERNAL = 100
};

MS_API const char* ms_version(void);
MS_API const char* ms_last_error(void);
MS_API const char* ms_status_name(int status);
MS_API void ms_string_free(char* s);

/* trees */
MS_API int ms_tree_load(const char* path, ms_tree_t** out);
MS_API int ms_tree_save(const ms_tree_t* t, const char* path);
MS_API int ms_tree_from_json(const char* json, ms_tree_t** out);
MS_API int ms_tree_to_json(const ms_tree_t* t, char** out);
MS_API void ms_tree_free(ms_tree_t* t);
MS_API int ms_tree_height(const ms_tree_t* t, int* out);
MS_API int ms_tree_level_count(const ms_tree_t* t, int n, uint64_t* out);
MS_API int ms_tree_leaf_count(const ms_tree_t* t, uint64_t* out);
MS_API int ms_tree_equal(const ms_tree_t* a, const ms_tree_t* b, int* out);
MS_API int ms_tree_summary(const ms_tree_t* t, char** out);
MS_API int ms_hausdorff_distance(const ms_tree_t* a, const ms_tree_t* b, int n, double* out);

/* constructions; dim <= 0 and base <= 0 select the natural parameters */
MS_API int ms_canonical(const char* name, int depth, int base, int dim, ms_tree_t** out);
MS_API int ms_system_from_json(const char* json, ms_system_t** out);
MS_API int ms_system_to_json(const ms_system_t* s, char** out);
MS_API void ms_system_free(ms_system_t* s);
MS_API int ms_corner_system(int dim, double target, ms_system_t** out);
MS_API int ms_similarity_dimension(const ms_system_t* s, double* value, int* upper_bound_only);
MS_API int ms_attractor(const ms_system_t* s, int base, int depth, ms_tree_t** out);
MS_API int ms_construct_k(const ms_system_t* q_inf, double s, int n, ms_system_t** out);
/* report receives the glued pieces and scaffold values as JSON; may be NULL */
MS_API int ms_delta_build(const char* delta_json, int base, int dim, int depth, ms_tree_t** out, char** report);
/* lambda and the shift coordinates are rationals such as "4" or "-4/3" */
MS_API int ms_miniset(const ms_tree_t* t, const char* lambda, const char* const* shift, int depth, ms_tree_t** out);

/* reports, all JSON with "schema": 1 */
MS_API int ms_dims(const ms_tree_t* t, int n0, int n1, int m, int workers, char** out);
MS_API int ms_dims_csv(const ms_tree_t* t, int n0, int n1, int m, int workers, char** out);
/* extract_height <= 0 skips the subtree extraction */
MS_API int ms_largeness(const ms_tree_t* t, double s, int m, double C, int extract_height, char** out);
/* options: {"M", "eps", "min", "max", "pk", "k", "kmax", "h_lo", "h_hi",
 * "spectrum", "with_windows", "bin_width", "verify", "include_root",
 * "budget", "seed", "workers"} */
MS_API int ms_gallery(const ms_tree_t* t, const char* options_json, char** out);
MS_API int ms_spectrum_csv(const ms_tree_t* t, const char* options_json, char** out);
MS_API int ms_verify_suite(uint64_t seed, int large_trees, int random_trees, int workers, char** out);

#ifdef __cplusplus
}
#endif

#endif /* MICROSCOPE_MICROSCOPE_H */
