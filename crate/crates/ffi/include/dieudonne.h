#ifndef DIEUDONNE_H
#define DIEUDONNE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Newton point method selector.
typedef enum DdMethod {
  DD_METHOD_AUTO = 0,
  DD_METHOD_FAST = 1,
  DD_METHOD_ORACLE = 2,
  DD_METHOD_LINEARIZED = 3,
} DdMethod;

typedef enum DdStatus {
  DD_STATUS_OK = 0,
  DD_STATUS_NULL_POINTER = 1,
  DD_STATUS_INVALID_UTF8 = 2,
  DD_STATUS_NOT_PRIME = 3,
  DD_STATUS_INVALID_PARAMETER = 4,
  DD_STATUS_PRECISION_POLICY = 5,
  DD_STATUS_UNSUPPORTED = 6,
  DD_STATUS_PRECISION_EXHAUSTED = 7,
  DD_STATUS_V_NON_INTEGRAL = 8,
  DD_STATUS_DEGENERATE_DETERMINANT = 9,
  DD_STATUS_PAIRING_INCOMPATIBLE = 10,
  DD_STATUS_DEGENERATE_PAIRING = 11,
  DD_STATUS_DET_BUDGET = 12,
  DD_STATUS_NOT_RAPOPORT = 13,
  DD_STATUS_INCONSISTENT = 14,
  DD_STATUS_SIZE_GUARD = 15,
  DD_STATUS_KEY_MISMATCH = 16,
  DD_STATUS_PARSE = 17,
  DD_STATUS_INTERNAL = 18,
  DD_STATUS_PANIC = 19,
} DdStatus;

// A rank-2 Dieudonne module with its tower.
typedef struct DdModule DdModule;

// Coefficient ring W(F_(p^(f ext)))[pi]/(pi^e - p) at precision N.
typedef struct DdTower DdTower;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty after success.
// The pointer stays valid until the next call on the same thread.
const char *dd_last_error(void);

// # Safety
// `out_tower` must be a valid pointer.
enum DdStatus dd_tower_new(uint64_t p,
                           uintptr_t f,
                           uintptr_t e,
                           uintptr_t ext,
                           uint32_t n,
                           struct DdTower **out_tower);

// # Safety
// `tower` must come from [`dd_tower_new`] and not be used afterwards.
void dd_tower_free(struct DdTower *tower);

// g = e f.
//
// # Safety
// `tower` must be a live handle or null.
uint32_t dd_tower_g(const struct DdTower *tower);

// Module of the explicit family with Newton point s(a).
//
// # Safety
// `tower` must be a live handle and `out_module` a valid pointer.
enum DdStatus dd_module_slope(const struct DdTower *tower,
                              uint32_t a,
                              struct DdModule **out_module);

// Superspecial module with per-slot exponents (e1, e2); `rapoport` selects
// the Rapoport variant.
//
// # Safety
// `tower` must be a live handle and `out_module` a valid pointer.
enum DdStatus dd_module_superspecial(const struct DdTower *tower,
                                     uint32_t e1,
                                     uint32_t e2,
                                     bool rapoport,
                                     struct DdModule **out_module);

// The f = 1, e = 2 non-Rapoport example.
//
// # Safety
// `tower` must be a live handle and `out_module` a valid pointer.
enum DdStatus dd_module_non_rapoport_example(const struct DdTower *tower,
                                             struct DdModule **out_module);

// Parse a module from its JSON form (the tower travels with it).
//
// # Safety
// `json` must be a NUL-terminated string and `out_module` a valid pointer.
enum DdStatus dd_module_from_json(const char *json, struct DdModule **out_module);

// # Safety
// `module` must be a live handle and `out_json` a valid pointer.
enum DdStatus dd_module_to_json(const struct DdModule *module, char **out_json);

// Invariant report (Lie type, a-type, Newton point, flags) as JSON.
//
// # Safety
// `module` must be a live handle and `out_json` a valid pointer.
enum DdStatus dd_module_invariants(const struct DdModule *module,
                                   enum DdMethod method,
                                   char **out_json);

// Twice the Newton index: the Newton point is s(twice / 2).
//
// # Safety
// `module` must be a live handle and `out_twice` a valid pointer.
enum DdStatus dd_module_newton_twice(const struct DdModule *module,
                                     enum DdMethod method,
                                     uint32_t *out_twice);

// # Safety
// `module` must come from this library and not be used afterwards.
void dd_module_free(struct DdModule *module);

// Hecke probe report as JSON.
//
// # Safety
// `out_json` must be a valid pointer.
enum DdStatus dd_hecke_probe(uint64_t p,
                             uint32_t s,
                             bool full_grassmannian,
                             uint64_t size_cap,
                             char **out_json);

// # Safety
// `s` must come from this library and not be used afterwards.
void dd_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIEUDONNE_H */
