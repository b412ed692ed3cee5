#ifndef TSK_H
#define TSK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum TskStatus {
  TSK_STATUS_OK = 0,
  // A required pointer argument was null.
  TSK_STATUS_NULL_POINTER = 1,
  // A string was not valid UTF-8 or the group spec did not parse.
  TSK_STATUS_PARSE = 2,
  TSK_STATUS_DOMAIN = 3,
  TSK_STATUS_CAPACITY = 4,
  // The enumeration budget ran out; any value written is a lower bound.
  TSK_STATUS_BUDGET = 5,
  TSK_STATUS_INVALID_ARROW = 6,
  TSK_STATUS_IO = 7,
  // A Rust panic was caught at the boundary.
  TSK_STATUS_INTERNAL = 8,
} TskStatus;

// A group together with its subgroup lattice and arrow universe.
typedef struct TskGroup TskGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until the
// next failing call on the same thread.
const char *tsk_last_error(void);

// Library version as a static NUL-terminated string.
const char *tsk_version(void);

// Builds a group from a spec such as `D:9` or `AGL:2:3`.
//
// # Safety
// `spec` must be a NUL-terminated string and `out_group` writable.
enum TskStatus tsk_group_new(const char *spec,
                             size_t max_order,
                             size_t max_subgroups,
                             struct TskGroup **out_group);

// Releases a handle. Null is ignored.
//
// # Safety
// `g` must come from [`tsk_group_new`] and not be used afterwards.
void tsk_group_free(struct TskGroup *g);

// # Safety
// `g` must be a live handle and `out_order` writable.
enum TskStatus tsk_group_order(const struct TskGroup *g, size_t *out_order);

// Number of subgroups and of their conjugacy classes.
//
// # Safety
// `g` must be a live handle; both outputs writable.
enum TskStatus tsk_group_subgroups(const struct TskGroup *g,
                                   size_t *out_subgroups,
                                   size_t *out_classes);

// Number of conjugacy classes of meet-irreducible subgroups.
//
// # Safety
// `g` must be a live handle and `out_width` writable.
enum TskStatus tsk_width(const struct TskGroup *g, size_t *out_width);

// Counts transfer systems. Returns `Budget` if more than `budget` exist.
//
// # Safety
// `g` must be a live handle and `out_count` writable.
enum TskStatus tsk_count_systems(const struct TskGroup *g, uint64_t budget, uint64_t *out_count);

// Largest minimal generating size over all transfer systems. When the
// budget runs out the value written is a lower bound and `Budget` is
// returned.
//
// # Safety
// `g` must be a live handle and `out_value` writable.
enum TskStatus tsk_complexity(const struct TskGroup *g, uint64_t budget, size_t *out_value);

// Certified lower bound on complexity from a partial rainbow. Supports
// `D:p^n` with `p` an odd prime and `SD:n`.
//
// # Safety
// `spec` must be a NUL-terminated string and `out_bound` writable.
enum TskStatus tsk_rainbow_bound(const char *spec,
                                 size_t max_order,
                                 size_t max_subgroups,
                                 size_t *out_bound);

// Writes the group spec in canonical form into `buf` (NUL-terminated,
// truncated to `len`). Returns the full length needed, excluding the NUL.
//
// # Safety
// `g` must be a live handle; `buf` must hold `len` bytes or be null.
size_t tsk_group_spec(const struct TskGroup *g, char *buf, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TSK_H */
