/* gpil — graph programs with rule schemata, nested graph-condition
 * assertions, incorrectness-triple checking, and bounded brute-force
 * validation. C interface over the C++ core; all state lives behind an
 * opaque workspace handle. Strings returned through out-parameters are
 * heap-allocated and must be released with gpil_string_free.
 */

#ifndef GPIL_H
#define GPIL_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct gpil_workspace gpil_workspace;

/* Status codes double as CLI exit codes. */
typedef enum {
  GPIL_OK = 0,       /* affirmative / valid */
  GPIL_REFUTED = 1,  /* refuted / counterexample / rejected */
  GPIL_ERROR = 2,    /* usage or load error */
  GPIL_BOUNDED = 3,  /* bounded / inconclusive (truncated, up-to-bound) */
} gpil_status;

const char* gpil_version(void);

gpil_workspace* gpil_workspace_new(void);
void gpil_workspace_free(gpil_workspace* ws);

/* Message for the most recent GPIL_ERROR on this workspace; owned by the
 * workspace, valid until the next call. */
const char* gpil_last_error(const gpil_workspace* ws);

void gpil_string_free(char* s);

/* Options. Integer keys: max-nodes, max-parallel, max-steps, int-window,
 * seed, jobs, machine (0/1). String keys: labels (comma-separated constant
 * labels, e.g. "0,1,0:0"), base-dir (resolution root for use "...").
 */
gpil_status gpil_set_option_int(gpil_workspace* ws, const char* key, int64_t value);
gpil_status gpil_set_option_str(gpil_workspace* ws, const char* key, const char* value);

/* Rule loading. Text is the rule file format; multiple rules per call. */
gpil_status gpil_load_rules_file(gpil_workspace* ws, const char* path);
gpil_status gpil_load_rules_text(gpil_workspace* ws, const char* text);

/* Operations. Program/graph/condition/triple/proof arguments are text in
 * the external formats. `out` and `warnings` may be NULL when the caller
 * does not need them. The returned status is the operation's verdict; any
 * output text is produced even for non-zero verdicts (except GPIL_ERROR).
 */
gpil_status gpil_run(gpil_workspace* ws, const char* program, const char* graph,
                     char** out, char** warnings);
gpil_status gpil_outcomes(gpil_workspace* ws, const char* program, const char* graph,
                          char** out, char** warnings);
gpil_status gpil_satisfies(gpil_workspace* ws, const char* cond, const char* graph,
                           char** out, char** warnings);
/* rule_names: comma-separated subset of loaded rules; NULL or "" = all. */
gpil_status gpil_app(gpil_workspace* ws, const char* rule_names, char** out,
                     char** warnings);
gpil_status gpil_wpost(gpil_workspace* ws, const char* rule_names, const char* cond,
                       char** out, char** warnings);
gpil_status gpil_check(gpil_workspace* ws, const char* proof, char** out,
                       char** warnings);
gpil_status gpil_validate(gpil_workspace* ws, const char* triple, char** out,
                          char** warnings);
/* kind: app|wpost|shift|right; mutation: NULL/"" or one of app-drop-dang,
 * app-drop-rule, wpost-drop-inverse-dang, shift-identity-only,
 * right-no-complement-true. */
gpil_status gpil_difftest(gpil_workspace* ws, const char* kind, const char* rule_names,
                          const char* cond, const char* mutation, char** out,
                          char** warnings);

#ifdef __cplusplus
}
#endif

#endif /* GPIL_H */
