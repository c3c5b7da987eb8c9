#ifndef VORT_H
#define VORT_H

/* C API for the vorticity solver: configure an experiment with string keys,
 * execute it, and collect the exit status. All functions are thread-safe for
 * distinct handles. */

#ifdef __cplusplus
extern "C" {
#endif

#define VORT_OK 0
#define VORT_ERR_CONFIG 2    /* invalid configuration */
#define VORT_ERR_INVARIANT 3 /* invariant violated mid-run */
#define VORT_ERR_INTERNAL 4  /* unexpected failure */

typedef struct vort_run vort_run;

/* problem: accuracy | shear_layer | vortex_patch | poisson_bench | heat_maxprin.
 * Returns NULL only on allocation failure; an unknown problem is reported by
 * vort_run_execute. */
vort_run* vort_run_create(const char* problem);
void vort_run_destroy(vort_run* run);

/* Integer keys: nx, ny, trials, seed. */
int vort_run_set_int(vort_run* run, const char* key, long long value);

/* Real keys: tfinal, tvb_p, cfl_fraction, re. */
int vort_run_set_real(vort_run* run, const char* key, double value);

/* String keys: limiter (none|bp|tvb1|tvb2|bp+tvb1|bp+tvb2), out (directory),
 * snapshots ("t1,t2,..."). */
int vort_run_set_string(vort_run* run, const char* key, const char* value);

/* Runs the experiment; returns VORT_OK or an error code above. */
int vort_run_execute(vort_run* run);

/* Message for the last failure on this handle; empty string if none. */
const char* vort_run_error(const vort_run* run);

const char* vort_version(void);

#ifdef __cplusplus
}
#endif

#endif /* VORT_H */
