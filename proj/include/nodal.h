/*
 * C API for the nodal eigencurve / bifurcation library.
 *
 * All functions return nodal_status; every out-parameter is written only on
 * NODAL_OK.  nodal_last_error() gives a thread-local message for the most
 * recent failure on the calling thread.  Handles are opaque and freed with
 * the matching *_free function; accessors borrow, they never transfer
 * ownership.
 */
#ifndef NODAL_H
#define NODAL_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nodal_status {
    NODAL_OK = 0,
    NODAL_ERR_INVALID_ARG = 1,
    NODAL_ERR_DOMAIN = 2,
    NODAL_ERR_INDEX = 3,
    NODAL_ERR_CONFIG = 4,
    NODAL_ERR_PRECONDITION = 5,
    NODAL_ERR_NUMERIC = 6,
    NODAL_ERR_CONSISTENCY = 7,
    NODAL_ERR_IO = 8,
    NODAL_ERR_UNKNOWN = 9
} nodal_status;

const char* nodal_version(void);
const char* nodal_last_error(void);

/* ------------------------------------------------------------------ */
/* weights                                                              */

typedef struct nodal_weight nodal_weight;

nodal_status nodal_weight_sine(int frequency, nodal_weight** out);
nodal_status nodal_weight_paper_a(nodal_weight** out);
nodal_status nodal_weight_constant(double value, nodal_weight** out);
nodal_status nodal_weight_tabulated(const double* values, size_t count,
                                    nodal_weight** out);
void nodal_weight_free(nodal_weight* w);

nodal_status nodal_weight_eval(const nodal_weight* w, double x, double* out);
nodal_status nodal_weight_is_odd_about_half(const nodal_weight* w, double tol,
                                            int* out);
/* present = 0 and x_minus/x_plus untouched when no sign change exists */
nodal_status nodal_weight_sign_witnesses(const nodal_weight* w, double* x_minus,
                                         double* x_plus, int* present);

/* ------------------------------------------------------------------ */
/* eigenvalues and eigencurves                                          */

typedef enum nodal_scheme { NODAL_SCHEME_FD = 0, NODAL_SCHEME_SPECTRAL = 1 } nodal_scheme;

/* resolution: interior points (FD) or modes (spectral); 0 picks the default
 * (2000 / 64). */
nodal_status nodal_sigma(const nodal_weight* m, int mode, double lambda,
                         nodal_scheme scheme, int resolution, double* out);

typedef struct nodal_curve nodal_curve;

nodal_status nodal_curve_sample(const nodal_weight* m, int n_max, double lambda_lo,
                                double lambda_hi, double step, nodal_scheme scheme,
                                int resolution, int jobs, nodal_curve** out);
void nodal_curve_free(nodal_curve* c);

nodal_status nodal_curve_count(const nodal_curve* c, size_t* n_points, int* n_modes);
/* d1/d2 are NaN at the first/last sample */
nodal_status nodal_curve_row(const nodal_curve* c, int mode, size_t i, double* lambda,
                             double* sigma, double* d1, double* d2);

typedef enum nodal_root_label {
    NODAL_ROOT_MINUS = 0,
    NODAL_ROOT_PLUS = 1,
    NODAL_ROOT_MINUS_OUTER = 2,
    NODAL_ROOT_MINUS_INNER = 3,
    NODAL_ROOT_PLUS_INNER = 4,
    NODAL_ROOT_PLUS_OUTER = 5
} nodal_root_label;

typedef struct nodal_root {
    int mode;
    int label; /* nodal_root_label */
    double lambda;
    double mu;
    double slope;
    int at_boundary;
} nodal_root;

nodal_status nodal_curve_roots(const nodal_curve* c, int mode, double mu,
                               nodal_root* out, size_t cap, size_t* count);
nodal_status nodal_curve_max(const nodal_curve* c, int mode, double* mu_n,
                             double* argmax, size_t cap, size_t* n_argmax);
nodal_status nodal_curve_concavity(const nodal_curve* c, int mode,
                                   int* globally_concave, double* second_diff_at_zero);
nodal_status nodal_curve_export_csv(const nodal_curve* c, const char* path);

nodal_status nodal_decay_bound(const nodal_weight* m, int mode, double lambda,
                               double* out);

/* ------------------------------------------------------------------ */
/* second derivative of the eigencurve at lambda = 0, m = sin(2k pi x)  */

typedef enum nodal_sigma_ddot_route {
    NODAL_ROUTE_CLOSED_FORM = 0,
    NODAL_ROUTE_QUADRATURE_2_15 = 1,
    NODAL_ROUTE_CURVE_FD = 2
} nodal_sigma_ddot_route;

nodal_status nodal_sigma_ddot_zero(int n, int k, nodal_sigma_ddot_route route,
                                   double* out);
nodal_status nodal_p_closed_form(int n, int k, double x, double* out);
nodal_status nodal_p_quadrature(int n, int k, double x, double* out);

/* ------------------------------------------------------------------ */
/* nonlinear problem: branches of -u'' - mu u = lambda m u - a u^2      */

typedef struct nodal_continuation_options {
    double ds0;       /* 0: start from the seed amplitude */
    double ds_min;
    double ds_max;
    double tol;       /* corrector tolerance */
    int max_points;
    double lambda_lo;
    double lambda_hi;
    double norm_cap;  /* L2 truncation */
    int n_interior;   /* FD grid for the nonlinear problem */
    double eps;       /* branch-switch amplitude */
    unsigned long long seed; /* perturbs retried Newton starts */
} nodal_continuation_options;

void nodal_continuation_options_default(nodal_continuation_options* opts);

/* bifurcation values from the trivial solution (spectral eigencurves) */
nodal_status nodal_bifurcation_values(const nodal_weight* m, double mu, int mode_lo,
                                      int mode_hi, double lambda_lo, double lambda_hi,
                                      double step, nodal_root* out, size_t cap,
                                      size_t* count);

/* one corrected small solution at an onset point (amplitude eps) */
typedef struct nodal_point_info {
    double lambda;
    double mu;
    double l2;
    int nodes;
    double residual;
    int stability;
} nodal_point_info;

nodal_status nodal_onset_solution(const nodal_weight* m, const nodal_weight* a,
                                  double mu, int mode, double lambda_onset, double eps,
                                  const nodal_continuation_options* opts,
                                  nodal_point_info* out);

typedef enum nodal_termination {
    NODAL_TERM_LAMBDA_RANGE_EXIT = 0,
    NODAL_TERM_NORM_CAP = 1,
    NODAL_TERM_STEP_FLOOR = 2,
    NODAL_TERM_CLOSED_LOOP = 3,
    NODAL_TERM_TRIVIAL_RECONNECT = 4,
    NODAL_TERM_MAX_POINTS = 5
} nodal_termination;

typedef struct nodal_branch nodal_branch;         /* borrowed from a set */
typedef struct nodal_branch_set nodal_branch_set; /* owns its branches */

/* trace every +/- onset direction of the given mode at level mu */
nodal_status nodal_trace_at_mu(const nodal_weight* m, const nodal_weight* a, double mu,
                               int mode, const nodal_continuation_options* opts,
                               int jobs, nodal_branch_set** out);
void nodal_branch_set_free(nodal_branch_set* s);

nodal_status nodal_branch_set_count(const nodal_branch_set* s, size_t* count);
nodal_status nodal_branch_set_get(const nodal_branch_set* s, size_t i,
                                  const nodal_branch** out);
nodal_status nodal_branch_set_components(const nodal_branch_set* s, int* components);
nodal_status nodal_branch_set_onsets(const nodal_branch_set* s, double* out, size_t cap,
                                     size_t* count);
/* '*' in the pattern is replaced by the branch index */
nodal_status nodal_branch_set_export_csv(const nodal_branch_set* s, const char* pattern);

/* continue the max-L2 point of branch `source` to mu_target, retrace there;
 * result is a new single-branch set */
nodal_status nodal_mu_homotopy(const nodal_branch_set* s, size_t source, double mu_target,
                               int steps, const nodal_continuation_options* opts,
                               nodal_branch_set** out);

nodal_status nodal_branch_size(const nodal_branch* b, size_t* count);
nodal_status nodal_branch_point(const nodal_branch* b, size_t i, nodal_point_info* out);
nodal_status nodal_branch_termination(const nodal_branch* b, int* kind,
                                      double* lambda_cross);
nodal_status nodal_branch_min_l2(const nodal_branch* b, double* out);
nodal_status nodal_branch_export_csv(const nodal_branch* b, const char* path);
/* (x, u) profile of point i including boundary zeros; needs cap >= n_interior+2 */
nodal_status nodal_branch_profile(const nodal_branch* b, size_t i, double* x, double* u,
                                  size_t cap, size_t* count);
nodal_status nodal_branch_profile_export_csv(const nodal_branch* b, size_t i,
                                             const char* path);

/* Newton-converge a candidate (used by the reflection checks): u has
 * n_interior entries; iterations and final residual are reported. */
nodal_status nodal_newton_refine(const nodal_weight* m, const nodal_weight* a,
                                 double mu, double lambda, const double* u,
                                 size_t n_interior, double tol, int max_iter,
                                 nodal_point_info* out, int* iterations);

/* ------------------------------------------------------------------ */
/* diagrams                                                             */

typedef struct nodal_diagram nodal_diagram;

nodal_status nodal_diagram_new(const char* title, nodal_diagram** out);
void nodal_diagram_free(nodal_diagram* d);
nodal_status nodal_diagram_add_branch_set(nodal_diagram* d, const nodal_branch_set* s);
nodal_status nodal_diagram_add_branch_csv(nodal_diagram* d, const char* path);
nodal_status nodal_diagram_add_curves(nodal_diagram* d, const nodal_curve* c);
nodal_status nodal_diagram_annotate_roots(nodal_diagram* d, const nodal_root* roots,
                                          size_t count);
nodal_status nodal_diagram_render_svg(const nodal_diagram* d, const char* path,
                                      int width, int height);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NODAL_H */
