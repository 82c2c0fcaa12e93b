#ifndef GEONET_H
#define GEONET_H

/* C interface to the geonet library. Every call returns a status code; on failure
   geonet_last_error() holds a message for the calling thread. Strings returned through
   char** are owned by the caller and released with geonet_string_free. */

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  GEONET_OK = 0,
  GEONET_POINT_OUTSIDE_DOMAIN,
  GEONET_STEP_FAILURE,
  GEONET_NO_CONVERGENCE,
  GEONET_PATH_LEAVES_DOMAIN,
  GEONET_NO_LOOP_FOUND,
  GEONET_NOT_FREE_BOUNDARY,
  GEONET_SEGMENT_TOO_LONG,
  GEONET_NOT_COLLAPSED,
  GEONET_MALFORMED_NETWORK,
  GEONET_NON_MANIFOLD_INCIDENCE,
  GEONET_TRIANGULATION_FAILURE,
  GEONET_PARITY_INCONSISTENCY,
  GEONET_PRECONDITION_UNVERIFIED,
  GEONET_NOT_FLAT,
  GEONET_WRONG_SURFACE_KIND,
  GEONET_N_UNREACHABLE,
  GEONET_UNKNOWN_SCENARIO,
  GEONET_CONFIG_INVALID,
  GEONET_IO_FAILURE,
  GEONET_INTERNAL
} geonet_status;

typedef struct geonet_surface geonet_surface;
typedef struct geonet_report geonet_report;

const char* geonet_status_name(int status);
const char* geonet_last_error(void);
void geonet_string_free(char* s);

/* Surfaces: {"kind": "FlatConvexDomain" | "SurfaceOfRevolution" | "SphericalCap", "params": {...}} */
int geonet_surface_create(const char* descriptor_json, geonet_surface** out);
void geonet_surface_free(geonet_surface* surface);
int geonet_surface_info(const geonet_surface* surface, char** json_out);

/* Geodesics. Points and vectors are in the surface chart. */
int geonet_shoot(const geonet_surface* surface, double x, double y, double vx, double vy, double max_length,
                 char** json_out);
int geonet_connect(const geonet_surface* surface, double px, double py, double qx, double qy, char** json_out);
int geonet_drop(const geonet_surface* surface, double x, double y, char** json_out);
int geonet_fbg_find(const geonet_surface* surface, double boundary_s, double angle, char** json_out);
int geonet_loop_find(const geonet_surface* surface, double seed_s, char** json_out);

/* Shortening. polyline_json is [[x, y], ...]; segments <= 0 picks the default count.
   svg_path may be NULL. */
int geonet_shorten_run(const geonet_surface* surface, const char* polyline_json, int segments, int closed,
                       const char* svg_path, char** json_out);

/* Networks: {"segments": [{"samples": [[x, y], ...], "multiplicity": m}, ...]} */
int geonet_network_check(const geonet_surface* surface, const char* network_json, double tol, const char* svg_path,
                         char** json_out);

/* Sweepouts. kind is "parallel" (params: direction, frames), "rotational" (frames) or
   "inscribed" (n, frames). r is the concentration radius. */
int geonet_sweepout_build(const geonet_surface* surface, const char* kind, const char* params_json, double r,
                          const char* svg_path, char** json_out);

/* Scenarios. config_json and out_dir may be NULL. */
int geonet_scenario_list(char** json_out);
int geonet_scenario_run(const char* name, const char* config_json, const char* out_dir, int svg, geonet_report** out);
int geonet_report_passed(const geonet_report* report);
const char* geonet_report_table(const geonet_report* report);
const char* geonet_report_json(const geonet_report* report);
void geonet_report_free(geonet_report* report);

#ifdef __cplusplus
}
#endif

#endif
