/* rldwa: person-following navigation stack (omnidirectional DWA + learned
 * yaw control) with a deterministic 2D simulator.
 *
 * C API over the C++ core: opaque handles, integer status codes. Every
 * function that can fail returns rldwa_status (or NULL for constructors);
 * rldwa_last_error() describes the most recent failure on the calling
 * thread. Status values double as CLI exit codes.
 */
#ifndef RLDWA_H
#define RLDWA_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rldwa_status {
  RLDWA_OK = 0,
  RLDWA_ERR_CONFIG = 2, /* bad configuration or malformed input file */
  RLDWA_ERR_RUNTIME = 3 /* anything else */
} rldwa_status;

const char* rldwa_version(void);

/* Message of the last failure on this thread; empty string if none. */
const char* rldwa_last_error(void);

/* ---- simulated world ------------------------------------------------- */

typedef struct rldwa_world rldwa_world;

/* Builds a world from scenario JSON text / file. NULL on failure. */
rldwa_world* rldwa_world_create(const char* config_json);
rldwa_world* rldwa_world_create_from_file(const char* path);
void rldwa_world_destroy(rldwa_world* world);

/* Advances the robot one step with a body-frame command, then the person. */
rldwa_status rldwa_world_step(rldwa_world* world, double vx, double vy, double omega, double dt);
rldwa_status rldwa_world_step_person(rldwa_world* world, double dt);

rldwa_status rldwa_world_robot_pose(const rldwa_world* world, double* x, double* y,
                                    double* heading);
rldwa_status rldwa_world_person_position(const rldwa_world* world, double* x, double* y);

/* 1 if the last step collided, 0 otherwise, -1 on a null handle. */
int rldwa_world_collided(const rldwa_world* world);

/* Number of lidar beams, or -1 on a null handle. */
int rldwa_world_scan_size(const rldwa_world* world);

/* Fills `ranges` with one full scan; capacity must cover every beam. */
rldwa_status rldwa_world_scan(const rldwa_world* world, double* ranges, int capacity);

/* 1 when the open segment a-b crosses no obstacle, 0 when blocked,
 * -1 on a null handle. */
int rldwa_world_line_of_sight(const rldwa_world* world, double ax, double ay, double bx,
                              double by);

/* ---- trained agent ---------------------------------------------------- */

typedef struct rldwa_agent rldwa_agent;

rldwa_agent* rldwa_agent_load(const char* checkpoint_path);
void rldwa_agent_destroy(rldwa_agent* agent);

/* Reseeds the stochastic action stream (deterministic actions ignore it). */
rldwa_status rldwa_agent_seed(rldwa_agent* agent, unsigned long long seed);

/* state = [distance_norm, heading_error_norm, previous_yaw_norm]. */
rldwa_status rldwa_agent_act(rldwa_agent* agent, const double state[3], int deterministic,
                             double* omega_out);

/* ---- batch entry points (what the CLI calls) -------------------------- */

/* Trains on a config; preset is one of smoke|desk|paper|none. seed replaces
 * the config's seed. Writes checkpoints and training_log.csv to out_dir. */
rldwa_status rldwa_train(const char* config_path, const char* preset, unsigned long long seed,
                         const char* out_dir);

/* Evaluates a checkpoint on a scenario; mode is omni|diff|diff_agent.
 * Writes run###.csv, run###.svg and summary.json to out_dir. */
rldwa_status rldwa_eval(const char* checkpoint_path, const char* scenario_path, const char* mode,
                        int runs, unsigned long long seed, const char* out_dir);

/* Renders a run log CSV to an SVG trajectory plot. */
rldwa_status rldwa_replay(const char* log_csv_path, const char* out_svg_path);

/* Aggregates run###.csv files under logs_dir into summary JSON. */
rldwa_status rldwa_metrics(const char* logs_dir, const char* out_json_path);

#ifdef __cplusplus
}
#endif

#endif /* RLDWA_H */
