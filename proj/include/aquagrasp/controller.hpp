#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aquagrasp/render.hpp"
#include "aquagrasp/rng.hpp"

namespace aqua::ctl {

using sim::ActionCommand;
using sim::Observation;

enum class Stage {
    Reset,
    YawAlign,
    ForwardApproach,
    DepthAdjust,
    CloseRange,
    Grasp,
    DragVerify,
    RecoverRegrasp,
    RecoverBackup,
    Done,
};

std::string stage_name(Stage s);

enum class SelectMode { CenterBias, Affordance };

enum class FailureReason { None, NoVisibleTarget, GraspMissed, Slipped, Timeout, LossOfView, SimFault };

std::string failure_reason_name(FailureReason r);

struct PdGains {
    double kp = 0.0;
    double kd = 0.0;
    double deadband = 0.0;  // px; output is zero strictly inside
    double clip = 1.0;
};

// Derivative bookkeeping for one PD axis: backward difference with a
// one-pole low-pass on the derivative term.
struct PdState {
    double prev_error = 0.0;
    double d_filt = 0.0;
    bool initialized = false;

    void reset() { *this = PdState{}; }
};

double pd_command(double error, PdState& state, const PdGains& gains, double dt, double alpha);

// Image-space servo setpoints, in pixels of the control camera.
struct ServoReferences {
    double lower_line_v = 0.0;  // forward-approach setpoint
    double band_lo_v = 0.0;     // depth-adjust band [lo, hi]
    double band_hi_v = 0.0;
    double margin_px = 12.0;
    double margin_rate_px_s = 15.0;  // edge-approach speed that arms the margin trigger          // loss-of-view trigger distance to any edge
    double close_range_depth = 0.60;  // m; creep slows below this range
    double grasp_depth = 0.25;        // m; close the gripper at this mask min-depth

    void validate(int img_width, int img_height) const;
};

struct RecoveryParams {
    bool regrasp_enabled = true;
    bool backup_enabled = true;
    double t_back = 4.0;     // s, regrasp retreat
    double t_retreat = 6.0;  // s, backup retreat (longer than t_back)
    double back_cmd = 0.35;
    double retreat_cmd = 0.45;
    double lateral_min = 0.05;  // m, regrasp lateral offset magnitude
    double lateral_max = 0.15;
    int max_regrasps = 3;
    // Retreats re-ascend to this vehicle depth to restore the wide view.
    double recover_depth = 0.35;  // m below the surface
    double rise_cmd = 0.5;
};

struct ControllerConfig {
    PdGains yaw{0.010, 0.004, 5.0, 1.0};
    PdGains surge{0.010, 0.020, 6.0, 1.0};
    PdGains heave{0.012, 0.030, 4.0, 1.0};
    // Reference lines as fractions of image height; resolved against the
    // control camera at construction.
    double lower_line_frac = 0.80;
    double band_lo_frac = 0.40;
    double band_hi_frac = 0.50;
    // Affordance mode servos on the heatmap peak (the grasp pixel) rather
    // than the mask centroid; the depth band shifts up to compensate for the
    // peak sitting at the grasp height instead of the body centroid.
    double affordance_band_shift = -0.045;
    double margin_px = 12.0;
    double margin_rate_px_s = 15.0;  // edge-approach speed that arms the margin trigger
    double close_range_depth = 0.60;
    double grasp_depth = 0.25;
    double yaw_done_px = 8.0;
    double creep_cmd = 0.22;
    double drag_cmd = 0.35;
    double drag_duration = 3.0;
    double settle_duration = 0.4;
    double stage_timeout = 20.0;
    double coast_duration = 0.5;
    double closed_aperture = 0.02;
    double derivative_alpha = 0.5;
    double perception_period = 0.1;
    RecoveryParams recovery;
    SelectMode mode = SelectMode::CenterBias;
    double heatmap_sigma = 3.0;  // px, oracle splat width in affordance mode

    ServoReferences resolve_references(int img_width, int img_height) const;
};

ControllerConfig controller_from_json(const Json& j, const std::string& context);
Json controller_to_json(const ControllerConfig& cfg);

// Spec'd state bundle for the stage machine.
struct StageState {
    Stage stage = Stage::Reset;
    int target_id = -1;
    int regrasp_count = 0;
    double entered_at = 0.0;
};

enum class RecoveryTrigger { DragFailed, MarginExcursion };

// Pure transition used by the stage machine and exercised directly in tests:
// drag failures route to regrasp (bounded by max_regrasps), margin
// excursions route to backup without consuming a regrasp.
StageState recovery_transition(const StageState& state, RecoveryTrigger trigger, const RecoveryParams& params,
                               double now);

// Target selection. CenterBias picks the visible object whose centroid is
// nearest the image center (lowest id on ties). Affordance picks the object
// whose mask contains the heatmap argmax (nearest centroid if the argmax
// lands off-mask). Throws NoVisibleTarget when nothing qualifies.
int select_target(const Observation& obs, SelectMode mode, const ImageF* heatmap, double center_u,
                  double center_v);

// Stage servo laws (one perception tick each).
double yaw_step(double centroid_u, double center_u, PdState& state, const PdGains& gains, double dt,
                double alpha = 0.5);
std::pair<double, bool> forward_step(double centroid_v, const ServoReferences& refs, PdState& state,
                                     const PdGains& gains, double dt, double alpha = 0.5);
std::pair<double, bool> depth_step(double centroid_v, const ServoReferences& refs, PdState& state,
                                   const PdGains& gains, double dt, double alpha = 0.5);
std::pair<double, bool> close_range_step(const Observation& obs, int target_id, const ServoReferences& refs,
                                         double creep_cmd);

struct StageTransition {
    double t = 0.0;
    Stage from = Stage::Reset;
    Stage to = Stage::Reset;
    std::string reason;
};

struct ControllerEvent {
    double t = 0.0;
    std::string kind;
    Json data;
};

// Per-tick debug view, recorded by the harness for replay.
struct TickInfo {
    Stage stage = Stage::Reset;
    int target_id = -1;
    bool centroid_valid = false;
    double centroid_u = 0.0;
    double centroid_v = 0.0;
    double error_u = 0.0;
    double error_v = 0.0;
    double yaw_d_filt = 0.0;
    double min_depth = 0.0;
    bool min_depth_valid = false;
};

// The six-stage visuo-servoing machine with regrasp/backup recovery. One
// instance per episode; tick() runs at the perception rate (10 Hz) and the
// returned command is latched by the 100 Hz loop until the next tick.
class StagedController {
  public:
    StagedController(const ControllerConfig& cfg, int img_width, int img_height, uint64_t seed);

    // `heatmap` is consulted in affordance mode (goal-conditioned selection).
    ActionCommand tick(const Observation& obs, const ImageF* heatmap = nullptr);

    bool done() const { return state_.stage == Stage::Done; }
    bool succeeded() const { return succeeded_; }
    FailureReason failure() const { return failure_; }
    Stage stage() const { return state_.stage; }
    int target_id() const { return state_.target_id; }
    int first_target_id() const { return first_target_id_; }
    int regrasp_count() const { return state_.regrasp_count; }
    int backup_count() const { return backup_count_; }
    const std::vector<StageTransition>& trace() const { return trace_; }
    const std::vector<ControllerEvent>& events() const { return events_; }
    const TickInfo& last_tick_info() const { return info_; }

  private:
    void transition(Stage to, const std::string& reason, double t);
    void fail(FailureReason reason, double t);
    void begin_recovery(RecoveryTrigger trigger, double t, FailureReason exhausted_reason);
    bool reselect_target(const Observation& obs, const ImageF* heatmap, double t);

    ControllerConfig cfg_;
    ServoReferences refs_;
    double center_u_ = 0.0;
    double center_v_ = 0.0;
    Rng rng_;

    StageState state_;
    int64_t tick_index_ = 0;
    int64_t entered_tick_ = 0;
    int first_target_id_ = -1;
    bool succeeded_ = false;
    FailureReason failure_ = FailureReason::None;

    PdState yaw_pd_;
    PdState surge_pd_;
    PdState heave_pd_;

    bool have_last_centroid_ = false;
    double last_centroid_u_ = 0.0;
    double last_centroid_v_ = 0.0;
    bool have_prev_fresh_ = false;
    double prev_fresh_u_ = 0.0;
    double prev_fresh_v_ = 0.0;
    int64_t prev_fresh_tick_ = 0;
    int64_t last_seen_tick_ = 0;
    bool margin_since_selection_ = false;
    double regrasp_lateral_cmd_ = 0.0;
    int backup_count_ = 0;

    std::vector<StageTransition> trace_;
    std::vector<ControllerEvent> events_;
    TickInfo info_;
};

}  // namespace aqua::ctl
