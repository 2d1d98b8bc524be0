#include "aquagrasp/controller.hpp"

#include <algorithm>
#include <cmath>

namespace aqua::ctl {

std::string stage_name(Stage s) {
    switch (s) {
        case Stage::Reset: return "Reset";
        case Stage::YawAlign: return "YawAlign";
        case Stage::ForwardApproach: return "ForwardApproach";
        case Stage::DepthAdjust: return "DepthAdjust";
        case Stage::CloseRange: return "CloseRange";
        case Stage::Grasp: return "Grasp";
        case Stage::DragVerify: return "DragVerify";
        case Stage::RecoverRegrasp: return "RecoverRegrasp";
        case Stage::RecoverBackup: return "RecoverBackup";
        case Stage::Done: return "Done";
    }
    return "?";
}

std::string failure_reason_name(FailureReason r) {
    switch (r) {
        case FailureReason::None: return "none";
        case FailureReason::NoVisibleTarget: return "NoVisibleTarget";
        case FailureReason::GraspMissed: return "GraspMissed";
        case FailureReason::Slipped: return "Slipped";
        case FailureReason::Timeout: return "Timeout";
        case FailureReason::LossOfView: return "LossOfView";
        case FailureReason::SimFault: return "SimFault";
    }
    return "?";
}

void ServoReferences::validate(int img_width, int img_height) const {
    if (!(band_lo_v > 0.0 && band_lo_v < band_hi_v && band_hi_v < img_height))
        throw ConfigError("ServoReferences: band must satisfy 0 < lo < hi < image height");
    if (lower_line_v <= 0.0 || lower_line_v >= img_height)
        throw ConfigError("ServoReferences: lower_line_v outside the image");
    if (margin_px >= std::min(img_width, img_height) / 2.0)
        throw ConfigError("ServoReferences: margin_px too large for the image");
    if (grasp_depth <= 0.0) throw ConfigError("ServoReferences: grasp_depth must be positive");
}

ServoReferences ControllerConfig::resolve_references(int img_width, int img_height) const {
    ServoReferences refs;
    // The affordance servo point is the grasp pixel, which sits above the
    // mask centroid; the band shifts up by the configured offset so the
    // depth-adjust stop still parks the gripper at grasp height.
    const double shift = mode == SelectMode::Affordance ? affordance_band_shift : 0.0;
    refs.lower_line_v = lower_line_frac * img_height;
    refs.band_lo_v = (band_lo_frac + shift) * img_height;
    refs.band_hi_v = (band_hi_frac + shift) * img_height;
    refs.margin_px = margin_px;
    refs.close_range_depth = close_range_depth;
    refs.grasp_depth = grasp_depth;
    refs.validate(img_width, img_height);
    return refs;
}

double pd_command(double error, PdState& state, const PdGains& gains, double dt, double alpha) {
    double d_raw = 0.0;
    if (state.initialized && dt > 0.0) d_raw = (error - state.prev_error) / dt;
    state.d_filt = state.initialized ? alpha * d_raw + (1.0 - alpha) * state.d_filt : d_raw;
    state.prev_error = error;
    state.initialized = true;
    if (std::abs(error) < gains.deadband) return 0.0;
    const double u = gains.kp * error + gains.kd * state.d_filt;
    return std::clamp(u, -gains.clip, gains.clip);
}

double yaw_step(double centroid_u, double center_u, PdState& state, const PdGains& gains, double dt,
                double alpha) {
    return pd_command(center_u - centroid_u, state, gains, dt, alpha);
}

std::pair<double, bool> forward_step(double centroid_v, const ServoReferences& refs, PdState& state,
                                     const PdGains& gains, double dt, double alpha) {
    const double error = refs.lower_line_v - centroid_v;
    const double cmd = pd_command(error, state, gains, dt, alpha);
    return {cmd, std::abs(error) < gains.deadband};
}

std::pair<double, bool> depth_step(double centroid_v, const ServoReferences& refs, PdState& state,
                                   const PdGains& gains, double dt, double alpha) {
    const double mid = 0.5 * (refs.band_lo_v + refs.band_hi_v);
    // Positive command is upward; a centroid below the band (larger v)
    // produces a negative (descend) command.
    const double cmd = pd_command(mid - centroid_v, state, gains, dt, alpha);
    const bool inside = centroid_v >= refs.band_lo_v && centroid_v <= refs.band_hi_v;
    return {inside ? 0.0 : cmd, inside};
}

std::pair<double, bool> close_range_step(const Observation& obs, int target_id, const ServoReferences& refs,
                                         double creep_cmd) {
    const sim::ObjectView* view = obs.view_of(target_id);
    if (view == nullptr || view->pixel_count == 0)
        throw TargetDepthUnavailable("close_range_step: target mask empty this frame");
    if (view->min_depth <= refs.grasp_depth) return {0.0, true};
    const double cmd = view->min_depth < refs.close_range_depth ? 0.5 * creep_cmd : creep_cmd;
    return {cmd, false};
}

int select_target(const Observation& obs, SelectMode mode, const ImageF* heatmap, double center_u,
                  double center_v) {
    if (mode == SelectMode::CenterBias) {
        int best_id = -1;
        double best_dist = std::numeric_limits<double>::max();
        // Views are ordered by id, so strict improvement keeps the lowest id
        // on exact ties.
        for (const auto& view : obs.views) {
            if (view.pixel_count == 0) continue;
            const double du = view.centroid_u - center_u;
            const double dv = view.centroid_v - center_v;
            const double dist = std::sqrt(du * du + dv * dv);
            if (dist < best_dist) {
                best_dist = dist;
                best_id = view.id;
            }
        }
        if (best_id < 0) throw NoVisibleTarget("select_target: no object mask visible");
        return best_id;
    }

    if (heatmap == nullptr) throw ConfigError("select_target: affordance mode requires a heatmap");
    // Row-major argmax; first hit wins, which makes ties deterministic.
    int best_x = -1, best_y = -1;
    float best_val = 0.0f;
    for (int y = 0; y < heatmap->height; ++y) {
        for (int x = 0; x < heatmap->width; ++x) {
            const float v = heatmap->at(x, y);
            if (v > best_val) {
                best_val = v;
                best_x = x;
                best_y = y;
            }
        }
    }
    if (best_x < 0) throw NoVisibleTarget("select_target: affordance heatmap is empty");
    const uint8_t code = obs.labels.at(best_x, best_y);
    if (code != 0) return code - 1;
    // Argmax off-mask: nearest visible centroid.
    int best_id = -1;
    double best_dist = std::numeric_limits<double>::max();
    for (const auto& view : obs.views) {
        const double du = view.centroid_u - best_x;
        const double dv = view.centroid_v - best_y;
        const double dist = std::sqrt(du * du + dv * dv);
        if (dist < best_dist) {
            best_dist = dist;
            best_id = view.id;
        }
    }
    if (best_id < 0) throw NoVisibleTarget("select_target: heatmap peak with no visible mask");
    return best_id;
}

StageState recovery_transition(const StageState& state, RecoveryTrigger trigger, const RecoveryParams& params,
                               double now) {
    StageState next = state;
    next.entered_at = now;
    if (trigger == RecoveryTrigger::MarginExcursion) {
        next.stage = params.backup_enabled ? Stage::RecoverBackup : state.stage;
        return next;
    }
    // Drag/grasp failure: regrasp consumes one retry.
    if (!params.regrasp_enabled || state.regrasp_count >= params.max_regrasps) {
        next.stage = Stage::Done;
        return next;
    }
    next.stage = Stage::RecoverRegrasp;
    next.regrasp_count = state.regrasp_count + 1;
    return next;
}

StagedController::StagedController(const ControllerConfig& cfg, int img_width, int img_height, uint64_t seed)
    : cfg_(cfg),
      refs_(cfg.resolve_references(img_width, img_height)),
      center_u_(img_width / 2.0),
      center_v_(img_height / 2.0),
      rng_(Rng::derive(seed, "controller")) {}

void StagedController::transition(Stage to, const std::string& reason, double t) {
    trace_.push_back({t, state_.stage, to, reason});
    state_.stage = to;
    state_.entered_at = t;
    entered_tick_ = tick_index_;
}

void StagedController::fail(FailureReason reason, double t) {
    failure_ = reason;
    succeeded_ = false;
    transition(Stage::Done, "failure: " + failure_reason_name(reason), t);
}

void StagedController::begin_recovery(RecoveryTrigger trigger, double t, FailureReason exhausted_reason) {
    if (trigger == RecoveryTrigger::DragFailed) {
        const StageState next = recovery_transition(state_, trigger, cfg_.recovery, t);
        if (next.stage == Stage::Done) {
            fail(exhausted_reason, t);
            return;
        }
        state_.regrasp_count = next.regrasp_count;
        const double mag = rng_.uniform(cfg_.recovery.lateral_min, cfg_.recovery.lateral_max);
        const double sign = rng_.bernoulli(0.5) ? 1.0 : -1.0;
        // Normalized sway command sized so the drawn offset distance is
        // covered over the backup interval at a nominal 0.3 m/s full-scale
        // sway speed (clipped to full scale).
        regrasp_lateral_cmd_ = std::clamp(sign * mag / (0.3 * cfg_.recovery.t_back), -1.0, 1.0);
        events_.push_back({t, "regrasp", Json{{"count", state_.regrasp_count}, {"lateral_cmd", regrasp_lateral_cmd_}}});
        transition(Stage::RecoverRegrasp, "grasp/drag failure", t);
        return;
    }
    if (cfg_.recovery.backup_enabled) {
        ++backup_count_;
        events_.push_back({t, "backup", Json{{"count", backup_count_}}});
        transition(Stage::RecoverBackup, "margin/loss-of-view", t);
    }
}

bool StagedController::reselect_target(const Observation& obs, const ImageF* heatmap, double t) {
    int new_target = -1;
    try {
        new_target = select_target(obs, cfg_.mode, heatmap, center_u_, center_v_);
    } catch (const NoVisibleTarget&) {
        return false;
    }
    if (first_target_id_ < 0) first_target_id_ = new_target;
    if (state_.target_id >= 0 && new_target != state_.target_id) {
        events_.push_back({t, "target_switch",
                           Json{{"from", state_.target_id},
                                {"to", new_target},
                                {"after_margin_excursion", margin_since_selection_}}});
    }
    state_.target_id = new_target;
    margin_since_selection_ = false;
    have_last_centroid_ = false;
    have_prev_fresh_ = false;
    yaw_pd_.reset();
    surge_pd_.reset();
    heave_pd_.reset();
    return true;
}

ActionCommand StagedController::tick(const Observation& obs, const ImageF* heatmap) {
    const double t = obs.timestamp;
    const double dt = cfg_.perception_period;
    const auto ticks_in_stage = [&] { return tick_index_ - entered_tick_; };
    const auto to_ticks = [&](double seconds) {
        return static_cast<int64_t>(std::llround(seconds / cfg_.perception_period));
    };

    ActionCommand cmd;
    info_ = TickInfo{};
    info_.stage = state_.stage;
    info_.target_id = state_.target_id;

    if (state_.stage == Stage::Done) {
        ++tick_index_;
        return cmd;
    }

    // Refresh the perceived target point, coasting on the last known value
    // through brief mask dropouts. Center-bias tracks the mask centroid;
    // affordance mode tracks the heatmap peak (the goal grasp pixel).
    const sim::ObjectView* view =
        state_.target_id >= 0 ? obs.view_of(state_.target_id) : nullptr;
    bool centroid_fresh = false;
    if (cfg_.mode == SelectMode::Affordance && heatmap != nullptr) {
        float best = 0.0f;
        int bx = -1, by = -1;
        for (int y = 0; y < heatmap->height; ++y)
            for (int x = 0; x < heatmap->width; ++x)
                if (heatmap->at(x, y) > best) {
                    best = heatmap->at(x, y);
                    bx = x;
                    by = y;
                }
        if (bx >= 0) {
            last_centroid_u_ = bx;
            last_centroid_v_ = by;
            have_last_centroid_ = true;
            last_seen_tick_ = tick_index_;
            centroid_fresh = true;
        }
    } else if (view != nullptr && view->pixel_count > 0) {
        last_centroid_u_ = view->centroid_u;
        last_centroid_v_ = view->centroid_v;
        have_last_centroid_ = true;
        last_seen_tick_ = tick_index_;
        centroid_fresh = true;
    }
    const bool coasting = !centroid_fresh && have_last_centroid_ &&
                          (tick_index_ - last_seen_tick_) <= to_ticks(cfg_.coast_duration);
    const bool centroid_known = centroid_fresh || coasting;
    info_.centroid_valid = centroid_known;
    info_.centroid_u = last_centroid_u_;
    info_.centroid_v = last_centroid_v_;
    if (view != nullptr) {
        info_.min_depth = view->min_depth;
        info_.min_depth_valid = true;
    }

    const bool servo_stage = state_.stage == Stage::YawAlign || state_.stage == Stage::ForwardApproach ||
                             state_.stage == Stage::DepthAdjust || state_.stage == Stage::CloseRange;

    // Loss-of-view handling: margin excursions first, then expired coasts.
    // "Approaches the margin" is rate-qualified: inside the margin band and
    // still moving toward that edge, so servo setpoints that legitimately sit
    // near a border do not retrigger recovery while hovering.
    if (servo_stage && centroid_fresh) {
        double du_dt = 0.0, dv_dt = 0.0;
        if (have_prev_fresh_) {
            const double gap = static_cast<double>(tick_index_ - prev_fresh_tick_) * dt;
            if (gap > 0.0) {
                du_dt = (last_centroid_u_ - prev_fresh_u_) / gap;
                dv_dt = (last_centroid_v_ - prev_fresh_v_) / gap;
            }
        }
        const double rate = cfg_.margin_rate_px_s;
        const bool near_margin =
            (last_centroid_u_ < refs_.margin_px && du_dt < -rate) ||
            (last_centroid_u_ > obs.labels.width - refs_.margin_px && du_dt > rate) ||
            (last_centroid_v_ < refs_.margin_px && dv_dt < -rate) ||
            (last_centroid_v_ > obs.labels.height - refs_.margin_px && dv_dt > rate);
        prev_fresh_u_ = last_centroid_u_;
        prev_fresh_v_ = last_centroid_v_;
        prev_fresh_tick_ = tick_index_;
        have_prev_fresh_ = true;
        if (near_margin) {
            if (!margin_since_selection_)
                events_.push_back({t, "margin_excursion",
                                   Json{{"u", last_centroid_u_}, {"v", last_centroid_v_}}});
            margin_since_selection_ = true;
            if (cfg_.recovery.backup_enabled) {
                begin_recovery(RecoveryTrigger::MarginExcursion, t, FailureReason::LossOfView);
                ++tick_index_;
                return cmd;
            }
        }
    }
    if (servo_stage && !centroid_known && state_.target_id >= 0) {
        events_.push_back({t, "mask_lost",
                           Json{{"target", state_.target_id},
                                {"others_visible", static_cast<int>(obs.views.size())}}});
        if (cfg_.recovery.backup_enabled) {
            begin_recovery(RecoveryTrigger::MarginExcursion, t, FailureReason::LossOfView);
        } else if (reselect_target(obs, heatmap, t)) {
            transition(Stage::YawAlign, "target lost, reselected", t);
        } else {
            fail(FailureReason::LossOfView, t);
        }
        ++tick_index_;
        return cmd;
    }

    // Stage timeouts route to backup (a long retreat resets the geometry).
    if (servo_stage && ticks_in_stage() >= to_ticks(cfg_.stage_timeout)) {
        events_.push_back({t, "stage_timeout", Json{{"stage", stage_name(state_.stage)}}});
        if (cfg_.recovery.backup_enabled) {
            begin_recovery(RecoveryTrigger::MarginExcursion, t, FailureReason::Timeout);
        } else {
            fail(FailureReason::Timeout, t);
        }
        ++tick_index_;
        return cmd;
    }

    // Yaw servoing stays active from alignment through grasp closure.
    const bool yaw_active = centroid_known && state_.stage != Stage::Reset &&
                            state_.stage != Stage::DragVerify && state_.stage != Stage::RecoverRegrasp &&
                            state_.stage != Stage::RecoverBackup;
    if (yaw_active) {
        cmd.yaw = yaw_step(last_centroid_u_, center_u_, yaw_pd_, cfg_.yaw, dt, cfg_.derivative_alpha);
        info_.error_u = center_u_ - last_centroid_u_;
        info_.yaw_d_filt = yaw_pd_.d_filt;
    }

    switch (state_.stage) {
        case Stage::Reset: {
            cmd.open = true;
            if (ticks_in_stage() >= to_ticks(cfg_.settle_duration)) {
                if (reselect_target(obs, heatmap, t))
                    transition(Stage::YawAlign, "target selected", t);
                else
                    fail(FailureReason::NoVisibleTarget, t);
            }
            break;
        }
        case Stage::YawAlign: {
            if (centroid_known && std::abs(center_u_ - last_centroid_u_) <= cfg_.yaw_done_px)
                transition(Stage::ForwardApproach, "yaw aligned", t);
            break;
        }
        case Stage::ForwardApproach: {
            if (centroid_known) {
                const auto [surge, done] =
                    forward_step(last_centroid_v_, refs_, surge_pd_, cfg_.surge, dt, cfg_.derivative_alpha);
                cmd.forward = surge;
                info_.error_v = refs_.lower_line_v - last_centroid_v_;
                if (done) transition(Stage::DepthAdjust, "reached lower reference line", t);
            }
            break;
        }
        case Stage::DepthAdjust: {
            if (centroid_known) {
                const auto [heave, done] =
                    depth_step(last_centroid_v_, refs_, heave_pd_, cfg_.heave, dt, cfg_.derivative_alpha);
                cmd.vertical = heave;
                info_.error_v = 0.5 * (refs_.band_lo_v + refs_.band_hi_v) - last_centroid_v_;
                if (done) transition(Stage::CloseRange, "centroid inside band", t);
            }
            break;
        }
        case Stage::CloseRange: {
            try {
                const auto [surge, trigger] = close_range_step(obs, state_.target_id, refs_, cfg_.creep_cmd);
                cmd.forward = surge;
                if (trigger) {
                    cmd.forward = 0.0;
                    cmd.close = true;
                    transition(Stage::Grasp, "grasp depth reached", t);
                }
            } catch (const TargetDepthUnavailable&) {
                // Coasting: keep creeping until the loss handling above fires.
                cmd.forward = cfg_.creep_cmd;
            }
            break;
        }
        case Stage::Grasp: {
            cmd.close = true;
            if (obs.gripper_aperture <= cfg_.closed_aperture) {
                if (obs.held_object.has_value()) {
                    events_.push_back({t, "captured", Json{{"object", *obs.held_object}}});
                    transition(Stage::DragVerify, "gripper closed on object", t);
                } else {
                    begin_recovery(RecoveryTrigger::DragFailed, t, FailureReason::GraspMissed);
                }
            }
            break;
        }
        case Stage::DragVerify: {
            cmd.forward = -cfg_.drag_cmd;
            if (!obs.held_object.has_value()) {
                events_.push_back({t, "slipped", Json::object()});
                begin_recovery(RecoveryTrigger::DragFailed, t, FailureReason::Slipped);
                break;
            }
            if (ticks_in_stage() >= to_ticks(cfg_.drag_duration)) {
                succeeded_ = true;
                transition(Stage::Done, "drag verification complete", t);
            }
            break;
        }
        case Stage::RecoverRegrasp: {
            cmd.open = true;
            cmd.forward = -cfg_.recovery.back_cmd;
            cmd.lateral = regrasp_lateral_cmd_;
            // Retreat also re-ascends toward the reset vantage so the retry
            // runs the same approach geometry as a fresh episode.
            if (obs.proprio.vehicle_depth > cfg_.recovery.recover_depth) cmd.vertical = cfg_.recovery.rise_cmd;
            if (ticks_in_stage() >= to_ticks(cfg_.recovery.t_back)) {
                if (reselect_target(obs, heatmap, t))
                    transition(Stage::YawAlign, "regrasp retry", t);
                else if (cfg_.recovery.backup_enabled)
                    begin_recovery(RecoveryTrigger::MarginExcursion, t, FailureReason::LossOfView);
                else
                    fail(FailureReason::LossOfView, t);
            }
            break;
        }
        case Stage::RecoverBackup: {
            cmd.forward = -cfg_.recovery.retreat_cmd;
            if (obs.proprio.vehicle_depth > cfg_.recovery.recover_depth) cmd.vertical = cfg_.recovery.rise_cmd;
            if (ticks_in_stage() >= to_ticks(cfg_.recovery.t_retreat)) {
                if (reselect_target(obs, heatmap, t))
                    transition(Stage::YawAlign, "backup reacquired", t);
                else
                    fail(FailureReason::LossOfView, t);
            }
            break;
        }
        case Stage::Done:
            break;
    }

    cmd.yaw = std::clamp(cmd.yaw, -1.0, 1.0);
    cmd.forward = std::clamp(cmd.forward, -1.0, 1.0);
    cmd.vertical = std::clamp(cmd.vertical, -1.0, 1.0);
    cmd.lateral = std::clamp(cmd.lateral, -1.0, 1.0);
    ++tick_index_;
    return cmd;
}

ControllerConfig controller_from_json(const Json& j, const std::string& context) {
    ControllerConfig cfg;
    const auto gains = [&](const char* key, PdGains fallback) {
        if (!j.contains(key)) return fallback;
        const Json& g = j[key];
        const std::string c = context + "." + key;
        PdGains out = fallback;
        out.kp = get_or<double>(g, "kp", fallback.kp, c);
        out.kd = get_or<double>(g, "kd", fallback.kd, c);
        out.deadband = get_or<double>(g, "deadband", fallback.deadband, c);
        out.clip = get_or<double>(g, "clip", fallback.clip, c);
        if (out.kp < 0.0 || out.kd < 0.0 || out.deadband < 0.0)
            throw ConfigError(c + ": gains and deadband must be non-negative");
        return out;
    };
    cfg.yaw = gains("yaw", cfg.yaw);
    cfg.surge = gains("surge", cfg.surge);
    cfg.heave = gains("heave", cfg.heave);
    cfg.lower_line_frac = get_or<double>(j, "lower_line_frac", cfg.lower_line_frac, context);
    cfg.band_lo_frac = get_or<double>(j, "band_lo_frac", cfg.band_lo_frac, context);
    cfg.band_hi_frac = get_or<double>(j, "band_hi_frac", cfg.band_hi_frac, context);
    cfg.affordance_band_shift = get_or<double>(j, "affordance_band_shift", cfg.affordance_band_shift, context);
    cfg.margin_px = get_or<double>(j, "margin_px", cfg.margin_px, context);
    cfg.margin_rate_px_s = get_or<double>(j, "margin_rate_px_s", cfg.margin_rate_px_s, context);
    cfg.close_range_depth = get_or<double>(j, "close_range_depth", cfg.close_range_depth, context);
    cfg.grasp_depth = get_or<double>(j, "grasp_depth", cfg.grasp_depth, context);
    cfg.yaw_done_px = get_or<double>(j, "yaw_done_px", cfg.yaw_done_px, context);
    cfg.creep_cmd = get_or<double>(j, "creep_cmd", cfg.creep_cmd, context);
    cfg.drag_cmd = get_or<double>(j, "drag_cmd", cfg.drag_cmd, context);
    cfg.drag_duration = get_or<double>(j, "drag_duration", cfg.drag_duration, context);
    cfg.settle_duration = get_or<double>(j, "settle_duration", cfg.settle_duration, context);
    cfg.stage_timeout = get_or<double>(j, "stage_timeout", cfg.stage_timeout, context);
    cfg.coast_duration = get_or<double>(j, "coast_duration", cfg.coast_duration, context);
    cfg.closed_aperture = get_or<double>(j, "closed_aperture", cfg.closed_aperture, context);
    cfg.derivative_alpha = get_or<double>(j, "derivative_alpha", cfg.derivative_alpha, context);
    cfg.perception_period = get_or<double>(j, "perception_period", cfg.perception_period, context);
    cfg.heatmap_sigma = get_or<double>(j, "heatmap_sigma", cfg.heatmap_sigma, context);
    if (j.contains("recovery")) {
        const Json& r = j["recovery"];
        const std::string c = context + ".recovery";
        cfg.recovery.regrasp_enabled = get_or<bool>(r, "regrasp_enabled", cfg.recovery.regrasp_enabled, c);
        cfg.recovery.backup_enabled = get_or<bool>(r, "backup_enabled", cfg.recovery.backup_enabled, c);
        cfg.recovery.t_back = get_or<double>(r, "t_back", cfg.recovery.t_back, c);
        cfg.recovery.t_retreat = get_or<double>(r, "t_retreat", cfg.recovery.t_retreat, c);
        cfg.recovery.back_cmd = get_or<double>(r, "back_cmd", cfg.recovery.back_cmd, c);
        cfg.recovery.retreat_cmd = get_or<double>(r, "retreat_cmd", cfg.recovery.retreat_cmd, c);
        cfg.recovery.lateral_min = get_or<double>(r, "lateral_min", cfg.recovery.lateral_min, c);
        cfg.recovery.lateral_max = get_or<double>(r, "lateral_max", cfg.recovery.lateral_max, c);
        cfg.recovery.max_regrasps = get_or<int>(r, "max_regrasps", cfg.recovery.max_regrasps, c);
        cfg.recovery.recover_depth = get_or<double>(r, "recover_depth", cfg.recovery.recover_depth, c);
        cfg.recovery.rise_cmd = get_or<double>(r, "rise_cmd", cfg.recovery.rise_cmd, c);
        if (cfg.recovery.t_retreat <= cfg.recovery.t_back)
            throw ConfigError(c + ": t_retreat must exceed t_back");
    }
    if (j.contains("mode")) {
        const auto mode = get_as<std::string>(j, "mode", context);
        if (mode == "center_bias")
            cfg.mode = SelectMode::CenterBias;
        else if (mode == "affordance")
            cfg.mode = SelectMode::Affordance;
        else
            throw ConfigError(context + ": key 'mode' must be 'center_bias' or 'affordance'");
    }
    return cfg;
}

Json controller_to_json(const ControllerConfig& cfg) {
    const auto gains = [](const PdGains& g) {
        return Json{{"kp", g.kp}, {"kd", g.kd}, {"deadband", g.deadband}, {"clip", g.clip}};
    };
    return Json{
        {"yaw", gains(cfg.yaw)},
        {"surge", gains(cfg.surge)},
        {"heave", gains(cfg.heave)},
        {"lower_line_frac", cfg.lower_line_frac},
        {"band_lo_frac", cfg.band_lo_frac},
        {"band_hi_frac", cfg.band_hi_frac},
        {"affordance_band_shift", cfg.affordance_band_shift},
        {"margin_px", cfg.margin_px},
        {"margin_rate_px_s", cfg.margin_rate_px_s},
        {"close_range_depth", cfg.close_range_depth},
        {"grasp_depth", cfg.grasp_depth},
        {"yaw_done_px", cfg.yaw_done_px},
        {"creep_cmd", cfg.creep_cmd},
        {"drag_cmd", cfg.drag_cmd},
        {"drag_duration", cfg.drag_duration},
        {"settle_duration", cfg.settle_duration},
        {"stage_timeout", cfg.stage_timeout},
        {"coast_duration", cfg.coast_duration},
        {"closed_aperture", cfg.closed_aperture},
        {"derivative_alpha", cfg.derivative_alpha},
        {"perception_period", cfg.perception_period},
        {"heatmap_sigma", cfg.heatmap_sigma},
        {"recovery",
         {{"regrasp_enabled", cfg.recovery.regrasp_enabled},
          {"backup_enabled", cfg.recovery.backup_enabled},
          {"t_back", cfg.recovery.t_back},
          {"t_retreat", cfg.recovery.t_retreat},
          {"back_cmd", cfg.recovery.back_cmd},
          {"retreat_cmd", cfg.recovery.retreat_cmd},
          {"lateral_min", cfg.recovery.lateral_min},
          {"lateral_max", cfg.recovery.lateral_max},
          {"max_regrasps", cfg.recovery.max_regrasps},
          {"recover_depth", cfg.recovery.recover_depth},
          {"rise_cmd", cfg.recovery.rise_cmd}}},
        {"mode", cfg.mode == SelectMode::CenterBias ? "center_bias" : "affordance"}};
}

}  // namespace aqua::ctl
