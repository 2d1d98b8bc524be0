#include "aquagrasp/record.hpp"

#include <filesystem>
#include <fstream>

namespace aqua::harness {

std::vector<std::pair<double, double>> EpisodeRecord::width_signal() const {
    std::vector<std::pair<double, double>> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.emplace_back(f.t, f.gripper_aperture);
    return out;
}

namespace {

Json frame_to_json(const FrameRecord& f) {
    Json tracks = Json::array();
    for (const auto& tr : f.tracks)
        tracks.push_back(Json{{"id", tr.id}, {"u", tr.u}, {"v", tr.v}, {"visible", tr.visible}});
    Json poses = Json::array();
    for (const auto& p : f.object_poses)
        poses.push_back(Json{{"id", p.id}, {"x", p.x}, {"y", p.y}, {"z", p.z}, {"yaw", p.yaw}});
    Json j{{"t", f.t},
           {"stage", f.stage},
           {"action", f.action},
           {"compass", f.compass},
           {"pitch", f.pitch},
           {"vehicle_depth", f.vehicle_depth},
           {"aperture", f.gripper_aperture},
           {"target_id", f.target_id},
           {"centroid_valid", f.centroid_valid},
           {"centroid_u", f.centroid_u},
           {"centroid_v", f.centroid_v},
           {"error_u", f.error_u},
           {"error_v", f.error_v},
           {"yaw_d_filt", f.yaw_d_filt},
           {"min_depth", f.min_depth},
           {"min_depth_valid", f.min_depth_valid},
           {"rov_pose", f.rov_pose},
           {"object_poses", poses},
           {"tracks", tracks}};
    if (f.held_object) j["held"] = *f.held_object;
    if (!f.depth_ref.empty()) j["depth_ref"] = f.depth_ref;
    if (!f.mask_ref.empty()) j["mask_ref"] = f.mask_ref;
    return j;
}

FrameRecord frame_from_json(const Json& j, const std::string& context) {
    FrameRecord f;
    f.t = get_as<double>(j, "t", context);
    f.stage = get_as<std::string>(j, "stage", context);
    const auto action = get_as<std::vector<double>>(j, "action", context);
    if (action.size() != 6) throw ConfigError(context + ": key 'action' must hold 6 values");
    std::copy(action.begin(), action.end(), f.action.begin());
    f.compass = get_as<double>(j, "compass", context);
    f.pitch = get_as<double>(j, "pitch", context);
    f.vehicle_depth = get_as<double>(j, "vehicle_depth", context);
    f.gripper_aperture = get_as<double>(j, "aperture", context);
    if (j.contains("held")) f.held_object = get_as<int>(j, "held", context);
    f.target_id = get_as<int>(j, "target_id", context);
    f.centroid_valid = get_as<bool>(j, "centroid_valid", context);
    f.centroid_u = get_as<double>(j, "centroid_u", context);
    f.centroid_v = get_as<double>(j, "centroid_v", context);
    f.error_u = get_as<double>(j, "error_u", context);
    f.error_v = get_as<double>(j, "error_v", context);
    f.yaw_d_filt = get_as<double>(j, "yaw_d_filt", context);
    f.min_depth = get_as<double>(j, "min_depth", context);
    f.min_depth_valid = get_as<bool>(j, "min_depth_valid", context);
    const auto rp = get_as<std::vector<double>>(j, "rov_pose", context);
    if (rp.size() != 4) throw ConfigError(context + ": key 'rov_pose' must hold 4 values");
    std::copy(rp.begin(), rp.end(), f.rov_pose.begin());
    for (const auto& jp : require_key(j, "object_poses", context)) {
        ObjectPoseRecord p;
        p.id = get_as<int>(jp, "id", context);
        p.x = get_as<double>(jp, "x", context);
        p.y = get_as<double>(jp, "y", context);
        p.z = get_as<double>(jp, "z", context);
        p.yaw = get_as<double>(jp, "yaw", context);
        f.object_poses.push_back(p);
    }
    for (const auto& jt : require_key(j, "tracks", context)) {
        ObjectTrackRecord tr;
        tr.id = get_as<int>(jt, "id", context);
        tr.u = get_as<double>(jt, "u", context);
        tr.v = get_as<double>(jt, "v", context);
        tr.visible = get_as<bool>(jt, "visible", context);
        f.tracks.push_back(tr);
    }
    f.depth_ref = get_or<std::string>(j, "depth_ref", "", context);
    f.mask_ref = get_or<std::string>(j, "mask_ref", "", context);
    return f;
}

}  // namespace

Json episode_to_json(const EpisodeRecord& rec) {
    Json frames = Json::array();
    for (const auto& f : rec.frames) frames.push_back(frame_to_json(f));
    Json events = Json::array();
    for (const auto& e : rec.events) events.push_back(Json{{"t", e.t}, {"kind", e.kind}, {"data", e.data}});
    Json trace = Json::array();
    for (const auto& tr : rec.stage_trace)
        trace.push_back(Json{{"t", tr.t}, {"from", tr.from}, {"to", tr.to}, {"reason", tr.reason}});
    return Json{{"episode_id", rec.episode_id},
                {"seed", rec.seed},
                {"scenario", rec.scenario_name},
                {"mode", rec.mode},
                {"success", rec.success},
                {"failure_reason", rec.failure_reason},
                {"duration", rec.duration},
                {"first_target", rec.first_target},
                {"goal_target", rec.goal_target},
                {"grasped_object", rec.grasped_object},
                {"regrasp_count", rec.regrasp_count},
                {"backup_count", rec.backup_count},
                {"scenario_cfg", rec.scenario_cfg},
                {"controller_cfg", rec.controller_cfg},
                {"frames", frames},
                {"events", events},
                {"stage_trace", trace}};
}

EpisodeRecord episode_from_json(const Json& j, const std::string& context) {
    EpisodeRecord rec;
    rec.episode_id = get_as<int64_t>(j, "episode_id", context);
    rec.seed = get_as<uint64_t>(j, "seed", context);
    rec.scenario_name = get_as<std::string>(j, "scenario", context);
    rec.mode = get_as<std::string>(j, "mode", context);
    rec.success = get_as<bool>(j, "success", context);
    rec.failure_reason = get_as<std::string>(j, "failure_reason", context);
    rec.duration = get_as<double>(j, "duration", context);
    rec.first_target = get_as<int>(j, "first_target", context);
    rec.goal_target = get_as<int>(j, "goal_target", context);
    rec.grasped_object = get_as<int>(j, "grasped_object", context);
    rec.regrasp_count = get_as<int>(j, "regrasp_count", context);
    rec.backup_count = get_as<int>(j, "backup_count", context);
    rec.scenario_cfg = require_key(j, "scenario_cfg", context);
    rec.controller_cfg = require_key(j, "controller_cfg", context);
    for (const auto& jf : require_key(j, "frames", context)) rec.frames.push_back(frame_from_json(jf, context));
    for (const auto& je : require_key(j, "events", context)) {
        EventRecord e;
        e.t = get_as<double>(je, "t", context);
        e.kind = get_as<std::string>(je, "kind", context);
        e.data = je.contains("data") ? je["data"] : Json::object();
        rec.events.push_back(e);
    }
    for (const auto& jt : require_key(j, "stage_trace", context)) {
        TransitionRecord tr;
        tr.t = get_as<double>(jt, "t", context);
        tr.from = get_as<std::string>(jt, "from", context);
        tr.to = get_as<std::string>(jt, "to", context);
        tr.reason = get_as<std::string>(jt, "reason", context);
        rec.stage_trace.push_back(tr);
    }
    return rec;
}

void save_episode(const std::string& dir, const EpisodeRecord& rec) {
    std::filesystem::create_directories(dir);
    save_json_file(dir + "/record.json", episode_to_json(rec));
    // Stage-trace log: one transition per line for replay tooling.
    std::ofstream trace(dir + "/stage_trace.jsonl");
    if (!trace) throw IoError("cannot open '" + dir + "/stage_trace.jsonl' for writing");
    for (const auto& tr : rec.stage_trace)
        trace << Json{{"t", tr.t}, {"from", tr.from}, {"to", tr.to}, {"reason", tr.reason}}.dump()
              << "\n";
}

EpisodeRecord load_episode(const std::string& dir) {
    return episode_from_json(load_json_file(dir + "/record.json"), dir + "/record.json");
}

}  // namespace aqua::harness
