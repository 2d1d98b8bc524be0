#include "aquagrasp/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "aquagrasp/io.hpp"

namespace aqua::harness {

namespace fs = std::filesystem;

void CampaignSpec::validate() const {
    if (n_episodes < 1) throw ConfigError("campaign: n_episodes must be >= 1");
    if (jobs < 1) throw ConfigError("campaign: jobs must be >= 1");
    if (episode_cap <= 0.0) throw ConfigError("campaign: episode_cap must be positive");
}

CampaignSpec campaign_from_json(const Json& j, const std::string& context) {
    CampaignSpec spec;
    spec.n_episodes = get_or<int>(j, "n_episodes", spec.n_episodes, context);
    spec.scenario_name = get_or<std::string>(j, "scenario_name", spec.scenario_name, context);
    if (j.contains("scenario_path")) {
        const auto path = get_as<std::string>(j, "scenario_path", context);
        spec.scenario = sim::scenario_from_json(load_json_file(path), path);
    } else if (j.contains("scenario")) {
        spec.scenario = sim::scenario_from_json(j["scenario"], context + ".scenario");
    } else {
        throw ConfigError(context + ": missing key 'scenario' (or 'scenario_path')");
    }
    if (j.contains("controller_path")) {
        const auto path = get_as<std::string>(j, "controller_path", context);
        spec.controller = ctl::controller_from_json(load_json_file(path), path);
    } else if (j.contains("controller")) {
        spec.controller = ctl::controller_from_json(j["controller"], context + ".controller");
    }
    if (j.contains("toggles")) {
        const Json& t = j["toggles"];
        const std::string c = context + ".toggles";
        spec.controller.recovery.regrasp_enabled =
            get_or<bool>(t, "regrasp_enabled", spec.controller.recovery.regrasp_enabled, c);
        spec.controller.recovery.backup_enabled =
            get_or<bool>(t, "backup_enabled", spec.controller.recovery.backup_enabled, c);
        if (t.contains("mode")) {
            const auto mode = get_as<std::string>(t, "mode", c);
            if (mode == "center_bias")
                spec.controller.mode = ctl::SelectMode::CenterBias;
            else if (mode == "affordance")
                spec.controller.mode = ctl::SelectMode::Affordance;
            else
                throw ConfigError(c + ": key 'mode' must be 'center_bias' or 'affordance'");
        }
    }
    spec.seed_base = get_or<uint64_t>(j, "seed_base", spec.seed_base, context);
    spec.out_dir = get_or<std::string>(j, "out_dir", spec.out_dir, context);
    spec.save_frames = get_or<bool>(j, "save_frames", spec.save_frames, context);
    spec.jobs = get_or<int>(j, "jobs", spec.jobs, context);
    spec.episode_cap = get_or<double>(j, "episode_cap", spec.episode_cap, context);
    if (j.contains("goal_rule")) {
        const auto rule = get_as<std::string>(j, "goal_rule", context);
        if (rule == "center")
            spec.goal_rule = GoalRule::Center;
        else if (rule == "off_center")
            spec.goal_rule = GoalRule::OffCenter;
        else if (rule.rfind("index:", 0) == 0) {
            spec.goal_rule = GoalRule::Index;
            spec.goal_index = std::stoi(rule.substr(6));
        } else
            throw ConfigError(context + ": key 'goal_rule' must be 'center', 'off_center', or 'index:<k>'");
    }
    spec.validate();
    return spec;
}

Json campaign_to_json(const CampaignSpec& spec) {
    std::string rule = "center";
    if (spec.goal_rule == GoalRule::OffCenter) rule = "off_center";
    if (spec.goal_rule == GoalRule::Index) rule = "index:" + std::to_string(spec.goal_index);
    return Json{{"n_episodes", spec.n_episodes},
                {"scenario_name", spec.scenario_name},
                {"scenario", sim::scenario_to_json(spec.scenario)},
                {"controller", ctl::controller_to_json(spec.controller)},
                {"seed_base", spec.seed_base},
                {"out_dir", spec.out_dir},
                {"save_frames", spec.save_frames},
                {"jobs", spec.jobs},
                {"episode_cap", spec.episode_cap},
                {"goal_rule", rule}};
}

CampaignSpec load_campaign_spec(const std::string& path) {
    try {
        return campaign_from_json(load_json_file(path), path);
    } catch (const IoError& e) {
        // An unreadable spec path is a configuration problem for callers.
        throw ConfigError(e.what());
    }
}

namespace {

int pick_goal(const sim::Observation& obs, GoalRule rule, int goal_index, double center_u, double center_v) {
    if (rule == GoalRule::Index) return goal_index;
    int best = -1;
    double best_metric = rule == GoalRule::Center ? std::numeric_limits<double>::max() : -1.0;
    for (const auto& view : obs.views) {
        const double du = view.centroid_u - center_u;
        const double dv = view.centroid_v - center_v;
        const double dist = std::sqrt(du * du + dv * dv);
        const bool better = rule == GoalRule::Center ? dist < best_metric : dist > best_metric;
        if (better) {
            best_metric = dist;
            best = view.id;
        }
    }
    return best;
}

}  // namespace

EpisodeRecord run_episode(const CampaignSpec& spec, int64_t episode_id, uint64_t seed) {
    const sim::ScenarioConfig& scenario = spec.scenario;
    const ctl::ControllerConfig& cfg = spec.controller;
    const double dt = 0.01;
    const int steps_per_tick = static_cast<int>(std::llround(cfg.perception_period / dt));
    const auto max_steps = static_cast<int64_t>(std::llround(spec.episode_cap / dt));

    EpisodeRecord rec;
    rec.episode_id = episode_id;
    rec.seed = seed;
    rec.scenario_name = spec.scenario_name;
    rec.mode = cfg.mode == ctl::SelectMode::CenterBias ? "center_bias" : "affordance";
    rec.scenario_cfg = sim::scenario_to_json(scenario);
    rec.controller_cfg = ctl::controller_to_json(cfg);

    const std::string ep_dir =
        spec.out_dir.empty() ? "" : spec.out_dir + "/episode_" + std::to_string(episode_id);
    const auto persist = [&] {
        if (!ep_dir.empty()) save_episode(ep_dir, rec);
    };

    Rng world_rng = Rng::derive(seed, "world");
    Rng slip_rng = Rng::derive(seed, "slip");
    Rng noise_rng = Rng::derive(seed, "noise");

    sim::PoolWorld world;
    sim::RovState rov;
    try {
        sim::scatter_reset(world, rov, world_rng, scenario);
    } catch (const PlacementFailure& e) {
        rec.success = false;
        rec.failure_reason = ctl::failure_reason_name(ctl::FailureReason::SimFault);
        rec.events.push_back({0.0, "sim_fault", Json{{"what", e.what()}}});
        persist();
        return rec;
    }

    const CameraModel cam = scenario.forward_camera();
    ctl::StagedController controller(cfg, cam.width, cam.height, seed);
    sim::RenderOptions render_opts;
    render_opts.depth_noise_sigma = scenario.depth_noise_sigma;

    if (!ep_dir.empty() && spec.save_frames) fs::create_directories(ep_dir + "/frames");

    sim::ActionCommand latched;
    bool capture_attempted = false;
    bool sim_fault = false;
    int goal_target = -1;

    for (int64_t k = 0; k < max_steps; ++k) {
        if (k % steps_per_tick == 0) {
            const sim::Observation obs =
                sim::render(world, rov, scenario, sim::CameraId::Forward, &noise_rng, render_opts);
            if (k == 0) {
                goal_target = pick_goal(obs, spec.goal_rule, spec.goal_index, cam.cx, cam.cy);
                rec.goal_target = goal_target;
            }
            ImageF heatmap;
            const ImageF* hm = nullptr;
            if (cfg.mode == ctl::SelectMode::Affordance) {
                heatmap = goal_target >= 0 ? label::oracle_heatmap(obs, goal_target, cfg.heatmap_sigma)
                                           : ImageF(cam.width, cam.height, 0.0f);
                hm = &heatmap;
            }
            latched = controller.tick(obs, hm);
            const ctl::TickInfo& info = controller.last_tick_info();

            FrameRecord frame;
            frame.t = obs.timestamp;
            frame.stage = ctl::stage_name(info.stage);
            frame.action = latched.as_vector();
            frame.compass = obs.proprio.compass;
            frame.pitch = obs.proprio.pitch;
            frame.vehicle_depth = obs.proprio.vehicle_depth;
            frame.gripper_aperture = obs.gripper_aperture;
            frame.held_object = obs.held_object;
            frame.target_id = info.target_id;
            frame.centroid_valid = info.centroid_valid;
            frame.centroid_u = info.centroid_u;
            frame.centroid_v = info.centroid_v;
            frame.error_u = info.error_u;
            frame.error_v = info.error_v;
            frame.yaw_d_filt = info.yaw_d_filt;
            frame.min_depth = info.min_depth;
            frame.min_depth_valid = info.min_depth_valid;
            frame.rov_pose = {rov.position.x(), rov.position.y(), rov.position.z(), rov.yaw};
            for (const auto& obj : world.objects) {
                frame.object_poses.push_back(
                    {obj.id, obj.position.x(), obj.position.y(), obj.position.z(), obj.yaw});
                const auto it = obs.tracks.find(obj.id);
                if (it != obs.tracks.end())
                    frame.tracks.push_back({obj.id, it->second.u, it->second.v, it->second.visible});
            }
            if (!ep_dir.empty() && spec.save_frames) {
                char name[64];
                std::snprintf(name, sizeof(name), "frames/depth_%06lld.bin",
                              static_cast<long long>(k / steps_per_tick));
                frame.depth_ref = name;
                write_float_frame(ep_dir + "/" + frame.depth_ref, obs.depth,
                                  Json{{"units", "m"}, {"timestamp", obs.timestamp}});
                std::snprintf(name, sizeof(name), "frames/mask_%06lld.png",
                              static_cast<long long>(k / steps_per_tick));
                frame.mask_ref = name;
                write_png_gray8(ep_dir + "/" + frame.mask_ref, obs.labels);
            }
            rec.frames.push_back(std::move(frame));
            if (controller.done()) break;
        }

        try {
            sim::step(world, rov, latched, dt, scenario.dynamics, scenario.mounts, slip_rng);
        } catch (const SimFault& e) {
            rec.events.push_back({world.time, "sim_fault", Json{{"what", e.what()}}});
            sim_fault = true;
            break;
        }

        // Grasp glue: one capture attempt per closure completion.
        if (latched.close && !rov.held_object && !capture_attempted &&
            rov.gripper_aperture <= cfg.closed_aperture) {
            const sim::GraspOutcome outcome = sim::attempt_grasp(world, rov, scenario.mounts);
            capture_attempted = true;
            if (outcome.captured) rec.grasped_object = outcome.object_id;
        }
        if (rov.gripper_aperture > 0.5) capture_attempted = false;
    }

    rec.duration = world.time;
    rec.regrasp_count = controller.regrasp_count();
    rec.backup_count = controller.backup_count();
    rec.first_target = controller.first_target_id();
    for (const auto& e : controller.events()) rec.events.push_back({e.t, e.kind, e.data});
    for (const auto& tr : controller.trace())
        rec.stage_trace.push_back({tr.t, ctl::stage_name(tr.from), ctl::stage_name(tr.to), tr.reason});

    if (sim_fault) {
        rec.success = false;
        rec.failure_reason = ctl::failure_reason_name(ctl::FailureReason::SimFault);
    } else if (!controller.done()) {
        rec.success = false;
        rec.failure_reason = ctl::failure_reason_name(ctl::FailureReason::Timeout);
    } else {
        rec.success = controller.succeeded();
        rec.failure_reason = ctl::failure_reason_name(controller.failure());
    }

    persist();
    return rec;
}

CampaignReport aggregate_report(const std::vector<EpisodeRecord>& records) {
    CampaignReport report;
    report.n_episodes = static_cast<int>(records.size());
    double total_duration = 0.0;
    int64_t regrasps = 0, backups = 0;
    for (const auto& rec : records) {
        total_duration += rec.duration;
        regrasps += rec.regrasp_count;
        backups += rec.backup_count;
        if (rec.success) {
            ++report.successes;
            if (rec.goal_target >= 0 && rec.grasped_object != rec.goal_target) ++report.wrong_target_grasps;
        } else {
            ++report.failure_counts[rec.failure_reason];
            if (rec.failure_reason == "LossOfView") ++report.loss_of_view_count;
        }
        bool margin = false;
        for (const auto& e : rec.events)
            if (e.kind == "margin_excursion") margin = true;
        if (margin) ++report.margin_excursion_count;
        // Overshoot-induced target switch: a margin excursion occurred and
        // the episode ended up grasping something other than the object the
        // pipeline originally selected.
        if (margin && rec.grasped_object >= 0 && rec.first_target >= 0 &&
            rec.grasped_object != rec.first_target)
            ++report.target_switch_count;
    }
    if (report.n_episodes > 0) {
        report.success_rate = static_cast<double>(report.successes) / report.n_episodes;
        report.mean_duration = total_duration / report.n_episodes;
        report.regrasps_per_episode = static_cast<double>(regrasps) / report.n_episodes;
        report.backups_per_episode = static_cast<double>(backups) / report.n_episodes;
    }
    report.target_fidelity =
        report.successes > 0
            ? 1.0 - static_cast<double>(report.wrong_target_grasps) / report.successes
            : 1.0;
    return report;
}

Json report_to_json(const CampaignReport& r) {
    Json failures = Json::object();
    for (const auto& [reason, count] : r.failure_counts) failures[reason] = count;
    return Json{{"n_episodes", r.n_episodes},
                {"successes", r.successes},
                {"success_rate", r.success_rate},
                {"mean_duration", r.mean_duration},
                {"failure_counts", failures},
                {"regrasps_per_episode", r.regrasps_per_episode},
                {"backups_per_episode", r.backups_per_episode},
                {"loss_of_view_count", r.loss_of_view_count},
                {"margin_excursion_count", r.margin_excursion_count},
                {"target_switch_count", r.target_switch_count},
                {"wrong_target_grasps", r.wrong_target_grasps},
                {"target_fidelity", r.target_fidelity}};
}

std::string report_summary(const CampaignReport& r) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "episodes: %d\nsuccesses: %d (%.1f%%)\nmean duration: %.1f s\n"
                  "regrasps/episode: %.2f\nbackups/episode: %.2f\ntarget fidelity: %.3f\n",
                  r.n_episodes, r.successes, 100.0 * r.success_rate, r.mean_duration,
                  r.regrasps_per_episode, r.backups_per_episode, r.target_fidelity);
    std::string out(buf);
    out += "failures:\n";
    for (const auto& [reason, count] : r.failure_counts)
        out += "  " + reason + ": " + std::to_string(count) + "\n";
    return out;
}

CampaignReport run_campaign(const CampaignSpec& spec) {
    spec.validate();
    if (!spec.out_dir.empty()) fs::create_directories(spec.out_dir);

    std::vector<EpisodeRecord> records(static_cast<size_t>(spec.n_episodes));
    std::atomic<int> next{0};
    const int workers = std::max(1, std::min(spec.jobs, spec.n_episodes));
    const auto work = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= spec.n_episodes) return;
            records[static_cast<size_t>(i)] = run_episode(spec, i, spec.seed_base + static_cast<uint64_t>(i));
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    const CampaignReport report = aggregate_report(records);
    if (!spec.out_dir.empty()) {
        save_json_file(spec.out_dir + "/report.json", report_to_json(report));
        std::ofstream txt(spec.out_dir + "/report.txt");
        txt << report_summary(report);

        // Successful-subset manifest (the behavior-cloning set).
        Json episodes = Json::array();
        for (const auto& rec : records) {
            if (!rec.success) continue;
            Json entry{{"id", rec.episode_id}, {"seed", rec.seed}};
            const std::string dir = "episode_" + std::to_string(rec.episode_id);
            if (fs::exists(spec.out_dir + "/" + dir + "/record.json")) {
                entry["dir"] = dir;
                entry["checksum"] = fnv1a64_file(spec.out_dir + "/" + dir + "/record.json");
            }
            episodes.push_back(entry);
        }
        save_json_file(spec.out_dir + "/successes.manifest",
                       Json{{"count", report.successes}, {"episodes", episodes}});
    }
    return report;
}

int replay(const std::string& record_dir, const std::string& out_dir) {
    if (!fs::exists(record_dir + "/record.json"))
        throw MissingFrameData("replay: no record.json under '" + record_dir + "'");
    const EpisodeRecord rec = load_episode(record_dir);
    fs::create_directories(out_dir);

    std::ofstream csv(out_dir + "/errors.csv");
    if (!csv) throw IoError("cannot open '" + out_dir + "/errors.csv' for writing");
    csv << "t,stage,target_id,centroid_valid,centroid_u,centroid_v,error_u,error_v,yaw_d_filt,"
           "min_depth,action_yaw,action_forward,action_vertical,action_lateral,action_open,action_close\n";
    char line[512];
    for (const auto& f : rec.frames) {
        std::snprintf(line, sizeof(line),
                      "%.6f,%s,%d,%d,%.6f,%.6f,%.6f,%.6f,%.10g,%.6f,%.10g,%.10g,%.10g,%.10g,%g,%g\n",
                      f.t, f.stage.c_str(), f.target_id, f.centroid_valid ? 1 : 0, f.centroid_u,
                      f.centroid_v, f.error_u, f.error_v, f.yaw_d_filt, f.min_depth, f.action[0],
                      f.action[1], f.action[2], f.action[3], f.action[4], f.action[5]);
        csv << line;
    }
    csv.close();

    // Depth overlays: centroid crosshair plus the servo reference lines.
    const ctl::ControllerConfig cfg = ctl::controller_from_json(rec.controller_cfg, "record.controller_cfg");
    int emitted = 0;
    for (size_t i = 0; i < rec.frames.size(); ++i) {
        const auto& f = rec.frames[i];
        if (f.depth_ref.empty()) continue;
        const std::string depth_path = record_dir + "/" + f.depth_ref;
        if (!fs::exists(depth_path))
            throw MissingFrameData("replay: missing frame data '" + depth_path + "'");
        const ImageF depth = read_float_frame(depth_path);
        ImageU8 overlay(depth.width, depth.height, 0);
        float zmax = 1e-6f;
        for (const float z : depth.data) zmax = std::max(zmax, z);
        for (size_t p = 0; p < depth.data.size(); ++p)
            overlay.data[p] = static_cast<uint8_t>(255.0f * (1.0f - depth.data[p] / zmax));
        const int line_v = static_cast<int>(cfg.lower_line_frac * depth.height);
        const int band_lo = static_cast<int>(cfg.band_lo_frac * depth.height);
        const int band_hi = static_cast<int>(cfg.band_hi_frac * depth.height);
        for (int x = 0; x < depth.width; x += 2) {
            overlay.at(x, line_v) = 200;
            overlay.at(x, band_lo) = 128;
            overlay.at(x, band_hi) = 128;
        }
        if (f.centroid_valid) {
            const int cu = std::clamp(static_cast<int>(std::lround(f.centroid_u)), 0, depth.width - 1);
            const int cv = std::clamp(static_cast<int>(std::lround(f.centroid_v)), 0, depth.height - 1);
            for (int d = -3; d <= 3; ++d) {
                if (overlay.in_bounds(cu + d, cv)) overlay.at(cu + d, cv) = 255;
                if (overlay.in_bounds(cu, cv + d)) overlay.at(cu, cv + d) = 255;
            }
        }
        char name[64];
        std::snprintf(name, sizeof(name), "overlay_%06zu.pgm", i);
        write_pgm(out_dir + "/" + name, overlay);
        ++emitted;
    }
    return emitted == 0 ? static_cast<int>(rec.frames.size()) : emitted;
}

label::DatasetManifest label_episode_dir(const std::string& episode_dir, const std::string& out_dir,
                                         const LabelOptions& options) {
    const EpisodeRecord rec = load_episode(episode_dir);

    label::WidthSignal sig;
    sig.sample_rate = 10.0;
    for (const auto& [t, w] : rec.width_signal()) {
        sig.t.push_back(t);
        sig.w.push_back(w);
    }
    const label::ClosureEvent closure = label::detect_closure(sig, options.closure);

    // The contact object: the capture event nearest the detected closure,
    // falling back to the episode's grasped object.
    int contact_object = rec.grasped_object;
    double best_gap = std::numeric_limits<double>::max();
    for (const auto& e : rec.events) {
        if (e.kind != "captured") continue;
        const double gap = std::abs(e.t - closure.t_star);
        if (gap < best_gap) {
            best_gap = gap;
            contact_object = e.data.value("object", contact_object);
        }
    }
    if (contact_object < 0)
        throw NoClosureFound("label: closure detected but no captured object in the record");

    const int width = get_as<int>(rec.scenario_cfg, "render_width", "record.scenario_cfg");
    const int height = get_as<int>(rec.scenario_cfg, "render_height", "record.scenario_cfg");

    std::vector<label::TrackSample> oracle_track;
    if (!options.track_file.empty()) {
        // Imported tracker output replaces the recorded simulator tracks.
        oracle_track = label::read_track_file(options.track_file);
        if (oracle_track.size() < rec.frames.size())
            oracle_track.resize(rec.frames.size());
    } else {
        oracle_track.reserve(rec.frames.size());
        for (size_t i = 0; i < rec.frames.size(); ++i) {
            const ObjectTrackRecord* tr = rec.frames[i].track_of(contact_object);
            label::TrackSample s;
            s.frame = static_cast<int>(i);
            if (tr != nullptr) {
                s.u = tr->u;
                s.v = tr->v;
                s.visible = tr->visible;
            }
            oracle_track.push_back(s);
        }
    }
    const label::ContactTrack track =
        label::backtrack_contact(oracle_track, closure.index, width, height);

    std::vector<ImageF> depths;
    depths.reserve(track.samples.size());
    for (size_t i = 0; i <= closure.index; ++i) {
        const std::string& ref = rec.frames[i].depth_ref;
        if (ref.empty())
            throw MissingFrameData("label: episode was recorded without frame dumps (frame " +
                                   std::to_string(i) + ")");
        depths.push_back(read_float_frame(episode_dir + "/" + ref));
    }

    label::NormSpec anchors = options.anchors;
    if (anchors.d_max <= anchors.d_min) {
        anchors.d_min = std::numeric_limits<double>::max();
        anchors.d_max = std::numeric_limits<double>::lowest();
        for (const auto& d : depths)
            for (const float z : d.data) {
                anchors.d_min = std::min(anchors.d_min, static_cast<double>(z));
                anchors.d_max = std::max(anchors.d_max, static_cast<double>(z));
            }
    }

    const int goal_frame = std::max(
        0, static_cast<int>(closure.index) -
               static_cast<int>(std::llround(options.goal_lead * sig.sample_rate)));
    const auto samples =
        label::build_samples(depths, track, goal_frame, anchors, static_cast<int>(rec.episode_id),
                             options.samples);
    return label::export_dataset(samples, out_dir, anchors, options.train_fraction,
                                 options.samples.splat_sigma);
}

}  // namespace aqua::harness
