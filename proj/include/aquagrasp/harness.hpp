#pragma once

#include <map>
#include <string>
#include <vector>

#include "aquagrasp/controller.hpp"
#include "aquagrasp/labeling.hpp"
#include "aquagrasp/record.hpp"
#include "aquagrasp/sim.hpp"

namespace aqua::harness {

// How the affordance goal object is chosen at frame 0 (the simulated
// analogue of specifying an on-land goal image).
enum class GoalRule { Center, OffCenter, Index };

struct CampaignSpec {
    int n_episodes = 20;
    std::string scenario_name = "default";
    sim::ScenarioConfig scenario;
    ctl::ControllerConfig controller;
    uint64_t seed_base = 1;
    std::string out_dir;  // empty: keep records in memory only
    bool save_frames = false;
    int jobs = 1;
    GoalRule goal_rule = GoalRule::Center;
    int goal_index = 0;
    double episode_cap = 90.0;  // s, sim time

    void validate() const;
};

CampaignSpec campaign_from_json(const Json& j, const std::string& context);
Json campaign_to_json(const CampaignSpec& spec);
CampaignSpec load_campaign_spec(const std::string& path);

struct CampaignReport {
    int n_episodes = 0;
    int successes = 0;
    double success_rate = 0.0;
    double mean_duration = 0.0;
    std::map<std::string, int> failure_counts;
    double regrasps_per_episode = 0.0;
    double backups_per_episode = 0.0;
    int loss_of_view_count = 0;      // terminal LossOfView failures
    int margin_excursion_count = 0;  // episodes with at least one excursion
    int target_switch_count = 0;     // episodes with a switch after an excursion
    int wrong_target_grasps = 0;     // successes where grasped != goal
    double target_fidelity = 1.0;    // among successes, grasped == goal
};

Json report_to_json(const CampaignReport& r);
std::string report_summary(const CampaignReport& r);

// One full episode: reset, staged rollout at 100 Hz with 10 Hz perception,
// grasp/drag glue, recording, and (when out_dir is set) persistence before
// return. Deterministic in (spec, seed).
EpisodeRecord run_episode(const CampaignSpec& spec, int64_t episode_id, uint64_t seed);

// Fans episodes out to a worker pool (spec.jobs), aggregates the report, and
// writes report.json / report.txt / successes.manifest under out_dir.
CampaignReport run_campaign(const CampaignSpec& spec);

CampaignReport aggregate_report(const std::vector<EpisodeRecord>& records);

// Post-hoc inspection: per-frame error/command CSV plus depth overlays for
// episodes recorded with frame dumps. Returns the number of frames emitted.
int replay(const std::string& record_dir, const std::string& out_dir);

// Full labeling pass over one recorded episode directory: closure detection
// on the width signal, contact backtracking along the recorded track,
// sample construction, and dataset export. Returns the manifest.
struct LabelOptions {
    label::ClosureParams closure;
    label::SampleParams samples;
    double goal_lead = 1.0;  // s before t* for the goal frame
    double train_fraction = 0.8;
    // Anchors: when d_max <= d_min, computed from this episode's depth range.
    label::NormSpec anchors{0.0, 0.0};
    // Optional externally produced point track (line-delimited records);
    // substitutes the recorded simulator tracks when set.
    std::string track_file;
};

label::DatasetManifest label_episode_dir(const std::string& episode_dir, const std::string& out_dir,
                                         const LabelOptions& options = {});

}  // namespace aqua::harness
