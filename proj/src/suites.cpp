#include "aquagrasp/suites.hpp"

#include <filesystem>

namespace aqua::harness {

namespace {

CampaignSpec base_spec(int n_episodes, int jobs) {
    CampaignSpec spec;
    spec.n_episodes = n_episodes;
    spec.jobs = jobs;
    return spec;
}

}  // namespace

CampaignSpec goal_suite_spec(bool affordance, int n_episodes, int jobs) {
    CampaignSpec spec = base_spec(n_episodes, jobs);
    spec.scenario_name = "goal_disambiguation";
    spec.seed_base = 900;
    spec.scenario.objects = {{sim::ShapeKind::Rock, 1.0, 1.0},
                             {sim::ShapeKind::Duck, 1.0, 1.0},
                             {sim::ShapeKind::Can, 1.0, 1.0}};
    spec.goal_rule = GoalRule::OffCenter;
    spec.controller.mode = affordance ? ctl::SelectMode::Affordance : ctl::SelectMode::CenterBias;
    return spec;
}

CampaignSpec overshoot_suite_spec(bool backup_enabled, int n_episodes, int jobs) {
    CampaignSpec spec = base_spec(n_episodes, jobs);
    spec.scenario_name = "overshoot_failure";
    spec.seed_base = 1300;
    spec.scenario.objects = {{sim::ShapeKind::Rock, 1.0, 1.0},
                             {sim::ShapeKind::Duck, 1.0, 1.0},
                             {sim::ShapeKind::Can, 1.0, 1.0}};
    // Objects packed near the approach lane so a distractor tends to stay in
    // frame when the target is overshot out of view.
    spec.scenario.reset.ws_x_min = 1.5;
    spec.scenario.reset.ws_x_max = 2.15;
    spec.scenario.reset.ws_y_min = -0.22;
    spec.scenario.reset.ws_y_max = 0.22;
    // High hydrodynamic lag plus a hot, lightly damped approach loop: the
    // mismatched low-level controller the failure mode needs.
    spec.scenario.dynamics.tau_surge = 1.2;
    spec.scenario.dynamics.tau_sway = 1.2;
    spec.scenario.dynamics.tau_heave = 1.2;
    spec.scenario.dynamics.tau_yaw = 1.2;
    spec.scenario.dynamics.vmax_surge = 0.9;
    spec.controller.surge.kp = 0.022;
    spec.controller.surge.kd = 0.006;
    spec.controller.lower_line_frac = 0.84;
    spec.controller.band_lo_frac = 0.47;
    spec.controller.band_hi_frac = 0.56;
    spec.controller.margin_px = 26.0;
    spec.controller.margin_rate_px_s = 10.0;
    spec.controller.recovery.backup_enabled = backup_enabled;
    return spec;
}

CampaignSpec recovery_suite_spec(bool regrasp_enabled, int n_episodes, int jobs) {
    CampaignSpec spec = base_spec(n_episodes, jobs);
    spec.scenario_name = "recovery_ablation";
    spec.seed_base = 500;
    spec.scenario.objects = {{sim::ShapeKind::Rock, 0.7, 1.0}};
    spec.controller.recovery.regrasp_enabled = regrasp_enabled;
    return spec;
}

CampaignSpec novel_shape_spec(sim::ShapeKind kind, int n_episodes, int jobs) {
    CampaignSpec spec = base_spec(n_episodes, jobs);
    spec.scenario_name = "novel_shape_" + sim::shape_to_string(kind);
    spec.seed_base = 1700;
    spec.scenario.objects = {{kind, 1.0, 1.0}};
    spec.controller.mode = ctl::SelectMode::Affordance;
    return spec;
}

std::vector<std::string> registered_suites() {
    return {"goal_disambiguation", "overshoot_failure", "recovery_ablation", "novel_shape_transfer"};
}

SuiteResult experiment_suite(const std::string& name, const std::string& out_dir, int jobs,
                             int n_episodes) {
    SuiteResult result;
    result.name = name;

    const auto run_arm = [&](const std::string& arm_name, CampaignSpec spec) {
        if (!out_dir.empty()) spec.out_dir = out_dir + "/" + arm_name;
        SuiteArm arm;
        arm.name = arm_name;
        arm.spec = spec;
        arm.report = run_campaign(spec);
        result.arms.push_back(std::move(arm));
    };

    if (name == "goal_disambiguation") {
        const int n = n_episodes > 0 ? n_episodes : 100;
        run_arm("affordance", goal_suite_spec(true, n, jobs));
        run_arm("center_bias", goal_suite_spec(false, n, jobs));
        const CampaignReport& aff = result.arms[0].report;
        const CampaignReport& ctr = result.arms[1].report;
        result.summary = Json{{"affordance_fidelity", aff.target_fidelity},
                              {"affordance_success_rate", aff.success_rate},
                              {"center_bias_wrong_target_grasps", ctr.wrong_target_grasps},
                              {"center_bias_success_rate", ctr.success_rate}};
    } else if (name == "overshoot_failure") {
        const int n = n_episodes > 0 ? n_episodes : 100;
        run_arm("backup_off", overshoot_suite_spec(false, n, jobs));
        run_arm("backup_on", overshoot_suite_spec(true, n, jobs));
        const CampaignReport& off = result.arms[0].report;
        const CampaignReport& on = result.arms[1].report;
        result.summary = Json{{"target_switches_backup_off", off.target_switch_count},
                              {"target_switches_backup_on", on.target_switch_count},
                              {"loss_of_view_backup_off", off.loss_of_view_count},
                              {"loss_of_view_backup_on", on.loss_of_view_count}};
    } else if (name == "recovery_ablation") {
        const int n = n_episodes > 0 ? n_episodes : 200;
        run_arm("regrasp_off", recovery_suite_spec(false, n, jobs));
        run_arm("regrasp_on", recovery_suite_spec(true, n, jobs));
        const CampaignReport& off = result.arms[0].report;
        const CampaignReport& on = result.arms[1].report;
        result.summary = Json{{"success_rate_regrasp_off", off.success_rate},
                              {"success_rate_regrasp_on", on.success_rate},
                              {"success_rate_gain", on.success_rate - off.success_rate}};
    } else if (name == "novel_shape_transfer") {
        const int n = n_episodes > 0 ? n_episodes : 40;
        // Tuning-set shapes for reference, then the held-out set.
        for (const auto kind : {sim::ShapeKind::Rock, sim::ShapeKind::Seagrass, sim::ShapeKind::Duck,
                                sim::ShapeKind::Pitcher, sim::ShapeKind::Can, sim::ShapeKind::Drill})
            run_arm(sim::shape_to_string(kind), novel_shape_spec(kind, n, jobs));
        Json rates = Json::object();
        for (const auto& arm : result.arms) rates[arm.name] = arm.report.success_rate;
        result.summary = Json{{"success_rates", rates}};
    } else {
        throw UnknownSuite("experiment_suite: unknown suite '" + name + "'");
    }

    if (!out_dir.empty()) {
        Json arms = Json::object();
        for (const auto& arm : result.arms) arms[arm.name] = report_to_json(arm.report);
        save_json_file(out_dir + "/suite_summary.json",
                       Json{{"suite", name}, {"summary", result.summary}, {"arms", arms}});
    }
    return result;
}

}  // namespace aqua::harness
