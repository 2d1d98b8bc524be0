#pragma once

#include <string>
#include <utility>
#include <vector>

#include "aquagrasp/harness.hpp"

namespace aqua::harness {

struct SuiteArm {
    std::string name;
    CampaignSpec spec;
    CampaignReport report;
};

struct SuiteResult {
    std::string name;
    std::vector<SuiteArm> arms;
    Json summary;
};

// Registered experiment suites:
//   goal_disambiguation: 3-object scenes, affordance vs center-bias target
//       selection with an off-center specified goal; scores target fidelity.
//   overshoot_failure: high actuator lag with a deliberately hot approach
//       loop; measures margin excursions, loss-of-view, and wrong-object
//       grasps with backup recovery off vs on (paired seeds).
//   recovery_ablation: graspability 0.7 with regrasp retries off vs on
//       (paired seeds).
//   novel_shape_transfer: affordance-guided single-object grasping on the
//       shapes outside the tuning set (pitcher, can, drill) plus the tuned
//       trio for reference.
// Throws UnknownSuite for unregistered names.
SuiteResult experiment_suite(const std::string& name, const std::string& out_dir, int jobs,
                             int n_episodes = 0 /* 0: suite default */);

std::vector<std::string> registered_suites();

// The frozen per-suite campaign builders, exposed so tests and the
// acceptance suite run the exact same configurations.
CampaignSpec goal_suite_spec(bool affordance, int n_episodes, int jobs);
CampaignSpec overshoot_suite_spec(bool backup_enabled, int n_episodes, int jobs);
CampaignSpec recovery_suite_spec(bool regrasp_enabled, int n_episodes, int jobs);
CampaignSpec novel_shape_spec(sim::ShapeKind kind, int n_episodes, int jobs);

}  // namespace aqua::harness
