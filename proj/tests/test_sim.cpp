#include <doctest.h>

#include <cmath>

#include "aquagrasp/render.hpp"
#include "aquagrasp/sim.hpp"

using namespace aqua;
using namespace aqua::sim;

namespace {

ScenarioConfig default_scenario(int n_objects = 1) {
    ScenarioConfig s;
    s.objects.clear();
    for (int i = 0; i < n_objects; ++i) s.objects.push_back({ShapeKind::Rock, 1.0, 1.0});
    return s;
}

struct SimFixture {
    ScenarioConfig scenario = default_scenario();
    PoolWorld world;
    RovState rov;
    Rng slip_rng{99};

    SimFixture() {
        world.extent = scenario.pool;
        rov.position = Vec3(1.0, 0.0, -0.4);
        rov.pitch = scenario.pitch_deg * M_PI / 180.0;
    }

    void run(const ActionCommand& cmd, int steps) {
        for (int i = 0; i < steps; ++i)
            step(world, rov, cmd, 0.01, scenario.dynamics, scenario.mounts, slip_rng);
    }
};

}  // namespace

TEST_CASE("zero command and zero velocity leaves the state unchanged except time") {
    SimFixture f;
    const Vec3 pos0 = f.rov.position;
    const double yaw0 = f.rov.yaw;
    f.run({}, 25);
    CHECK(f.rov.position.isApprox(pos0));
    CHECK(f.rov.yaw == yaw0);
    CHECK(f.rov.body_velocity.norm() == 0.0);
    CHECK(f.world.time == doctest::Approx(0.25));
}

TEST_CASE("surge release overshoots and matches a fine-step ODE oracle") {
    // Independent oracle: integrate the same lag+drag ODE at dt = 1e-5 and
    // compare the coarse 100 Hz simulation's travel distance after release.
    SimFixture f;
    ActionCommand fwd;
    fwd.forward = 0.8;
    const int drive_steps = 200;   // 2 s drive
    const int coast_steps = 400;   // 4 s coast
    f.run(fwd, drive_steps);
    const double release_x = f.rov.position.x();
    const double release_v = f.rov.body_velocity[0];
    f.run({}, coast_steps);
    const double sim_overshoot = f.rov.position.x() - release_x;
    CHECK(sim_overshoot > 0.05);  // the vehicle keeps moving after release

    const DynamicsParams& dyn = f.scenario.dynamics;
    double v = release_v, x = 0.0;
    const double fine_dt = 1e-5;
    for (int i = 0; i < static_cast<int>(coast_steps * 0.01 / fine_dt); ++i) {
        const double a = (0.0 - v) / dyn.tau_surge - dyn.drag_linear * v * std::abs(v);
        v += fine_dt * a;
        x += fine_dt * v;
    }
    CHECK(sim_overshoot == doctest::Approx(x).epsilon(0.01));
}

TEST_CASE("same seed and command stream give bit-identical trajectories") {
    const auto run_once = [] {
        SimFixture f;
        f.slip_rng = Rng(1234);
        ActionCommand cmd;
        cmd.forward = 0.5;
        cmd.yaw = -0.2;
        cmd.vertical = -0.1;
        f.run(cmd, 300);
        return f.rov;
    };
    const RovState a = run_once();
    const RovState b = run_once();
    CHECK(a.position.x() == b.position.x());
    CHECK(a.position.y() == b.position.y());
    CHECK(a.position.z() == b.position.z());
    CHECK(a.yaw == b.yaw);
    CHECK(a.body_velocity == b.body_velocity);
}

TEST_CASE("kinetic energy is non-increasing under zero command") {
    SimFixture f;
    ActionCommand burst;
    burst.forward = 1.0;
    burst.lateral = 0.6;
    burst.vertical = 0.4;
    burst.yaw = 0.8;
    f.run(burst, 150);
    double prev = f.rov.body_velocity.squaredNorm();
    for (int i = 0; i < 400; ++i) {
        f.run({}, 1);
        const double now = f.rov.body_velocity.squaredNorm();
        CHECK(now <= prev + 1e-15);
        prev = now;
    }
}

TEST_CASE("pitch stays at the configured constant through arbitrary maneuvers") {
    SimFixture f;
    const double pitch0 = f.rov.pitch;
    ActionCommand cmd;
    cmd.forward = 0.7;
    cmd.yaw = 0.5;
    cmd.vertical = -0.6;
    f.run(cmd, 500);
    CHECK(f.rov.pitch == pitch0);
}

TEST_CASE("NaN in the state is a hard fault") {
    SimFixture f;
    f.rov.position.x() = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(f.run({}, 1), aqua::SimFault);
}

TEST_CASE("open and close are mutually exclusive") {
    ActionCommand cmd;
    cmd.open = true;
    cmd.close = true;
    CHECK_THROWS_AS(cmd.validate(), ConfigError);
}

TEST_CASE("render: empty frustum gives far-plane depth and no masks") {
    SimFixture f;
    // No objects at all.
    const Observation obs = render(f.world, f.rov, f.scenario, CameraId::Forward);
    CHECK(obs.views.empty());
    for (const float z : obs.depth.data) CHECK(z == doctest::Approx(f.scenario.far_plane));
    for (const uint8_t c : obs.labels.data) CHECK(c == 0);
}

TEST_CASE("render: sphere on the optical axis has analytic minimum depth") {
    // Analytic ray-sphere oracle: a sphere centered on the optical axis at
    // range L has nearest depth L - r.
    SimFixture f;
    f.rov.pitch = 0.0;  // keep the geometry axial for the oracle
    f.rov.position = Vec3(1.0, 0.0, -0.5);
    f.rov.yaw = 0.0;

    ObjectInstance obj;
    obj.id = 0;
    obj.kind = ShapeKind::Rock;
    obj.shape.prims = {Primitive{Primitive::Type::Sphere, Vec3(0.0, 0.0, 0.0), Vec3::Zero(), 0.08}};
    obj.shape.grasp_point = Vec3(0.0, 0.0, 0.08);
    obj.shape.centroid = Vec3::Zero();
    obj.shape.bound_radius = 0.08;
    obj.position = Vec3(2.0, 0.0, -0.5);  // 1 m ahead on the axis
    f.world.objects.push_back(obj);

    const Observation obs = render(f.world, f.rov, f.scenario, CameraId::Forward);
    const ObjectView* view = obs.view_of(0);
    REQUIRE(view != nullptr);
    CHECK(view->min_depth == doctest::Approx(1.0 - 0.08).epsilon(2e-3));
    CHECK(view->centroid_u == doctest::Approx(f.scenario.forward_camera().cx).epsilon(0.02));
}

TEST_CASE("render: objects behind the vehicle are culled") {
    SimFixture f;
    ObjectInstance obj;
    obj.id = 0;
    obj.shape = make_shape(ShapeKind::Rock);
    obj.position = Vec3(0.2, 0.0, -1.0);  // behind the rov at x=1 facing +x
    f.rov.yaw = 0.0;
    f.world.objects.push_back(obj);
    const Observation obs = render(f.world, f.rov, f.scenario, CameraId::Forward);
    CHECK(obs.view_of(0) == nullptr);
}

TEST_CASE("render: mask pixels have depth inside the object's bounding range") {
    SimFixture f;
    ObjectInstance obj;
    obj.id = 0;
    obj.shape = make_shape(ShapeKind::Duck);
    obj.position = Vec3(2.0, 0.1, -1.0);
    f.world.objects.push_back(obj);
    const Observation obs = render(f.world, f.rov, f.scenario, CameraId::Forward);
    const ObjectView* view = obs.view_of(0);
    REQUIRE(view != nullptr);
    const CameraPose pose = camera_pose(f.rov, f.scenario.mounts.forward_cam_offset);
    const double zc = camera_depth(pose, obj.world_centroid());
    for (int y = 0; y < obs.labels.height; ++y) {
        for (int x = 0; x < obs.labels.width; ++x) {
            if (obs.labels.at(x, y) != 1) continue;
            const double z = obs.depth.at(x, y);
            CHECK(z >= zc - obj.shape.bound_radius - 1e-3);
            CHECK(z <= zc + obj.shape.bound_radius + 1e-3);
        }
    }
}

TEST_CASE("attempt_grasp honors the workspace box including its boundary") {
    SimFixture f;
    const Vec3 anchor = f.rov.gripper_anchor(f.scenario.mounts);

    ObjectInstance obj;
    obj.id = 0;
    obj.shape = make_shape(ShapeKind::Rock);

    SUBCASE("grasp point at the gripper origin captures") {
        obj.position = anchor - obj.shape.grasp_point;
        f.world.objects.push_back(obj);
        const GraspOutcome out = attempt_grasp(f.world, f.rov, f.scenario.mounts);
        CHECK(out.captured);
        CHECK(out.object_id == 0);
        CHECK(f.rov.held_object == 0);
    }
    SUBCASE("grasp point at twice the half-extent does not capture") {
        obj.position = anchor - obj.shape.grasp_point +
                       Vec3(2.0 * f.scenario.mounts.gripper_workspace_half.x(), 0.0, 0.0);
        f.world.objects.push_back(obj);
        CHECK_FALSE(attempt_grasp(f.world, f.rov, f.scenario.mounts).captured);
    }
    SUBCASE("grasp point exactly on the boundary captures (closed set)") {
        obj.position = anchor - obj.shape.grasp_point +
                       Vec3(f.scenario.mounts.gripper_workspace_half.x(), 0.0, 0.0);
        f.world.objects.push_back(obj);
        CHECK(attempt_grasp(f.world, f.rov, f.scenario.mounts).captured);
    }
}

TEST_CASE("held objects follow the gripper rigidly until they slip") {
    SimFixture f;
    ObjectInstance obj;
    obj.id = 0;
    obj.shape = make_shape(ShapeKind::Rock);
    obj.graspability = 1.0;
    obj.position = f.rov.gripper_anchor(f.scenario.mounts) - obj.shape.grasp_point;
    f.world.objects.push_back(obj);
    REQUIRE(attempt_grasp(f.world, f.rov, f.scenario.mounts).captured);

    ActionCommand cmd;
    cmd.forward = -0.5;
    cmd.yaw = 0.3;
    for (int i = 0; i < 300; ++i) {
        f.run(cmd, 1);
        const Vec3 anchor = f.rov.gripper_anchor(f.scenario.mounts);
        const Vec3 gp = f.world.objects[0].world_grasp_point();
        CHECK((anchor - gp).norm() < 1e-9);
    }
    CHECK(f.rov.held_object == 0);  // graspability 1 never slips
}

TEST_CASE("slip statistics match the closed-form survival function") {
    // Poisson oracle: with zero acceleration, per-step hazard is
    // dt*lambda*(1-g), so survival over T is ~exp(-lambda*(1-g)*T).
    const double g = 0.6;
    const double T = 2.0;
    const int trials = 4000;
    ScenarioConfig scenario = default_scenario();
    int survived = 0;
    for (int k = 0; k < trials; ++k) {
        PoolWorld world;
        world.extent = scenario.pool;
        RovState rov;
        rov.position = Vec3(1.0, 0.0, -0.4);
        ObjectInstance obj;
        obj.id = 0;
        obj.shape = make_shape(ShapeKind::Rock);
        obj.graspability = g;
        obj.position = rov.gripper_anchor(scenario.mounts) - obj.shape.grasp_point;
        world.objects.push_back(obj);
        REQUIRE(attempt_grasp(world, rov, scenario.mounts).captured);
        Rng slip_rng(7000 + static_cast<uint64_t>(k));
        bool slipped = false;
        for (int i = 0; i < static_cast<int>(T / 0.01); ++i) {
            if (evaluate_slip(world, rov, 0.01, scenario.dynamics, slip_rng)) {
                slipped = true;
                break;
            }
        }
        if (!slipped) ++survived;
    }
    const double expected = std::exp(-scenario.dynamics.slip_lambda * (1.0 - g) * T);
    const double sigma = std::sqrt(expected * (1.0 - expected) / trials);
    CHECK(std::abs(static_cast<double>(survived) / trials - expected) < 3.0 * sigma);
}

TEST_CASE("doubling the slip rate halves the mean hold time") {
    // Exponential-holding oracle: E[hold] = 1 / (lambda * (1 - g)).
    const double g = 0.5;
    const auto mean_hold = [&](double lambda) {
        ScenarioConfig scenario = default_scenario();
        scenario.dynamics.slip_lambda = lambda;
        double total = 0.0;
        const int trials = 3000;
        for (int k = 0; k < trials; ++k) {
            PoolWorld world;
            world.extent = scenario.pool;
            RovState rov;
            rov.position = Vec3(1.0, 0.0, -0.4);
            ObjectInstance obj;
            obj.id = 0;
            obj.shape = make_shape(ShapeKind::Rock);
            obj.graspability = g;
            obj.position = rov.gripper_anchor(scenario.mounts) - obj.shape.grasp_point;
            world.objects.push_back(obj);
            attempt_grasp(world, rov, scenario.mounts);
            Rng slip_rng(31000 + static_cast<uint64_t>(k));
            int steps = 0;
            while (!evaluate_slip(world, rov, 0.01, scenario.dynamics, slip_rng) && steps < 400000)
                ++steps;
            total += steps * 0.01;
        }
        return total / trials;
    };
    const double hold_1x = mean_hold(0.5);
    const double hold_2x = mean_hold(1.0);
    CHECK(hold_1x == doctest::Approx(1.0 / (0.5 * (1.0 - g))).epsilon(0.06));
    CHECK(hold_2x == doctest::Approx(hold_1x / 2.0).epsilon(0.08));
}

TEST_CASE("acceleration scales the slip hazard by 1 + kappa*|a|") {
    ScenarioConfig scenario = default_scenario();
    const double g = 0.4;
    const double accel = 2.0;
    const auto slip_fraction = [&](double forced_accel) {
        int slipped = 0;
        const int trials = 6000;
        for (int k = 0; k < trials; ++k) {
            PoolWorld world;
            world.extent = scenario.pool;
            RovState rov;
            rov.position = Vec3(1.0, 0.0, -0.4);
            rov.last_accel = forced_accel;
            ObjectInstance obj;
            obj.id = 0;
            obj.shape = make_shape(ShapeKind::Rock);
            obj.graspability = g;
            obj.position = rov.gripper_anchor(scenario.mounts) - obj.shape.grasp_point;
            world.objects.push_back(obj);
            attempt_grasp(world, rov, scenario.mounts);
            rov.last_accel = forced_accel;  // attempt does not touch it, keep explicit
            Rng slip_rng(52000 + static_cast<uint64_t>(k));
            for (int i = 0; i < 100; ++i)
                if (evaluate_slip(world, rov, 0.01, scenario.dynamics, slip_rng)) {
                    ++slipped;
                    break;
                }
        }
        return static_cast<double>(slipped) / trials;
    };
    const double base = slip_fraction(0.0);
    const double accelerated = slip_fraction(accel);
    // Compare implied hazard rates: F = 1 - exp(-rate * T).
    const double rate_base = -std::log(1.0 - base);
    const double rate_accel = -std::log(1.0 - accelerated);
    const double expected_ratio = 1.0 + scenario.dynamics.slip_kappa * accel;
    CHECK(rate_accel / rate_base == doctest::Approx(expected_ratio).epsilon(0.08));
}

TEST_CASE("attempt_grasp prefers the nearest qualifying object") {
    SimFixture f;
    const Vec3 anchor = f.rov.gripper_anchor(f.scenario.mounts);
    ObjectInstance near_obj, far_obj;
    near_obj.id = 3;
    near_obj.shape = make_shape(ShapeKind::Rock);
    near_obj.position = anchor - near_obj.shape.grasp_point + Vec3(0.01, 0.0, 0.0);
    far_obj.id = 1;
    far_obj.shape = make_shape(ShapeKind::Rock);
    far_obj.position = anchor - far_obj.shape.grasp_point + Vec3(0.05, 0.0, 0.0);
    f.world.objects = {far_obj, near_obj};
    const GraspOutcome out = attempt_grasp(f.world, f.rov, f.scenario.mounts);
    CHECK(out.captured);
    CHECK(out.object_id == 3);
}

TEST_CASE("mask views are disjoint boolean arrays and intensity covers objects") {
    SimFixture f;
    ObjectInstance a, b;
    a.id = 0;
    a.shape = make_shape(ShapeKind::Rock);
    a.position = Vec3(1.9, -0.15, -1.0);
    b.id = 1;
    b.shape = make_shape(ShapeKind::Duck);
    b.position = Vec3(1.9, 0.15, -1.0);
    f.world.objects = {a, b};
    RenderOptions opts;
    opts.with_intensity = true;
    const Observation obs = render(f.world, f.rov, f.scenario, CameraId::Forward, nullptr, opts);
    REQUIRE(obs.view_of(0) != nullptr);
    REQUIRE(obs.view_of(1) != nullptr);
    const ImageU8 mask_a = obs.mask(0);
    const ImageU8 mask_b = obs.mask(1);
    int overlap = 0, count_a = 0, lit = 0;
    for (size_t i = 0; i < mask_a.data.size(); ++i) {
        overlap += mask_a.data[i] != 0 && mask_b.data[i] != 0;
        count_a += mask_a.data[i];
        if (mask_a.data[i] != 0 || mask_b.data[i] != 0) lit += obs.intensity.data[i] > 0.0f;
    }
    CHECK(overlap == 0);
    CHECK(count_a == obs.view_of(0)->pixel_count);
    CHECK(lit > 0);
}

TEST_CASE("graspability 1 never slips") {
    ScenarioConfig scenario = default_scenario();
    PoolWorld world;
    world.extent = scenario.pool;
    RovState rov;
    ObjectInstance obj;
    obj.id = 0;
    obj.shape = make_shape(ShapeKind::Rock);
    obj.graspability = 1.0;
    obj.position = rov.gripper_anchor(scenario.mounts) - obj.shape.grasp_point;
    world.objects.push_back(obj);
    REQUIRE(attempt_grasp(world, rov, scenario.mounts).captured);
    Rng slip_rng(5);
    for (int i = 0; i < 2000; ++i) CHECK_FALSE(evaluate_slip(world, rov, 0.01, scenario.dynamics, slip_rng));
}

TEST_CASE("scatter_reset places disjoint visible objects deterministically") {
    ScenarioConfig scenario = default_scenario(3);
    SUBCASE("three objects all visible in frame zero") {
        PoolWorld world;
        RovState rov;
        Rng rng(42);
        scatter_reset(world, rov, rng, scenario);
        REQUIRE(world.objects.size() == 3);
        const Observation obs = render(world, rov, scenario, CameraId::Forward);
        for (int id = 0; id < 3; ++id) {
            const ObjectView* view = obs.view_of(id);
            REQUIRE(view != nullptr);
            CHECK(view->pixel_count > 0);
        }
        for (size_t i = 0; i < world.objects.size(); ++i)
            for (size_t j = i + 1; j < world.objects.size(); ++j)
                CHECK((world.objects[i].world_centroid() - world.objects[j].world_centroid()).norm() >
                      world.objects[i].shape.bound_radius + world.objects[j].shape.bound_radius);
    }
    SUBCASE("same seed gives identical layouts") {
        PoolWorld w1, w2;
        RovState r1, r2;
        Rng rng1(7), rng2(7);
        scatter_reset(w1, r1, rng1, scenario);
        scatter_reset(w2, r2, rng2, scenario);
        REQUIRE(w1.objects.size() == w2.objects.size());
        for (size_t i = 0; i < w1.objects.size(); ++i) {
            CHECK(w1.objects[i].position == w2.objects[i].position);
            CHECK(w1.objects[i].yaw == w2.objects[i].yaw);
        }
        CHECK(r1.position == r2.position);
        CHECK(r1.yaw == r2.yaw);
    }
    SUBCASE("impossible workspace raises PlacementFailure") {
        scenario.reset.ws_x_min = 1.5;
        scenario.reset.ws_x_max = 1.52;
        scenario.reset.ws_y_min = 0.0;
        scenario.reset.ws_y_max = 0.02;
        PoolWorld world;
        RovState rov;
        Rng rng(1);
        CHECK_THROWS_AS(scatter_reset(world, rov, rng, scenario), PlacementFailure);
    }
}
