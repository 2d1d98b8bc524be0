#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aquagrasp/harness.hpp"
#include "aquagrasp/io.hpp"
#include "aquagrasp/suites.hpp"
#include "aquagrasp/warp.hpp"

namespace py = pybind11;
using namespace aqua;

namespace {

ImageF array_to_image(const py::array_t<float, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw ConfigError("expected a 2-D float32 array");
    ImageF img(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
    std::memcpy(img.data.data(), arr.data(), img.data.size() * sizeof(float));
    return img;
}

py::array_t<float> image_to_array(const ImageF& img) {
    py::array_t<float> arr({img.height, img.width});
    std::memcpy(arr.mutable_data(), img.data.data(), img.data.size() * sizeof(float));
    return arr;
}

py::dict json_to_dict(const Json& j) {
    const py::module_ json_mod = py::module_::import("json");
    return json_mod.attr("loads")(j.dump());
}

Json obj_to_json(const py::object& obj) {
    const py::module_ json_mod = py::module_::import("json");
    const std::string dumped = py::cast<std::string>(json_mod.attr("dumps")(obj));
    return Json::parse(dumped);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Seeded underwater grasp-collection simulator: cameras, warp, episodes, labeling";

    py::register_exception<NoClosureFound>(m, "NoClosureFoundError");
    py::register_exception<ConfigError>(m, "ConfigError");

    py::class_<CameraModel>(m, "CameraModel")
        .def(py::init([](double fx, double fy, double cx, double cy, int width, int height,
                         std::vector<double> dist) {
                 CameraModel cam;
                 cam.fx = fx;
                 cam.fy = fy;
                 cam.cx = cx;
                 cam.cy = cy;
                 cam.width = width;
                 cam.height = height;
                 if (!dist.empty()) {
                     if (dist.size() != 5) throw ConfigError("dist must hold 5 coefficients");
                     std::copy(dist.begin(), dist.end(), cam.dist.begin());
                 }
                 cam.validate("CameraModel");
                 return cam;
             }),
             py::arg("fx"), py::arg("fy"), py::arg("cx"), py::arg("cy"), py::arg("width"),
             py::arg("height"), py::arg("dist") = std::vector<double>{})
        .def_readonly("fx", &CameraModel::fx)
        .def_readonly("fy", &CameraModel::fy)
        .def_readonly("cx", &CameraModel::cx)
        .def_readonly("cy", &CameraModel::cy)
        .def_readonly("width", &CameraModel::width)
        .def_readonly("height", &CameraModel::height)
        .def("undistort_pixel",
             [](const CameraModel& cam, double u, double v) {
                 const Vec2 n = cam.undistort_pixel({u, v});
                 return py::make_tuple(n.x(), n.y());
             })
        .def("project_point", [](const CameraModel& cam, double x, double y, double z) {
            const Vec2 px = cam.project_point({x, y, z});
            return py::make_tuple(px.x(), px.y());
        });

    m.def("ray_plane_point", [](double x, double y, double z) {
        const Vec3 p = ray_plane_point({x, y}, z);
        return py::make_tuple(p.x(), p.y(), p.z());
    });

    py::class_<RemapTable>(m, "RemapTable")
        .def_readonly("width", &RemapTable::width)
        .def_readonly("height", &RemapTable::height)
        .def_property_readonly("map_u",
                               [](const RemapTable& t) {
                                   py::array_t<float> arr({t.height, t.width});
                                   std::memcpy(arr.mutable_data(), t.map_u.data(),
                                               t.map_u.size() * sizeof(float));
                                   return arr;
                               })
        .def_property_readonly("map_v",
                               [](const RemapTable& t) {
                                   py::array_t<float> arr({t.height, t.width});
                                   std::memcpy(arr.mutable_data(), t.map_v.data(),
                                               t.map_v.size() * sizeof(float));
                                   return arr;
                               })
        .def_property_readonly("valid", [](const RemapTable& t) {
            py::array_t<uint8_t> arr({t.height, t.width});
            std::memcpy(arr.mutable_data(), t.valid.data(), t.valid.size());
            return arr;
        });

    m.def(
        "build_remap_table",
        [](const py::object& calib) { return build_remap_table(warp_spec_from_json(obj_to_json(calib), "calib")); },
        py::arg("calibration"), "Build the plane-at-depth remap table from a calibration dict");

    m.def(
        "load_warp_spec_table",
        [](const std::string& path) { return build_remap_table(load_warp_spec(path)); },
        py::arg("path"), "Load a calibration file and build its remap table");

    m.def(
        "remap_image",
        [](const RemapTable& table, const py::array_t<float, py::array::c_style | py::array::forcecast>& img,
           float fill, bool nearest) {
            return image_to_array(remap_image(table, array_to_image(img), fill,
                                              nearest ? SampleMode::Nearest : SampleMode::Bilinear));
        },
        py::arg("table"), py::arg("image"), py::arg("fill") = 0.0f, py::arg("nearest") = false);

    m.def(
        "detect_closure",
        [](const std::vector<double>& t, const std::vector<double>& w, double sample_rate, double window,
           double min_drop, double min_plateau, double plateau_tol) {
            label::WidthSignal sig;
            sig.t = t;
            sig.w = w;
            sig.sample_rate = sample_rate;
            label::ClosureParams params;
            params.window = window;
            params.min_drop = min_drop;
            params.min_plateau = min_plateau;
            params.plateau_tol = plateau_tol;
            const label::ClosureEvent ev = label::detect_closure(sig, params);
            py::dict out;
            out["t_star"] = ev.t_star;
            out["index"] = ev.index;
            out["drop_magnitude"] = ev.drop_magnitude;
            return out;
        },
        py::arg("t"), py::arg("w"), py::arg("sample_rate") = 10.0, py::arg("window") = 0.5,
        py::arg("min_drop") = 0.3, py::arg("min_plateau") = 1.0, py::arg("plateau_tol") = 0.1);

    m.def(
        "run_episode",
        [](const py::object& spec, int64_t episode_id, uint64_t seed) {
            const harness::CampaignSpec cs = harness::campaign_from_json(obj_to_json(spec), "spec");
            return json_to_dict(harness::episode_to_json(harness::run_episode(cs, episode_id, seed)));
        },
        py::arg("spec"), py::arg("episode_id"), py::arg("seed"),
        "Run one seeded episode; returns the full record as a dict");

    m.def(
        "run_campaign",
        [](const py::object& spec) {
            const harness::CampaignSpec cs = harness::campaign_from_json(obj_to_json(spec), "spec");
            return json_to_dict(harness::report_to_json(harness::run_campaign(cs)));
        },
        py::arg("spec"), "Run a seeded campaign; returns the report as a dict");

    m.def(
        "experiment_suite",
        [](const std::string& name, const std::string& out_dir, int jobs, int n_episodes) {
            const harness::SuiteResult result = harness::experiment_suite(name, out_dir, jobs, n_episodes);
            py::dict out;
            out["suite"] = result.name;
            out["summary"] = json_to_dict(result.summary);
            py::dict arms;
            for (const auto& arm : result.arms)
                arms[py::str(arm.name)] = json_to_dict(harness::report_to_json(arm.report));
            out["arms"] = arms;
            return out;
        },
        py::arg("name"), py::arg("out_dir") = std::string(), py::arg("jobs") = 1, py::arg("episodes") = 0);

    m.def(
        "label_episode",
        [](const std::string& episode_dir, const std::string& out_dir) {
            return json_to_dict(
                label::manifest_to_json(harness::label_episode_dir(episode_dir, out_dir, {})));
        },
        py::arg("episode_dir"), py::arg("out_dir"));

    m.def("replay", &harness::replay, py::arg("record_dir"), py::arg("out_dir"));

    m.def("registered_suites", &harness::registered_suites);

    m.def("file_checksum", &fnv1a64_file, py::arg("path"), "FNV-1a 64 over the file bytes");
}
