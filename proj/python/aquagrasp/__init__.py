"""Seeded underwater grasp-collection simulator and tooling.

The heavy lifting lives in the C++ extension ``aquagrasp._core``; this
package re-exports its surface.
"""

from aquagrasp._core import (
    CameraModel,
    ConfigError,
    NoClosureFoundError,
    RemapTable,
    build_remap_table,
    detect_closure,
    experiment_suite,
    file_checksum,
    label_episode,
    load_warp_spec_table,
    ray_plane_point,
    registered_suites,
    remap_image,
    replay,
    run_campaign,
    run_episode,
)

__all__ = [
    "CameraModel",
    "ConfigError",
    "NoClosureFoundError",
    "RemapTable",
    "build_remap_table",
    "detect_closure",
    "experiment_suite",
    "file_checksum",
    "label_episode",
    "load_warp_spec_table",
    "ray_plane_point",
    "registered_suites",
    "remap_image",
    "replay",
    "run_campaign",
    "run_episode",
]

__version__ = "0.1.0"
