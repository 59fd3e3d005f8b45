"""Spherical convolution on equirectangular panoramas.

Arrays are float64 numpy arrays in channel-first (C, H, W) layout. Grids are
equirectangular with width == 2 * height.
"""

from ._sphereconv import (
    ChecksumError,
    Error,
    FormatError,
    InvalidArgument,
    IoError,
    NumericError,
    ShapeError,
    angles_to_pixel,
    apply_preset,
    berhu_loss,
    compile_lut,
    evaluate,
    kernel_points,
    load_lut,
    lut_gather,
    lut_scatter_add,
    pixel_to_angles,
    point_from_angles,
    render_room,
    rotation_matrix,
    save_lut,
    slot_names,
    spherical_conv,
)

__all__ = [
    "ChecksumError",
    "Error",
    "FormatError",
    "InvalidArgument",
    "IoError",
    "NumericError",
    "ShapeError",
    "angles_to_pixel",
    "apply_preset",
    "berhu_loss",
    "compile_lut",
    "evaluate",
    "kernel_points",
    "load_lut",
    "lut_gather",
    "lut_scatter_add",
    "pixel_to_angles",
    "point_from_angles",
    "render_room",
    "rotation_matrix",
    "save_lut",
    "slot_names",
    "spherical_conv",
]
