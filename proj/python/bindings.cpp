#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>
#include <optional>

#include "sphereconv/error.hpp"
#include "sphereconv/kernel.hpp"
#include "sphereconv/loss.hpp"
#include "sphereconv/lut.hpp"
#include "sphereconv/metrics.hpp"
#include "sphereconv/sconv.hpp"
#include "sphereconv/synth.hpp"

namespace py = pybind11;
using namespace sphereconv;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Tensor to_tensor(const Array& a, const char* what) {
  if (a.ndim() != 3) throw ShapeError(std::string(what) + ": expected a (C, H, W) array");
  Tensor t(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)), static_cast<int>(a.shape(2)));
  std::memcpy(t.data(), a.data(), t.size() * sizeof(double));
  return t;
}

Array to_array(const Tensor& t) {
  Array a({t.channels(), t.height(), t.width()});
  std::memcpy(a.mutable_data(), t.data(), t.size() * sizeof(double));
  return a;
}

LutCache& luts() {
  static LutCache cache;
  return cache;
}

std::shared_ptr<const KernelLut> lut_for(const Tensor& x) { return luts().get(ErpGrid(x.height(), x.width())); }

py::array_t<std::uint32_t> tables_to_array(const KernelLut& lut) {
  const int h = lut.grid.height(), w = lut.grid.width();
  py::array_t<std::uint32_t> a({kKernelPoints, h, w});
  for (int k = 0; k < kKernelPoints; ++k) {
    std::memcpy(a.mutable_data(k), lut.tables[k].data(), lut.tables[k].size() * sizeof(std::uint32_t));
  }
  return a;
}

Tensor mask_or_ones(const std::optional<Array>& mask, const Tensor& like) {
  return mask ? to_tensor(*mask, "mask") : Tensor(like.shape(), 1.0);
}

}  // namespace

PYBIND11_MODULE(_sphereconv, m) {
  m.doc() = "Spherical convolution core";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  static py::exception<IoError> io(m, "IoError", error.ptr());
  static py::exception<FormatError> format(m, "FormatError", error.ptr());
  static py::exception<ChecksumError> checksum(m, "ChecksumError", format.ptr());
  static py::exception<ShapeError> shape(m, "ShapeError", error.ptr());
  static py::exception<NumericError> numeric(m, "NumericError", error.ptr());
  static py::exception<InvalidArgument> invalid(m, "InvalidArgument",
                                                py::make_tuple(error, py::handle(PyExc_ValueError)));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ChecksumError& e) {
      py::set_error(checksum, e.what());
    } catch (const FormatError& e) {
      py::set_error(format, e.what());
    } catch (const IoError& e) {
      py::set_error(io, e.what());
    } catch (const ShapeError& e) {
      py::set_error(shape, e.what());
    } catch (const NumericError& e) {
      py::set_error(numeric, e.what());
    } catch (const InvalidArgument& e) {
      py::set_error(invalid, e.what());
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def(
      "pixel_to_angles",
      [](int row, int col, int height, int width) {
        const auto a = pixel_to_angles({row, col}, ErpGrid(height, width));
        return py::make_tuple(a.theta, a.phi);
      },
      py::arg("row"), py::arg("col"), py::arg("height"), py::arg("width"), "(theta, phi) of a pixel centre");
  m.def(
      "angles_to_pixel",
      [](double theta, double phi, int height, int width) {
        const auto px = angles_to_pixel({theta, phi}, ErpGrid(height, width));
        return py::make_tuple(px.row, px.col);
      },
      py::arg("theta"), py::arg("phi"), py::arg("height"), py::arg("width"));
  m.def(
      "point_from_angles",
      [](double theta, double phi) {
        const auto p = point_from_angles({theta, phi});
        return py::make_tuple(p.x, p.y, p.z);
      },
      py::arg("theta"), py::arg("phi"));
  m.def(
      "rotation_matrix",
      [](double theta, double phi) {
        const RotationMatrix r = rotation_matrix(rotation_angles({theta, phi}));
        py::array_t<double> a({3, 3});
        std::memcpy(a.mutable_data(), r.m.data(), 9 * sizeof(double));
        return a;
      },
      py::arg("theta"), py::arg("phi"), "Rotation carrying the north-pole pattern to (theta, phi)");
  m.def(
      "kernel_points",
      [](double theta, double phi, int height, int width) {
        const auto pts = kernel_at({theta, phi}, base_pattern(ErpGrid(height, width)));
        py::array_t<double> a({kKernelPoints, 3});
        auto v = a.mutable_unchecked<2>();
        for (int k = 0; k < kKernelPoints; ++k) {
          v(k, 0) = pts[k].x;
          v(k, 1) = pts[k].y;
          v(k, 2) = pts[k].z;
        }
        return a;
      },
      py::arg("theta"), py::arg("phi"), py::arg("height"), py::arg("width"), "(9, 3) unit vectors, slot order");
  m.def("slot_names", [] {
    std::vector<std::string> names;
    for (int k = 0; k < kKernelPoints; ++k) names.emplace_back(slot_name(static_cast<KernelSlot>(k)));
    return names;
  });

  m.def(
      "compile_lut", [](int height, int width) { return tables_to_array(*luts().get(ErpGrid(height, width))); },
      py::arg("height"), py::arg("width"), "(9, H, W) uint32 flat pixel indices");
  m.def(
      "save_lut", [](int height, int width, const std::filesystem::path& path) {
        save_lut(*luts().get(ErpGrid(height, width)), path);
      },
      py::arg("height"), py::arg("width"), py::arg("path"));
  m.def(
      "load_lut", [](const std::filesystem::path& path) { return tables_to_array(load_lut(path)); }, py::arg("path"));

  m.def(
      "lut_gather",
      [](const Array& x) {
        const Tensor t = to_tensor(x, "lut_gather");
        return to_array(lut_gather(t, *lut_for(t)));
      },
      py::arg("x"), "(N, H, W) -> (9N, H, W); channel k*N + c holds slot k of channel c");
  m.def(
      "lut_scatter_add",
      [](const Array& g) {
        const Tensor t = to_tensor(g, "lut_scatter_add");
        return to_array(lut_scatter_add(t, *lut_for(t)));
      },
      py::arg("g"));
  m.def(
      "spherical_conv",
      [](const Array& x, const Array& group_weight, const Array& group_bias, const Array& pointwise_weight,
         const Array& pointwise_bias) {
        const Tensor t = to_tensor(x, "spherical_conv");
        const int n = t.channels();
        if (group_weight.ndim() != 2 || group_weight.shape(0) != n || group_weight.shape(1) != kKernelPoints) {
          throw ShapeError("group_weight must be (N, 9)");
        }
        if (pointwise_weight.ndim() != 2 || pointwise_weight.shape(1) != n) {
          throw ShapeError("pointwise_weight must be (N1, N)");
        }
        const int n1 = static_cast<int>(pointwise_weight.shape(0));
        if (group_bias.size() != n || pointwise_bias.size() != n1) throw ShapeError("bias length mismatch");
        SphericalConv layer("python", lut_for(t), n, n1);
        std::memcpy(layer.group_weights().value.data(), group_weight.data(), n * kKernelPoints * sizeof(double));
        std::memcpy(layer.group_bias().value.data(), group_bias.data(), n * sizeof(double));
        std::memcpy(layer.pointwise_weights().value.data(), pointwise_weight.data(), n1 * n * sizeof(double));
        std::memcpy(layer.pointwise_bias().value.data(), pointwise_bias.data(), n1 * sizeof(double));
        return to_array(layer.forward(t));
      },
      py::arg("x"), py::arg("group_weight"), py::arg("group_bias"), py::arg("pointwise_weight"),
      py::arg("pointwise_bias"));
  m.def(
      "apply_preset",
      [](const Array& x, const std::string& preset) {
        const Tensor t = to_tensor(x, "apply_preset");
        SphericalConv layer("python", lut_for(t), t.channels(), t.channels());
        apply_preset(layer, preset);
        return to_array(layer.forward(t));
      },
      py::arg("x"), py::arg("preset"), "average | center-identity | ring-laplacian");

  m.def(
      "render_room",
      [](std::uint64_t seed, int height, int width, double yaw) {
        RoomScene scene = random_scene(seed);
        scene.yaw = yaw;
        const RgbdSample s = render(scene, ErpGrid(height, width));
        py::dict out;
        out["rgb"] = to_array(s.rgb);
        out["depth"] = to_array(s.depth);
        out["mask"] = to_array(s.mask);
        return out;
      },
      py::arg("seed"), py::arg("height") = 64, py::arg("width") = 128, py::arg("yaw") = 0.0);

  m.def(
      "evaluate",
      [](const Array& pred, const Array& gt, const std::optional<Array>& mask) {
        const Tensor p = to_tensor(pred, "pred"), g = to_tensor(gt, "gt");
        const DepthMetrics r = evaluate(p, g, mask_or_ones(mask, g));
        py::dict out;
        out["abs_rel"] = r.abs_rel;
        out["sq_rel"] = r.sq_rel;
        out["rmse"] = r.rmse;
        out["rmse_log"] = r.rmse_log;
        out["d1"] = r.delta1;
        out["d2"] = r.delta2;
        out["d3"] = r.delta3;
        return out;
      },
      py::arg("pred"), py::arg("gt"), py::arg("mask") = py::none());
  m.def(
      "berhu_loss",
      [](const Array& pred, const Array& gt, const std::optional<Array>& mask) {
        const Tensor p = to_tensor(pred, "pred"), g = to_tensor(gt, "gt");
        const LossResult r = berhu_loss(p, g, mask_or_ones(mask, g));
        return py::make_tuple(r.value, to_array(r.grad));
      },
      py::arg("pred"), py::arg("gt"), py::arg("mask") = py::none(), "(value, d value / d pred)");
}
