#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "teachset/annotation.hpp"
#include "teachset/geometry.hpp"
#include "teachset/imaging.hpp"

namespace teachset::scene {

/// Appearance of one cuboid face: a base color, optionally checkered with an
/// accent color so faces carry texture the classifier can use.
struct FacePaint {
    std::array<std::uint8_t, 3> color{128, 128, 128};
    std::optional<std::array<std::uint8_t, 3>> accent;
    int checker_cells = 4;
};

/// Flat color, or a pixel-space checker when an accent color is set.
struct Background {
    std::array<std::uint8_t, 3> color{210, 210, 210};
    std::optional<std::array<std::uint8_t, 3>> accent;
    int cell_px = 12;
};

struct HandPatch {
    std::array<std::uint8_t, 3> tone{224, 172, 105};
    double area_fraction = 0.004;
};

struct CameraIntrinsics {
    double focal_px = 140.0;
    int width = 160;
    int height = 120;
};

/// A synthetic capture setup: a textured cuboid in front of a background, seen
/// through a pinhole camera. Stands in for a participant's object and room and
/// yields exact ground truth for every descriptor.
struct SceneSpec {
    std::string label = "object";
    geometry::ObjectFrame frame;
    geometry::Vec3 size{0.12, 0.12, 0.12};  // full extents along local axes, meters
    std::array<FacePaint, 6> faces;         // indexed by geometry::Side order
    Background background;
    CameraIntrinsics camera;
    std::optional<HandPatch> hand_patch;
    std::optional<int> blur_radius;
    std::string background_group;  // defaults to a color-derived id when empty

    void validate() const;
};

struct Rendered {
    imaging::ImageRGB image;
    metrics::PhotoAnnotation annotation;
};

/// Renders the scene and returns the image together with exact ground truth:
/// the projected object bbox clipped to the frame, cropped when the projection
/// exits the frame, hand/blurry per injected patch and blur, and group ids
/// from the spec and the camera side. Throws on degenerate poses (camera
/// inside the object, or object not in front of the camera).
Rendered render_scene(const SceneSpec& spec, const geometry::CameraPose& pose);

/// Camera basis vectors for a view direction; exposed for pose construction.
struct CameraBasis {
    geometry::Vec3 right;
    geometry::Vec3 down;
    geometry::Vec3 forward;
};
CameraBasis camera_basis(const geometry::Vec3& view_dir);

}  // namespace teachset::scene
