#include "teachset/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "teachset/error.hpp"

namespace teachset::scene {

using geometry::ObjectFrame;
using geometry::Side;
using geometry::Vec3;

void SceneSpec::validate() const {
    frame.validate();
    if (!(size.x > 0 && size.y > 0 && size.z > 0)) {
        throw Error("SceneSpec: object size must be positive");
    }
    if (camera.width < 16 || camera.height < 16) {
        throw Error("SceneSpec: image size must be at least 16x16");
    }
    if (!(camera.focal_px > 0)) throw Error("SceneSpec: focal length must be positive");
    if (hand_patch && (hand_patch->area_fraction <= 0 || hand_patch->area_fraction > 1)) {
        throw Error("SceneSpec: hand patch fraction must be in (0, 1]");
    }
    if (blur_radius && *blur_radius < 0) throw Error("SceneSpec: blur radius must be >= 0");
}

CameraBasis camera_basis(const Vec3& view_dir) {
    const Vec3 forward = view_dir.normalized();
    Vec3 up{0, 1, 0};
    if (std::abs(dot(forward, up)) > 0.999) up = Vec3{1, 0, 0};
    const Vec3 right = cross(up, forward).normalized();
    const Vec3 down = cross(forward, right);
    return {right, down, forward};
}

namespace {

struct FaceHit {
    bool hit = false;
    int face = 0;     // geometry::Side order
    double u = 0.0;   // face-local coordinates in [0, 1]
    double v = 0.0;
};

// Slab intersection against the axis-aligned box in object-local coordinates.
FaceHit intersect_box(const Vec3& origin, const Vec3& dir, const Vec3& half) {
    double t_near = -std::numeric_limits<double>::infinity();
    double t_far = std::numeric_limits<double>::infinity();
    int near_axis = -1;
    int near_sign = 0;
    const double o[3] = {origin.x, origin.y, origin.z};
    const double d[3] = {dir.x, dir.y, dir.z};
    const double h[3] = {half.x, half.y, half.z};
    for (int a = 0; a < 3; ++a) {
        if (std::abs(d[a]) < 1e-15) {
            if (o[a] < -h[a] || o[a] > h[a]) return {};
            continue;
        }
        double t0 = (-h[a] - o[a]) / d[a];
        double t1 = (h[a] - o[a]) / d[a];
        int sign = d[a] < 0 ? +1 : -1;  // entering face sign along axis a
        if (t0 > t1) std::swap(t0, t1);
        if (t0 > t_near) {
            t_near = t0;
            near_axis = a;
            near_sign = sign;
        }
        t_far = std::min(t_far, t1);
        if (t_near > t_far) return {};
    }
    if (near_axis < 0 || t_near <= 0) return {};

    FaceHit hit;
    hit.hit = true;
    hit.face = near_axis * 2 + (near_sign > 0 ? 0 : 1);  // PosX,NegX,PosY,NegY,PosZ,NegZ
    const Vec3 p{origin.x + t_near * dir.x, origin.y + t_near * dir.y,
                 origin.z + t_near * dir.z};
    // Face-local coordinates over the two tangent axes.
    const double coords[3] = {p.x, p.y, p.z};
    const int ua = (near_axis + 1) % 3;
    const int va = (near_axis + 2) % 3;
    hit.u = (coords[ua] / h[ua] + 1.0) / 2.0;
    hit.v = (coords[va] / h[va] + 1.0) / 2.0;
    return hit;
}

std::array<std::uint8_t, 3> face_color(const FacePaint& paint, double u, double v) {
    if (!paint.accent) return paint.color;
    const int cells = std::max(1, paint.checker_cells);
    const int iu = std::min(cells - 1, static_cast<int>(u * cells));
    const int iv = std::min(cells - 1, static_cast<int>(v * cells));
    return ((iu + iv) % 2 == 0) ? paint.color : *paint.accent;
}

std::array<std::uint8_t, 3> background_color(const Background& bg, int x, int y) {
    if (!bg.accent || bg.cell_px <= 0) return bg.color;
    const int cx = x / bg.cell_px;
    const int cy = y / bg.cell_px;
    return ((cx + cy) % 2 == 0) ? bg.color : *bg.accent;
}

std::string derived_background_group(const Background& bg) {
    std::string id = "bg:" + std::to_string(bg.color[0]) + "," + std::to_string(bg.color[1]) +
                     "," + std::to_string(bg.color[2]);
    if (bg.accent) {
        id += ":" + std::to_string((*bg.accent)[0]) + "," + std::to_string((*bg.accent)[1]) +
              "," + std::to_string((*bg.accent)[2]) + ":" + std::to_string(bg.cell_px);
    }
    return id;
}

}  // namespace

Rendered render_scene(const SceneSpec& spec, const geometry::CameraPose& pose) {
    spec.validate();
    pose.validate();

    const CameraBasis basis = camera_basis(pose.view_dir);
    const Vec3 half = spec.size / 2.0;
    const ObjectFrame& frame = spec.frame;

    // Camera origin in object-local coordinates.
    const Vec3 rel = pose.position - frame.center;
    const Vec3 local_origin{dot(rel, frame.axes[0]), dot(rel, frame.axes[1]),
                            dot(rel, frame.axes[2])};
    if (std::abs(local_origin.x) <= half.x && std::abs(local_origin.y) <= half.y &&
        std::abs(local_origin.z) <= half.z) {
        throw Error("render_scene: camera is inside the object");
    }

    const int w = spec.camera.width;
    const int h = spec.camera.height;
    const double f = spec.camera.focal_px;
    const double cx = w / 2.0;
    const double cy = h / 2.0;

    // Exact object extent: the projection of a convex solid is the convex hull
    // of its projected corners. All corners must be in front of the camera.
    double min_u = std::numeric_limits<double>::infinity();
    double max_u = -min_u;
    double min_v = min_u;
    double max_v = -min_u;
    for (int corner = 0; corner < 8; ++corner) {
        const Vec3 local{(corner & 1 ? half.x : -half.x), (corner & 2 ? half.y : -half.y),
                         (corner & 4 ? half.z : -half.z)};
        const Vec3 world = frame.center + frame.axes[0] * local.x + frame.axes[1] * local.y +
                           frame.axes[2] * local.z;
        const Vec3 d = world - pose.position;
        const double depth = dot(d, basis.forward);
        if (depth <= 1e-9) {
            throw Error("render_scene: degenerate pose, object is not in front of the camera");
        }
        const double u = (cx + f * dot(d, basis.right) / depth) / w;
        const double v = (cy + f * dot(d, basis.down) / depth) / h;
        min_u = std::min(min_u, u);
        max_u = std::max(max_u, u);
        min_v = std::min(min_v, v);
        max_v = std::max(max_v, v);
    }

    metrics::PhotoAnnotation ann;
    const double vx0 = std::max(0.0, min_u);
    const double vy0 = std::max(0.0, min_v);
    const double vx1 = std::min(1.0, max_u);
    const double vy1 = std::min(1.0, max_v);
    const bool visible = vx0 < vx1 && vy0 < vy1;
    if (visible) {
        ann.bbox = geometry::BBox{vx0, vy0, vx1, vy1};
        ann.cropped = min_u < 0.0 || min_v < 0.0 || max_u > 1.0 || max_v > 1.0;
    }
    ann.background_group =
        spec.background_group.empty() ? derived_background_group(spec.background)
                                      : spec.background_group;
    ann.perspective_group = std::string(geometry::side_name(geometry::classify_side(pose, frame)));

    imaging::ImageRGB img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const Vec3 ray_world = basis.forward * f + basis.right * (x + 0.5 - cx) +
                                   basis.down * (y + 0.5 - cy);
            const Vec3 ray_local{dot(ray_world, frame.axes[0]), dot(ray_world, frame.axes[1]),
                                 dot(ray_world, frame.axes[2])};
            const FaceHit hit = intersect_box(local_origin, ray_local, half);
            const std::array<std::uint8_t, 3> c =
                hit.hit ? face_color(spec.faces[hit.face], hit.u, hit.v)
                        : background_color(spec.background, x, y);
            auto* p = img.px(x, y);
            p[0] = c[0];
            p[1] = c[1];
            p[2] = c[2];
        }
    }

    if (spec.hand_patch) {
        const int side = std::max(
            1, static_cast<int>(std::lround(std::sqrt(spec.hand_patch->area_fraction * w * h))));
        const int px = std::min(side, w);
        const int py = std::min(side, h);
        for (int y = h - py; y < h; ++y) {
            for (int x = 0; x < px; ++x) {
                auto* p = img.px(x, y);
                p[0] = spec.hand_patch->tone[0];
                p[1] = spec.hand_patch->tone[1];
                p[2] = spec.hand_patch->tone[2];
            }
        }
        ann.hand = true;
    }

    if (spec.blur_radius && *spec.blur_radius > 0) {
        img = imaging::box_blur(img, *spec.blur_radius);
        ann.blurry = true;
    }

    return {std::move(img), std::move(ann)};
}

}  // namespace teachset::scene
