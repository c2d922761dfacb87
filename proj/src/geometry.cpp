#include "teachset/geometry.hpp"

#include <cmath>
#include <cstdlib>

#include "teachset/error.hpp"

namespace teachset::geometry {

Vec3 Vec3::normalized() const {
    const double n = norm();
    if (n == 0.0) throw Error("Vec3::normalized: zero vector");
    return {x / n, y / n, z / n};
}

void BBox::validate() const {
    if (!(x0 >= 0.0 && x0 < x1 && x1 <= 1.0 && y0 >= 0.0 && y0 < y1 && y1 <= 1.0)) {
        throw Error("BBox: coordinates must satisfy 0 <= lo < hi <= 1");
    }
}

double bbox_area_fraction(const BBox& b) {
    b.validate();
    return (b.x1 - b.x0) * (b.y1 - b.y0);
}

bool bbox_touches_edge(const BBox& b, double eps) {
    b.validate();
    if (eps < 0.0) throw Error("bbox_touches_edge: eps must be >= 0");
    return b.x0 <= eps || b.y0 <= eps || b.x1 >= 1.0 - eps || b.y1 >= 1.0 - eps;
}

void CameraPose::validate() const {
    if (std::abs(view_dir.norm() - 1.0) > 1e-6) {
        throw Error("CameraPose: view_dir must be a unit vector");
    }
}

void ObjectFrame::validate() const {
    for (int i = 0; i < 3; ++i) {
        if (std::abs(axes[i].norm() - 1.0) > 1e-6) {
            throw Error("ObjectFrame: axes must be unit vectors");
        }
        for (int j = i + 1; j < 3; ++j) {
            if (std::abs(dot(axes[i], axes[j])) > 1e-6) {
                throw Error("ObjectFrame: axes must be pairwise orthogonal");
            }
        }
    }
}

std::string_view side_name(Side s) {
    switch (s) {
        case Side::PosX: return "+X";
        case Side::NegX: return "-X";
        case Side::PosY: return "+Y";
        case Side::NegY: return "-Y";
        case Side::PosZ: return "+Z";
        case Side::NegZ: return "-Z";
    }
    throw Error("side_name: bad enum value");
}

Side side_from_name(std::string_view name) {
    if (name == "+X") return Side::PosX;
    if (name == "-X") return Side::NegX;
    if (name == "+Y") return Side::PosY;
    if (name == "-Y") return Side::NegY;
    if (name == "+Z") return Side::PosZ;
    if (name == "-Z") return Side::NegZ;
    throw Error("side_from_name: unknown side '" + std::string(name) + "'");
}

Side classify_side(const CameraPose& pose, const ObjectFrame& frame) {
    pose.validate();
    frame.validate();
    const Vec3 v = pose.position - frame.center;
    if (v.norm() < 1e-12) {
        throw Error("classify_side: camera position coincides with object center");
    }
    const double comps[3] = {dot(v, frame.axes[0]), dot(v, frame.axes[1]),
                             dot(v, frame.axes[2])};
    int best_axis = 0;
    double best_abs = std::abs(comps[0]);
    for (int i = 1; i < 3; ++i) {
        // Strictly greater keeps the earlier axis on ties.
        if (std::abs(comps[i]) > best_abs) {
            best_abs = std::abs(comps[i]);
            best_axis = i;
        }
    }
    // A zero dominant component would imply v = 0, excluded above.
    const bool positive = comps[best_axis] >= 0.0;
    switch (best_axis) {
        case 0: return positive ? Side::PosX : Side::NegX;
        case 1: return positive ? Side::PosY : Side::NegY;
        default: return positive ? Side::PosZ : Side::NegZ;
    }
}

}  // namespace teachset::geometry
