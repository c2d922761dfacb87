#pragma once

#include <array>
#include <cmath>
#include <string_view>

namespace teachset::geometry {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec3 normalized() const;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// Axis-aligned box in normalized image coordinates; 0 <= x0 < x1 <= 1, same for y.
struct BBox {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 0.0;
    double y1 = 0.0;

    /// Throws teachset::Error when the invariant does not hold.
    void validate() const;
};

/// (x1-x0) * (y1-y0), in (0, 1] for a valid box.
double bbox_area_fraction(const BBox& b);

/// True iff any side lies within eps of the image frame.
bool bbox_touches_edge(const BBox& b, double eps = 0.005);

/// Camera placement: world position plus a unit view direction.
struct CameraPose {
    Vec3 position;
    Vec3 view_dir;

    void validate() const;  // |view_dir| must be 1 within 1e-6
};

/// Object-local coordinate frame: center plus three orthonormal axes.
struct ObjectFrame {
    Vec3 center;
    std::array<Vec3, 3> axes = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};

    void validate() const;  // axes pairwise orthogonal and unit within 1e-6
};

/// The six faces of an object's enclosing box.
enum class Side { PosX, NegX, PosY, NegY, PosZ, NegZ };

std::string_view side_name(Side s);
Side side_from_name(std::string_view name);  // "+X", "-X", "+Y", "-Y", "+Z", "-Z"

/// Face of the object box the camera sees: express (position - center) in the
/// object axes and take the dominant component, signed. Ties resolve by axis
/// order X, Y, Z and positive before negative. Throws when the camera sits on
/// the object center.
Side classify_side(const CameraPose& pose, const ObjectFrame& frame);

}  // namespace teachset::geometry
