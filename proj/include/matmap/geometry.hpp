#ifndef MATMAP_GEOMETRY_HPP
#define MATMAP_GEOMETRY_HPP

#include <array>
#include <utility>

namespace matmap {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Proper rotation matrix (validated orthonormal, determinant +1).
struct Rotation3 {
    std::array<std::array<double, 3>, 3> m{};
};

/// Rigid placement of the local bench grid in the robot frame. All lengths
/// are centimeters. `plane_height_cm` is the constant z coordinate of the
/// pick points above the grid in the local frame.
struct FrameTransform {
    Rotation3 rotation;
    Vec3 translation_cm;       // tail at the robot origin, head at the local origin
    double plane_height_cm = 0.0;
};

/// Planar pick-point pair predicted in the local frame, in centimeters.
struct TargetVector {
    double x1_cm = 0.0;
    double y1_cm = 0.0;
    double x2_cm = 0.0;
    double y2_cm = 0.0;
};

/// Orthonormality tolerance for accepting a rotation matrix: loose enough for
/// hand-entered matrices, tight enough to reject genuinely invalid input.
inline constexpr double kRotationTolerance = 1e-9;

/// Validates a row-major 3x3 matrix: rejects non-orthonormal matrices
/// (max |R^T R - I| entry above tolerance) and reflections (det near -1).
Rotation3 validate_rotation(const std::array<double, 9>& raw);

/// Proper rotation by `degrees` about the z axis.
Rotation3 rotation_about_z(double degrees);

/// Splits the 4-vector (x1, y1, x2, y2) into the two 3D pick points on the
/// plane z = height.
std::pair<Vec3, Vec3> split_target(const TargetVector& target, double height_cm);

/// Maps a local-frame point into the robot frame: translation + R * p.
Vec3 to_robot_frame(const FrameTransform& f, const Vec3& p_local);

struct PickPoints {
    Vec3 p1;
    Vec3 p2;
    /// Set when the two pick points coincide. A damaged device can fold its
    /// geometry, so this is reported rather than treated as an error.
    bool degenerate = false;
};

/// Robot-frame positions of both pick points: split at the plane height, then
/// transform each point.
PickPoints pick_points_robot(const FrameTransform& f, const TargetVector& target);

} // namespace matmap

#endif
