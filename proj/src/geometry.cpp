#include "matmap/geometry.hpp"

#include "matmap/error.hpp"

#include <cmath>

namespace matmap {

namespace {

constexpr double kPi = 3.14159265358979323846;

double determinant(const std::array<std::array<double, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

} // namespace

Rotation3 validate_rotation(const std::array<double, 9>& raw) {
    Rotation3 r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double v = raw[static_cast<std::size_t>(3 * i + j)];
            if (!std::isfinite(v)) throw_invalid("rotation entries must be finite");
            r.m[i][j] = v;
        }
    }
    // Max deviation of R^T R from the identity.
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double dot = 0.0;
            for (int k = 0; k < 3; ++k) dot += r.m[k][i] * r.m[k][j];
            worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
        }
    }
    if (worst > kRotationTolerance) {
        throw_invalid("matrix is not orthonormal (max |R^T R - I| = " + std::to_string(worst) + ")");
    }
    const double det = determinant(r.m);
    if (std::abs(det - 1.0) > kRotationTolerance) {
        throw_invalid("matrix is a reflection or otherwise improper (det = " +
                      std::to_string(det) + ")");
    }
    return r;
}

Rotation3 rotation_about_z(double degrees) {
    const double rad = degrees * kPi / 180.0;
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    Rotation3 r;
    r.m = {{{c, -s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}}};
    return r;
}

std::pair<Vec3, Vec3> split_target(const TargetVector& target, double height_cm) {
    return {Vec3{target.x1_cm, target.y1_cm, height_cm},
            Vec3{target.x2_cm, target.y2_cm, height_cm}};
}

Vec3 to_robot_frame(const FrameTransform& f, const Vec3& p) {
    const auto& m = f.rotation.m;
    return Vec3{
        f.translation_cm.x + m[0][0] * p.x + m[0][1] * p.y + m[0][2] * p.z,
        f.translation_cm.y + m[1][0] * p.x + m[1][1] * p.y + m[1][2] * p.z,
        f.translation_cm.z + m[2][0] * p.x + m[2][1] * p.y + m[2][2] * p.z,
    };
}

PickPoints pick_points_robot(const FrameTransform& f, const TargetVector& target) {
    auto [local1, local2] = split_target(target, f.plane_height_cm);
    PickPoints out;
    out.p1 = to_robot_frame(f, local1);
    out.p2 = to_robot_frame(f, local2);
    out.degenerate = target.x1_cm == target.x2_cm && target.y1_cm == target.y2_cm;
    return out;
}

} // namespace matmap
