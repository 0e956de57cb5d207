// Copyright 2026 The depthpose Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace depthpose {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat26 = Eigen::Matrix<double, 2, 6>;
using Mat36 = Eigen::Matrix<double, 3, 6>;

// Minimal pose parameterization: axis-angle rotation and a plain translation.
// Coordinate order in a flat 6-vector is (rot_x, rot_y, rot_z, tx, ty, tz).
struct Se3Tangent {
  Vec3 rot = Vec3::Zero();
  Vec3 trans = Vec3::Zero();

  static Se3Tangent FromVector(const Vec6& v);
  Vec6 ToVector() const;
};

// Rigid-body transform. Convention used across the project: a transform
// named T_a_to_b (or T_{a->b}) maps coordinates expressed in frame a into
// frame b, p_b = R p_a + t. Composition a * b applies b first.
class Se3Transform {
 public:
  Se3Transform() = default;
  // Throws kInvalidArgument when the rotation is not orthonormal with det 1.
  Se3Transform(const Mat3& rotation, const Vec3& translation);

  static Se3Transform Identity() { return {}; }
  // Builds from a unit quaternion (x, y, z, w); the quaternion is normalized.
  static Se3Transform FromQuaternion(const Eigen::Quaterniond& q,
                                     const Vec3& translation);

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  Se3Transform inverse() const;
  Vec3 operator*(const Vec3& p) const { return rotation_ * p + translation_; }
  Se3Transform operator*(const Se3Transform& other) const;

  Eigen::Quaterniond quaternion() const { return Eigen::Quaterniond(rotation_); }
  // Rotation angle in radians, in [0, pi].
  double angle() const;

 private:
  Mat3 rotation_ = Mat3::Identity();
  Vec3 translation_ = Vec3::Zero();
};

struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 1;
  int height = 1;

  // Throws kInvalidArgument when fx, fy <= 0 or the principal point is
  // outside the image.
  void Validate() const;

  // Intrinsics of pyramid level `level` produced by 2x2 box averaging.
  // Pixel centers sit at integer coordinates, so the principal point maps as
  // (c + 0.5) / 2^level - 0.5.
  CameraIntrinsics AtLevel(int level) const;
};

Se3Transform Compose(const Se3Transform& a, const Se3Transform& b);
Se3Transform Inverse(const Se3Transform& t);

// T_{prev->curr} = T_{w->curr} * T_{w->prev}^-1.
Se3Transform RelativeTransform(const Se3Transform& t_w_prev,
                               const Se3Transform& t_w_curr);

Mat3 Hat(const Vec3& v);
Mat3 ExpSo3(const Vec3& omega);
// Left Jacobian of SO(3): exp(omega + d) ~= exp(J_l(omega) d) exp(omega).
Mat3 LeftJacobianSo3(const Vec3& omega);

Se3Transform ExpMap(const Se3Tangent& t);
// Throws kDegenerateRotation when the rotation angle is pi (axis sign is
// ambiguous).
Se3Tangent LogMap(const Se3Transform& t);

// Throws kBehindCamera for p.z <= 0.
Vec2 Project(const CameraIntrinsics& k, const Vec3& p);
// Throws kBehindCamera for depth <= 0.
Vec3 Backproject(const CameraIntrinsics& k, const Vec2& u, double depth);

struct WarpResult {
  Vec2 pixel = Vec2::Zero();
  bool valid = false;
};

// Reprojects pixel u with the given depth through T and K. Invalid when the
// transformed point has z <= 0 or lands outside [0, w-1] x [0, h-1].
WarpResult WarpPixel(const CameraIntrinsics& k, const Se3Transform& t,
                     double depth, const Vec2& u);

struct WarpJacobianResult {
  Vec2 d_depth = Vec2::Zero();
  Mat26 d_tangent = Mat26::Zero();
};

// Derivatives of WarpPixel with respect to depth and to the tangent
// xi = LogMap(T), with T = ExpMap(xi). Throws kNoGradient when the warp is
// invalid.
WarpJacobianResult WarpJacobian(const CameraIntrinsics& k, const Se3Transform& t,
                                double depth, const Vec2& u);

// Precomputed pose and pose derivatives for a tangent parameter xi. Used by
// the photometric loss, which warps every pixel through both T = exp(xi) and
// its inverse.
class TangentPose {
 public:
  explicit TangentPose(const Se3Tangent& xi);

  const Se3Transform& forward() const { return forward_; }
  const Se3Transform& backward() const { return backward_; }

  // d(exp(xi) p)/d xi evaluated at the transformed point q = exp(xi) p.
  Mat36 ForwardPointJacobian(const Vec3& q) const;
  // d(exp(xi)^-1 p)/d xi evaluated at the transformed point q = exp(xi)^-1 p.
  Mat36 BackwardPointJacobian(const Vec3& q) const;

 private:
  Se3Transform forward_;
  Se3Transform backward_;
  Mat3 left_jacobian_;
};

// Warp of pixel u at `depth` through `pose` (forward or backward), with the
// derivatives with respect to depth and the tangent. `d_tangent` and
// `d_depth` are only meaningful when the result is valid.
struct WarpLinearization {
  WarpResult warp;
  Vec2 d_depth = Vec2::Zero();
  Mat26 d_tangent = Mat26::Zero();
};

WarpLinearization LinearizeWarp(const CameraIntrinsics& k, const TangentPose& pose,
                                bool use_inverse, double depth, const Vec2& u);

}  // namespace depthpose
