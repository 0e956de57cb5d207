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


#include "depthpose/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "depthpose/error.hpp"

namespace depthpose {
namespace {

constexpr double kOrthonormalTol = 1e-9;

Vec3 Vee(const Mat3& m) {
  return Vec3(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)) * 0.5;
}

// d pi(q) / d q for the pinhole projection.
Eigen::Matrix<double, 2, 3> ProjectionJacobian(const CameraIntrinsics& k,
                                               const Vec3& q) {
  const double inv_z = 1.0 / q.z();
  Eigen::Matrix<double, 2, 3> j;
  j << k.fx * inv_z, 0.0, -k.fx * q.x() * inv_z * inv_z,
       0.0, k.fy * inv_z, -k.fy * q.y() * inv_z * inv_z;
  return j;
}

bool InsideImage(const CameraIntrinsics& k, const Vec2& u) {
  return u.x() >= 0.0 && u.y() >= 0.0 && u.x() <= k.width - 1 &&
         u.y() <= k.height - 1;
}

Vec3 Ray(const CameraIntrinsics& k, const Vec2& u) {
  return Vec3((u.x() - k.cx) / k.fx, (u.y() - k.cy) / k.fy, 1.0);
}

}  // namespace

Se3Tangent Se3Tangent::FromVector(const Vec6& v) {
  return Se3Tangent{v.head<3>(), v.tail<3>()};
}

Vec6 Se3Tangent::ToVector() const {
  Vec6 v;
  v << rot, trans;
  return v;
}

Se3Transform::Se3Transform(const Mat3& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
  const double ortho =
      (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
  const double det = rotation.determinant();
  if (!(ortho < kOrthonormalTol) || !(std::abs(det - 1.0) < kOrthonormalTol) ||
      !translation.allFinite()) {
    std::ostringstream os;
    os << "rotation is not a proper orthonormal matrix (|R^T R - I| = " << ortho
       << ", det = " << det << ")";
    throw Error(ErrorKind::kInvalidArgument, os.str());
  }
}

Se3Transform Se3Transform::FromQuaternion(const Eigen::Quaterniond& q,
                                          const Vec3& translation) {
  if (!(q.norm() > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "zero quaternion");
  }
  return Se3Transform(q.normalized().toRotationMatrix(), translation);
}

Se3Transform Se3Transform::inverse() const {
  Se3Transform out;
  out.rotation_ = rotation_.transpose();
  out.translation_ = -(out.rotation_ * translation_);
  return out;
}

Se3Transform Se3Transform::operator*(const Se3Transform& other) const {
  Se3Transform out;
  out.rotation_ = rotation_ * other.rotation_;
  out.translation_ = rotation_ * other.translation_ + translation_;
  return out;
}

double Se3Transform::angle() const {
  const double c = std::clamp((rotation_.trace() - 1.0) * 0.5, -1.0, 1.0);
  const double s = Vee(rotation_).norm();
  return std::atan2(s, c);
}

void CameraIntrinsics::Validate() const {
  if (!(fx > 0.0) || !(fy > 0.0) || width < 1 || height < 1 || !(cx >= 0.0) ||
      !(cy >= 0.0) || !(cx < width) || !(cy < height)) {
    std::ostringstream os;
    os << "intrinsics out of domain (fx=" << fx << ", fy=" << fy << ", cx=" << cx
       << ", cy=" << cy << ", size=" << width << "x" << height << ")";
    throw Error(ErrorKind::kInvalidArgument, os.str());
  }
}

CameraIntrinsics CameraIntrinsics::AtLevel(int level) const {
  CameraIntrinsics k = *this;
  for (int l = 0; l < level; ++l) {
    k.fx *= 0.5;
    k.fy *= 0.5;
    k.cx = (k.cx + 0.5) * 0.5 - 0.5;
    k.cy = (k.cy + 0.5) * 0.5 - 0.5;
    k.width /= 2;
    k.height /= 2;
  }
  return k;
}

Se3Transform Compose(const Se3Transform& a, const Se3Transform& b) { return a * b; }

Se3Transform Inverse(const Se3Transform& t) { return t.inverse(); }

Se3Transform RelativeTransform(const Se3Transform& t_w_prev,
                               const Se3Transform& t_w_curr) {
  return t_w_curr * t_w_prev.inverse();
}

Mat3 Hat(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Mat3 ExpSo3(const Vec3& omega) {
  const double theta2 = omega.squaredNorm();
  const Mat3 w = Hat(omega);
  double a;
  double b;
  if (theta2 < 1e-10) {
    a = 1.0 - theta2 / 6.0;
    b = 0.5 - theta2 / 24.0;
  } else {
    const double theta = std::sqrt(theta2);
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  return Mat3::Identity() + a * w + b * w * w;
}

Mat3 LeftJacobianSo3(const Vec3& omega) {
  const double theta2 = omega.squaredNorm();
  const Mat3 w = Hat(omega);
  double a;
  double b;
  if (theta2 < 1e-10) {
    a = 0.5 - theta2 / 24.0;
    b = 1.0 / 6.0 - theta2 / 120.0;
  } else {
    const double theta = std::sqrt(theta2);
    a = (1.0 - std::cos(theta)) / theta2;
    b = (theta - std::sin(theta)) / (theta2 * theta);
  }
  return Mat3::Identity() + a * w + b * w * w;
}

Se3Transform ExpMap(const Se3Tangent& t) {
  return Se3Transform(ExpSo3(t.rot), t.trans);
}

Se3Tangent LogMap(const Se3Transform& t) {
  const Mat3& r = t.rotation();
  const double c = std::clamp((r.trace() - 1.0) * 0.5, -1.0, 1.0);
  const Vec3 w = Vee(r);  // sin(theta) * axis
  const double s = w.norm();
  const double theta = std::atan2(s, c);

  Se3Tangent out;
  out.trans = t.translation();
  if (s < 1e-12 && c < 0.0) {
    throw Error(ErrorKind::kDegenerateRotation,
                "rotation angle is pi; the log axis is ambiguous");
  }
  if (theta < 1e-6) {
    out.rot = w * (1.0 + theta * theta / 6.0);
  } else if (s > 1e-6) {
    out.rot = w * (theta / s);
  } else {
    // Near pi: recover the axis from the symmetric part, sign from w.
    const Mat3 b = (r + r.transpose()) * 0.5 - c * Mat3::Identity();
    Eigen::Index i = 0;
    b.diagonal().maxCoeff(&i);
    Vec3 axis = b.col(i) / std::sqrt(b(i, i) * (1.0 - c));
    if (axis.dot(w) < 0.0) axis = -axis;
    out.rot = axis.normalized() * theta;
  }
  return out;
}

Vec2 Project(const CameraIntrinsics& k, const Vec3& p) {
  if (!(p.z() > 0.0)) {
    throw Error(ErrorKind::kBehindCamera, "point has non-positive z");
  }
  return Vec2(k.fx * p.x() / p.z() + k.cx, k.fy * p.y() / p.z() + k.cy);
}

Vec3 Backproject(const CameraIntrinsics& k, const Vec2& u, double depth) {
  if (!(depth > 0.0)) {
    throw Error(ErrorKind::kBehindCamera, "non-positive depth");
  }
  return Ray(k, u) * depth;
}

WarpResult WarpPixel(const CameraIntrinsics& k, const Se3Transform& t,
                     double depth, const Vec2& u) {
  WarpResult out;
  if (!(depth > 0.0)) return out;
  // Homogeneous form R ray + t / depth, written as a displacement from u so
  // that the identity transform maps every pixel onto itself exactly.
  const Vec3 ray = Ray(k, u);
  const Vec3 h = t.rotation() * ray + t.translation() * (1.0 / depth);
  if (!(h.z() > 0.0)) return out;
  out.pixel = Vec2(u.x() + k.fx * (h.x() / h.z() - ray.x()),
                   u.y() + k.fy * (h.y() / h.z() - ray.y()));
  out.valid = InsideImage(k, out.pixel);
  return out;
}

WarpJacobianResult WarpJacobian(const CameraIntrinsics& k, const Se3Transform& t,
                                double depth, const Vec2& u) {
  const TangentPose pose(LogMap(t));
  const WarpLinearization lin = LinearizeWarp(k, pose, false, depth, u);
  if (!lin.warp.valid) {
    throw Error(ErrorKind::kNoGradient, "warp is invalid at this pixel");
  }
  return {lin.d_depth, lin.d_tangent};
}

TangentPose::TangentPose(const Se3Tangent& xi)
    : forward_(ExpMap(xi)),
      backward_(forward_.inverse()),
      left_jacobian_(LeftJacobianSo3(xi.rot)) {}

Mat36 TangentPose::ForwardPointJacobian(const Vec3& q) const {
  // q = R p + t; perturbing omega rotates R p on the left.
  Mat36 j;
  j.leftCols<3>() = -Hat(q - forward_.translation()) * left_jacobian_;
  j.rightCols<3>() = Mat3::Identity();
  return j;
}

Mat36 TangentPose::BackwardPointJacobian(const Vec3& q) const {
  // q = R^T (p - t); the right Jacobian of SO(3) is the transposed left one.
  Mat36 j;
  j.leftCols<3>() = Hat(q) * left_jacobian_.transpose();
  j.rightCols<3>() = -backward_.rotation();
  return j;
}

WarpLinearization LinearizeWarp(const CameraIntrinsics& k, const TangentPose& pose,
                                bool use_inverse, double depth, const Vec2& u) {
  WarpLinearization out;
  const Se3Transform& t = use_inverse ? pose.backward() : pose.forward();
  out.warp = WarpPixel(k, t, depth, u);
  if (!out.warp.valid) return out;
  const Vec3 ray = Ray(k, u);
  const Vec3 q = t * (ray * depth);
  const Eigen::Matrix<double, 2, 3> jp = ProjectionJacobian(k, q);
  out.d_depth = jp * (t.rotation() * ray);
  out.d_tangent = jp * (use_inverse ? pose.BackwardPointJacobian(q)
                                    : pose.ForwardPointJacobian(q));
  return out;
}

}  // namespace depthpose
