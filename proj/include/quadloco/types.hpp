#pragma once

#include <Eigen/Dense>

namespace quadloco {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Vec13 = Eigen::Matrix<double, 13, 1>;
using Vec19 = Eigen::Matrix<double, 19, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat12 = Eigen::Matrix<double, 12, 12>;
using Mat13 = Eigen::Matrix<double, 13, 13>;
using Mat19 = Eigen::Matrix<double, 19, 19>;
using Mat6x12 = Eigen::Matrix<double, 6, 12>;
using Mat12x6 = Eigen::Matrix<double, 12, 6>;
using Mat13x12 = Eigen::Matrix<double, 13, 12>;
using Mat19x12 = Eigen::Matrix<double, 19, 12>;

inline Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return s;
}

}  // namespace quadloco
