#include "artimanip/spaces.hpp"

#include <stdexcept>

namespace artimanip {

namespace {
void put_pose(Eigen::VectorXd& v, int& i, const Pose& pose) {
  v.segment<3>(i) = pose.position;
  v(i + 3) = pose.orientation.w();
  v(i + 4) = pose.orientation.x();
  v(i + 5) = pose.orientation.y();
  v(i + 6) = pose.orientation.z();
  i += 7;
}
}  // namespace

Eigen::VectorXd Observation::flatten() const {
  Eigen::VectorXd v(kObservationDim);
  int i = 0;
  put_pose(v, i, grasp_target);
  put_pose(v, i, ee_proxy);
  v(i++) = handle_distance;
  v.segment<3>(i) = ee_position;
  i += 3;
  v.segment<6>(i) = ee_rot6d;
  i += 6;
  v(i++) = graspable;
  v.segment<3>(i) = pivot_obs;
  i += 3;
  v(i++) = radius_obs;
  v(i++) = right_hinged_obs;
  return v;
}

Eigen::VectorXd PrivilegedObservation::flatten() const {
  Eigen::VectorXd v(kPrivilegedDim);
  v.segment<3>(0) = pivot;
  v(3) = radius;
  v(4) = inertia;
  v(5) = stiffness;
  v(6) = joint_position;
  v(7) = grasped;
  return v;
}

Action Action::from_vector(const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() != kActionDim) throw std::invalid_argument("action must have 11 components");
  Action a;
  a.dxyz = v.segment<3>(0);
  a.rot6d = v.segment<6>(3);
  a.gripper = v(9);
  a.a_kp = v(10);
  return a;
}

Eigen::VectorXd Action::flatten() const {
  Eigen::VectorXd v(kActionDim);
  v.segment<3>(0) = dxyz;
  v.segment<6>(3) = rot6d;
  v(9) = gripper;
  v(10) = a_kp;
  return v;
}

Action Action::clipped() const {
  Action a = *this;
  a.dxyz = a.dxyz.cwiseMax(-1.0).cwiseMin(1.0);
  a.rot6d = a.rot6d.cwiseMax(-1.0).cwiseMin(1.0);
  a.gripper = std::clamp(a.gripper, -1.0, 1.0);
  a.a_kp = std::clamp(a.a_kp, -1.0, 1.0);
  return a;
}

Eigen::Matrix<double, kPartialActionDim, 1> Action::partial() const {
  Eigen::Matrix<double, kPartialActionDim, 1> p;
  p.segment<3>(0) = dxyz;
  p(3) = gripper;
  p(4) = a_kp;
  return p;
}

Eigen::VectorXd Command::flatten() const {
  Eigen::VectorXd v(kCommandDim);
  v.segment<3>(0) = dxyz;
  v(3) = target_orientation.w();
  v(4) = target_orientation.x();
  v(5) = target_orientation.y();
  v(6) = target_orientation.z();
  v(7) = gripper_close;
  v(8) = kp;
  return v;
}

}  // namespace artimanip
