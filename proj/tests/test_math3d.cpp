#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>

#include "quadsmc/math3d.hpp"
#include "quadsmc/rng.hpp"

using namespace quadsmc;

namespace {
UnitQuaternion random_q(Rng& rng) {
  return UnitQuaternion::from_axis_angle(rng.unit_vector<Vec3>(),
                                         rng.uniform(0.0, 2 * M_PI));
}
}  // namespace

TEST_CASE("hamilton product basics") {
  Rng rng(1);
  const UnitQuaternion id;
  for (int i = 0; i < 100; ++i) {
    const UnitQuaternion q = random_q(rng);
    CHECK((id * q).dot(q) == doctest::Approx(1.0).epsilon(1e-12));
    const UnitQuaternion qi = q * q.conjugate();
    CHECK(qi.w() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(qi.vec().norm() < 1e-12);
  }
  // Axis-angle doubling: 90 deg about x squared = 180 deg about x.
  const UnitQuaternion h = UnitQuaternion::from_axis_angle(Vec3::UnitX(), M_PI / 2);
  const UnitQuaternion hh = h * h;
  CHECK(hh.w() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(hh.x() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("conjugate") {
  const UnitQuaternion q(0.6, Vec3(0.8, 0, 0));
  CHECK(q.conjugate().w() == doctest::Approx(0.6));
  CHECK(q.conjugate().x() == doctest::Approx(-0.8));
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    const UnitQuaternion p = random_q(rng);
    CHECK(p.conjugate().conjugate().dot(p) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("rotation operator") {
  const UnitQuaternion id;
  const Vec3 v(0.3, -1.2, 2.0);
  CHECK((id.rotate(v) - v).norm() < 1e-15);

  const UnitQuaternion qz = UnitQuaternion::from_axis_angle(Vec3::UnitZ(), M_PI / 2);
  CHECK((qz.rotate(Vec3::UnitX()) - Vec3::UnitY()).norm() < 1e-12);

  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const UnitQuaternion q = random_q(rng);
    // rotate(q, e3) equals the third column of the matrix form.
    CHECK((q.rotate(Vec3::UnitZ()) - q.to_rotation_matrix().col(2)).norm() < 1e-13);
    // Isometry.
    const Vec3 w = rng.uniform(0.1, 5.0) * rng.unit_vector<Vec3>();
    CHECK(q.rotate(w).norm() == doctest::Approx(w.norm()).epsilon(1e-12));
    // Double cover, bitwise.
    const Vec3 a = q.rotate(w);
    const Vec3 b = (-q).rotate(w);
    CHECK(std::memcmp(a.data(), b.data(), sizeof a) == 0);
  }
}

TEST_CASE("rotation matrix round trip") {
  CHECK((UnitQuaternion().to_rotation_matrix() - Mat3::Identity()).norm() < 1e-15);
  const Mat3 Rz =
      UnitQuaternion::from_axis_angle(Vec3::UnitZ(), M_PI / 2).to_rotation_matrix();
  CHECK((Rz * Vec3::UnitX() - Vec3::UnitY()).norm() < 1e-12);

  Rng rng(4);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const UnitQuaternion q = random_q(rng);
    const UnitQuaternion back = UnitQuaternion::from_rotation_matrix(q.to_rotation_matrix());
    worst = std::max(worst,
                     (back.to_rotation_matrix() - q.to_rotation_matrix())
                         .cwiseAbs().maxCoeff());
    CHECK(back.w() >= 0.0);  // canonical hemisphere
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("from_rotation_matrix rejects junk") {
  Mat3 M = Mat3::Identity();
  M(0, 0) = 2.0;
  CHECK_THROWS_AS(UnitQuaternion::from_rotation_matrix(M), std::invalid_argument);
}

TEST_CASE("hat and vee") {
  CHECK(hat(Vec3::Zero()).norm() == 0.0);
  CHECK((hat(Vec3::UnitX()) * Vec3::UnitY() - Vec3::UnitZ()).norm() < 1e-15);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const Vec3 v(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
    CHECK((vee(hat(v)) - v).norm() < 1e-15);
    const Vec3 w(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
    CHECK((hat(v) * w - v.cross(w)).norm() < 1e-14);
  }
  Mat3 notskew = Mat3::Zero();
  notskew(0, 1) = 1.0;  // transpose entry missing
  CHECK_THROWS_AS(vee(notskew), std::invalid_argument);
}

TEST_CASE("sgn_plus") {
  CHECK(sgn_plus(0.0) == 1.0);
  CHECK(sgn_plus(-0.001) == -1.0);
  CHECK(sgn_plus(0.998) == 1.0);
  CHECK(sgn_plus(-0.0) == 1.0);  // -0.0 >= 0 is true
}

TEST_CASE("rotation angle of the exact representation") {
  const UnitQuaternion q = UnitQuaternion::from_axis_angle(Vec3::UnitY(), 1.0);
  CHECK(q.rotation_angle() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((-q).rotation_angle() == doctest::Approx(2 * M_PI - 1.0).epsilon(1e-12));
}
