// Copyright 2026 The camimu Authors
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

// Reference computations used by the tests. Each one is written directly
// from its defining formula and shares no code with the library.

#include <array>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace camimu::testing {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;

/// Uniformly distributed unit quaternion (w, x, y, z).
Vec4 random_unit_quaternion(std::mt19937_64& rng);
Vec3 random_vector(std::mt19937_64& rng, double scale = 1.0);

/// Hamilton product written out component by component.
Vec4 hamilton_product(const Vec4& a, const Vec4& b);

/// Rotation matrix of a unit quaternion from the textbook element formulas.
Mat3 quaternion_matrix(const Vec4& q);

/// Rodrigues formula for rotation vector theta.
Mat3 rodrigues(const Vec3& theta);

/// Elementary rotation about z.
Mat3 rotation_z(double angle);

/// Cross product from components.
Vec3 cross(const Vec3& a, const Vec3& b);

/// Velocity and position deltas for constant body acceleration `a` while
/// rotating at constant rate `w` about +z, after time T (explicit trig).
struct HelixDeltas {
  Vec3 beta;
  Vec3 alpha;
};
HelixDeltas helix_deltas(double w, const Vec3& a, double T);

/// World-frame state integrated with classical RK4 from continuous inputs.
struct WorldState {
  Vec3 p;
  Vec3 v;
  Mat3 R;  // body to world
};
/// Integrates p' = v, v' = R f - g, R' = R [w]x over [t0, t1] in `steps`
/// steps, where f(t) and w(t) are body-frame specific force and rate.
WorldState rk4_world_integration(const WorldState& start, double t0, double t1, int steps,
                                 const std::function<Vec3(double)>& specific_force,
                                 const std::function<Vec3(double)>& body_rate, const Vec3& g);

/// Intrinsic matrix entries from B = K^-T K^-1 by Cholesky factorization.
struct PinholeEntries {
  double fx, fy, cx, cy, skew;
};
PinholeEntries intrinsics_from_conic(const Mat3& B);

/// Allan variance laws for white noise density N and random walk K.
double white_noise_avar(double N, double tau);
double random_walk_avar(double K, double tau);

/// Sample variance.
double variance(const std::vector<double>& x);

/// Percentile (0..100) by linear interpolation of the sorted sample.
double percentile(std::vector<double> x, double p);

}  // namespace camimu::testing
