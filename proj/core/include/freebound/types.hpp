// Copyright 2026 The freebound Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <complex>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace freebound {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using SparseMat = Eigen::SparseMatrix<double>;
using Complex = std::complex<double>;

using Triangle = std::array<int, 3>;

/// One real value per mesh vertex (test functions, eigenfunctions, weights).
using Field = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace freebound
