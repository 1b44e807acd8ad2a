#pragma once

#include <Eigen/Dense>

namespace cfi {

// Plane-stress elasticity tensors in 3x3 Voigt form.
//
// Ordering is (11, 22, 12) with the engineering-shear convention: the strain
// vector is (e11, e22, g12) with g12 = 2*e12, so V(a,b) equals the tensor
// component C_ijkl for the representative index pairs and no hidden factors
// of 2 live inside the matrix. All rotation routines below assume (and
// preserve) this convention.
using ElasticityVoigt = Eigen::Matrix3d;

// Plane-stress constitutive matrix of an isotropic base material.
// Throws std::invalid_argument for E <= 0 or nu outside (-1, 0.5).
ElasticityVoigt base_tensor(double youngs_modulus, double poisson_ratio);

// C'_ijkl = R_ip R_jq R_ks R_lt C_pqst for a counterclockwise rotation by
// theta. Exact symmetry of the result is enforced by construction.
ElasticityVoigt rotate_tensor(const ElasticityVoigt& C, double theta);

// Analytic d/dtheta of rotate_tensor at angle theta (sum of the four
// product-rule terms, each a quadruple contraction with one R replaced by
// dR/dtheta).
ElasticityVoigt rotation_derivative(const ElasticityVoigt& C, double theta);

namespace voigt {

// Index pairs representing Voigt slots 0..2.
inline constexpr int kFirst[3] = {0, 1, 0};
inline constexpr int kSecond[3] = {0, 1, 1};

// Voigt slot of a (i,j) tensor index pair.
inline constexpr int slot(int i, int j) { return (i == j) ? i : 2; }

}  // namespace voigt

}  // namespace cfi
