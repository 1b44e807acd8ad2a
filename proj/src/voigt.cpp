#include "cfi/voigt.hpp"

#include <cmath>
#include <stdexcept>

namespace cfi {

ElasticityVoigt base_tensor(double E, double nu) {
  if (E <= 0.0) throw std::invalid_argument("base_tensor: Young's modulus must be positive");
  if (nu <= -1.0 || nu >= 0.5) throw std::invalid_argument("base_tensor: Poisson ratio must lie in (-1, 0.5)");
  ElasticityVoigt C = ElasticityVoigt::Zero();
  const double f = E / (1.0 - nu * nu);
  C(0, 0) = f;
  C(1, 1) = f;
  C(0, 1) = f * nu;
  C(1, 0) = f * nu;
  C(2, 2) = f * (1.0 - nu) / 2.0;  // = E / (2(1+nu))
  return C;
}

namespace {

// Quadruple contraction A_ip B_jq B_ks B_lt C_pqst where one factor may be
// the angle derivative of the rotation. Works on the full 4th-order tensor
// reconstructed from the Voigt matrix (minor symmetries are implied by the
// Voigt slot map).
ElasticityVoigt contract4(const Eigen::Matrix2d& R1, const Eigen::Matrix2d& R2,
                          const Eigen::Matrix2d& R3, const Eigen::Matrix2d& R4,
                          const ElasticityVoigt& C) {
  ElasticityVoigt out = ElasticityVoigt::Zero();
  for (int a = 0; a < 3; ++a) {
    const int i = voigt::kFirst[a], j = voigt::kSecond[a];
    for (int b = 0; b < 3; ++b) {
      const int k = voigt::kFirst[b], l = voigt::kSecond[b];
      double s = 0.0;
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
          for (int u = 0; u < 2; ++u)
            for (int v = 0; v < 2; ++v)
              s += R1(i, p) * R2(j, q) * R3(k, u) * R4(l, v) * C(voigt::slot(p, q), voigt::slot(u, v));
      out(a, b) = s;
    }
  }
  // Round off the tiny asymmetry from summation order.
  return 0.5 * (out + out.transpose());
}

Eigen::Matrix2d rot(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix2d R;
  R << c, -s, s, c;
  return R;
}

Eigen::Matrix2d drot(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix2d D;
  D << -s, -c, c, -s;
  return D;
}

}  // namespace

ElasticityVoigt rotate_tensor(const ElasticityVoigt& C, double theta) {
  const Eigen::Matrix2d R = rot(theta);
  return contract4(R, R, R, R, C);
}

ElasticityVoigt rotation_derivative(const ElasticityVoigt& C, double theta) {
  const Eigen::Matrix2d R = rot(theta);
  const Eigen::Matrix2d D = drot(theta);
  ElasticityVoigt out = contract4(D, R, R, R, C);
  out += contract4(R, D, R, R, C);
  out += contract4(R, R, D, R, C);
  out += contract4(R, R, R, D, C);
  return out;
}

}  // namespace cfi
