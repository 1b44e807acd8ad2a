#include "cfi/series.hpp"

#include <cmath>
#include <stdexcept>

namespace cfi {

namespace {

constexpr double kTruncation = 1e-12;

// Composite Simpson over [0, T] (panels must be even).
double simpson(const std::function<double(double)>& f, double T, int panels) {
  if (panels % 2) ++panels;
  const double h = T / panels;
  double acc = f(0.0) + f(T);
  for (int i = 1; i < panels; ++i) acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// sinh(beta*a)/sinh(beta*T) and cosh(beta*a)/sinh(beta*T) for 0 <= a <= T,
// in overflow-free exponential form.
double sinh_ratio(double beta, double a, double T) {
  return std::exp(beta * (a - T)) * (1.0 - std::exp(-2.0 * beta * a)) /
         (1.0 - std::exp(-2.0 * beta * T));
}
double cosh_ratio(double beta, double a, double T) {
  return std::exp(beta * (a - T)) * (1.0 + std::exp(-2.0 * beta * a)) /
         (1.0 - std::exp(-2.0 * beta * T));
}

double coth(double x) { return 1.0 + 2.0 / std::expm1(2.0 * x); }

}  // namespace

RectSeries rect_series_solution(const BoundaryFn& psi0, const BoundaryFn& psi1,
                                const BoundaryFn& phi0, const BoundaryFn& phi1, double theta_bar,
                                double L, double H, int K, int quad_panels) {
  if (L <= 0 || H <= 0) throw std::invalid_argument("rect_series_solution: L, H must be positive");
  if (K < 1) throw std::invalid_argument("rect_series_solution: at least one mode required");
  if (quad_panels < 2) throw std::invalid_argument("rect_series_solution: quad_panels too small");

  RectSeries s;
  s.L_ = L;
  s.H_ = H;
  s.theta_bar_ = theta_bar;
  s.K_ = K;

  const double p00 = psi0(0.0), pL0 = psi0(L), p0H = psi1(0.0), pLH = psi1(L);
  const double scale = 1.0 + std::max({std::abs(p00), std::abs(pL0), std::abs(p0H), std::abs(pLH)});
  if (std::abs(phi0(0.0) - p00) > 1e-8 * scale || std::abs(phi0(H) - p0H) > 1e-8 * scale ||
      std::abs(phi1(0.0) - pL0) > 1e-8 * scale || std::abs(phi1(H) - pLH) > 1e-8 * scale)
    throw std::invalid_argument("rect_series_solution: corner compatibility conditions violated");

  s.r1_ = (p00 - pL0 + pLH - p0H) / (H * L);
  s.r2_ = (pL0 - p00) / L;
  s.r3_ = (p0H - p00) / H;
  s.r4_ = p00;

  // Corner-free boundary parts (linear interpolation of corner values removed).
  const double r1 = s.r1_, r2 = s.r2_, r3 = s.r3_, r4 = s.r4_;
  auto psi0_hat = [&](double x1) { return psi0(x1) - (r2 * x1 + r4); };
  auto psi1_hat = [&](double x1) { return psi1(x1) - (r1 * x1 * H + r2 * x1 + r3 * H + r4); };
  auto phi0_hat = [&](double x2) { return phi0(x2) - (r3 * x2 + r4); };
  auto phi1_hat = [&](double x2) { return phi1(x2) - (r1 * L * x2 + r2 * L + r3 * x2 + r4); };

  s.s_psi0_.resize(K);
  s.s_psi1_.resize(K);
  s.s_phi0_.resize(K);
  s.s_phi1_.resize(K);
  for (int k = 1; k <= K; ++k) {
    const double bL = k * M_PI / L, bH = k * M_PI / H;
    double sp0 = (2.0 / L) * simpson([&](double x) { return psi0_hat(x) * std::sin(bL * x); }, L, quad_panels);
    double sp1 = (2.0 / L) * simpson([&](double x) { return psi1_hat(x) * std::sin(bL * x); }, L, quad_panels);
    double sf0 = (2.0 / H) * simpson([&](double x) { return phi0_hat(x) * std::sin(bH * x); }, H, quad_panels);
    double sf1 = (2.0 / H) * simpson([&](double x) { return phi1_hat(x) * std::sin(bH * x); }, H, quad_panels);
    // Truncate negligible modes (the Appendix-style b_k, d_k stay bounded in
    // this representation, so the S values decide).
    if (std::abs(sp0) + std::abs(sp1) + std::abs(sf0) + std::abs(sf1) < kTruncation)
      sp0 = sp1 = sf0 = sf1 = 0.0;
    s.s_psi0_[k - 1] = sp0;
    s.s_psi1_[k - 1] = sp1;
    s.s_phi0_[k - 1] = sf0;
    s.s_phi1_[k - 1] = sf1;
  }

  // Additive constant of theta from the mean condition; all series terms and
  // the centered linear terms are mean-free, the quadratic term is not.
  s.theta_const_ = theta_bar - r1 * (H * H - L * L) / 3.0;
  return s;
}

double RectSeries::ln_lambda(double x1, double x2) const {
  double acc = r1_ * x1 * x2 + r2_ * x1 + r3_ * x2 + r4_;
  for (int k = 1; k <= K_; ++k) {
    const double sp0 = s_psi0_[k - 1], sp1 = s_psi1_[k - 1];
    const double sf0 = s_phi0_[k - 1], sf1 = s_phi1_[k - 1];
    if (sp0 != 0.0 || sp1 != 0.0) {
      const double b = k * M_PI / L_;
      acc += (sp0 * sinh_ratio(b, H_ - x2, H_) + sp1 * sinh_ratio(b, x2, H_)) * std::sin(b * x1);
    }
    if (sf0 != 0.0 || sf1 != 0.0) {
      const double b = k * M_PI / H_;
      acc += (sf0 * sinh_ratio(b, L_ - x1, L_) + sf1 * sinh_ratio(b, x1, L_)) * std::sin(b * x2);
    }
  }
  return acc;
}

double RectSeries::theta(double x1, double x2) const {
  double acc = r1_ * (3.0 * x2 * x2 - 3.0 * x1 * x1 + H_ * H_ - L_ * L_) / 6.0 +
               r2_ * (x2 - H_ / 2.0) - r3_ * (x1 - L_ / 2.0) + theta_const_;
  for (int k = 1; k <= K_; ++k) {
    const double sp0 = s_psi0_[k - 1], sp1 = s_psi1_[k - 1];
    const double sf0 = s_phi0_[k - 1], sf1 = s_phi1_[k - 1];
    if (sp0 != 0.0 || sp1 != 0.0) {
      const double b = k * M_PI / L_;
      acc += (-sp0 * cosh_ratio(b, H_ - x2, H_) + sp1 * cosh_ratio(b, x2, H_)) * std::cos(b * x1);
    }
    if (sf0 != 0.0 || sf1 != 0.0) {
      const double b = k * M_PI / H_;
      acc -= (-sf0 * cosh_ratio(b, L_ - x1, L_) + sf1 * cosh_ratio(b, x1, L_)) * std::cos(b * x2);
    }
  }
  return acc;
}

Eigen::Vector4d RectSeries::coefficients(int k) const {
  if (k < 1 || k > K_) throw std::out_of_range("RectSeries::coefficients: mode out of range");
  const double bHL = k * M_PI * H_ / L_;  // argument of the psi-direction ratios
  const double bLH = k * M_PI * L_ / H_;
  const double a = s_psi0_[k - 1];
  const double b = s_psi1_[k - 1] / std::sinh(bHL) - s_psi0_[k - 1] * coth(bHL);
  const double c = s_phi0_[k - 1];
  const double d = s_phi1_[k - 1] / std::sinh(bLH) - s_phi0_[k - 1] * coth(bLH);
  return {a, b, c, d};
}

Eigen::Vector4d fourier_coefficients(const BoundaryFn& psi0_hat, const BoundaryFn& psi1_hat,
                                     const BoundaryFn& phi0_hat, const BoundaryFn& phi1_hat,
                                     double L, double H, int k, int quad_panels) {
  if (k < 1) throw std::invalid_argument("fourier_coefficients: mode must be >= 1");
  const double bL = k * M_PI / L, bH = k * M_PI / H;
  const double a = (2.0 / L) * simpson([&](double x) { return psi0_hat(x) * std::sin(bL * x); }, L, quad_panels);
  const double s1 = (2.0 / L) * simpson([&](double x) { return psi1_hat(x) * std::sin(bL * x); }, L, quad_panels);
  const double c = (2.0 / H) * simpson([&](double x) { return phi0_hat(x) * std::sin(bH * x); }, H, quad_panels);
  const double s3 = (2.0 / H) * simpson([&](double x) { return phi1_hat(x) * std::sin(bH * x); }, H, quad_panels);
  const double b = s1 / std::sinh(bL * H) - a * coth(bL * H);
  const double d = s3 / std::sinh(bH * L) - c * coth(bH * L);
  return {a, b, c, d};
}

}  // namespace cfi
