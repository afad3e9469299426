#include "dbnad/wishart.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dbnad/error.hpp"
#include "dbnad/ram.hpp"

namespace dbnad {
namespace {

double log_multigamma(int p, double a) {
  double s = 0.25 * p * (p - 1) * std::log(std::numbers::pi);
  for (int j = 1; j <= p; ++j) s += std::lgamma(a + 0.5 * (1 - j));
  return s;
}

double log_det_chol(const Eigen::LLT<Matrix>& llt) {
  double s = 0.0;
  for (int i = 0; i < llt.matrixLLT().rows(); ++i) s += 2.0 * std::log(llt.matrixLLT()(i, i));
  return s;
}

}  // namespace

Matrix sample_wishart(double dof, const Matrix& scale, Rng& rng) {
  const int n = static_cast<int>(scale.rows());
  if (!(dof > n - 1)) throw NumericError("sample_wishart: degrees of freedom must exceed n - 1");
  Eigen::LLT<Matrix> llt(scale);
  if (llt.info() != Eigen::Success) throw NumericError("sample_wishart: scale not positive definite");
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = std::sqrt(std::chi_squared_distribution<double>(dof - i)(rng));
    for (int j = 0; j < i; ++j) a(i, j) = standard_normal(rng);
  }
  const Matrix la = llt.matrixL() * a;
  return la * la.transpose();
}

double wishart_logpdf(const Matrix& x, double dof, const Matrix& scale) {
  const int n = static_cast<int>(x.rows());
  Eigen::LLT<Matrix> lx(x), lv(scale);
  if (lx.info() != Eigen::Success || lv.info() != Eigen::Success)
    throw NumericError("wishart_logpdf: argument not positive definite");
  const double trace = lv.solve(x).trace();
  return 0.5 * (dof - n - 1) * log_det_chol(lx) - 0.5 * trace - 0.5 * dof * n * std::numbers::ln2 -
         0.5 * dof * log_det_chol(lv) - log_multigamma(n, 0.5 * dof);
}

CorrScale split_covariance(const Matrix& sigma) {
  const int n = static_cast<int>(sigma.rows());
  CorrScale out{Matrix(n, n), sigma.diagonal()};
  for (int i = 0; i < n; ++i) {
    if (!(out.d(i) > 0.0)) throw NumericError("split_covariance: non-positive variance");
  }
  for (int i = 0; i < n; ++i) {
    out.r(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) out.r(i, j) = out.r(j, i) = sigma(i, j) / std::sqrt(out.d(i) * out.d(j));
  }
  return out;
}

Matrix join_covariance(const Matrix& r, const Vector& d) {
  const Vector sd = d.array().sqrt();
  return sd.asDiagonal() * r * sd.asDiagonal();
}

double log_f_rd(const Matrix& r, const Vector& d, double dof, const Matrix& scale) {
  const double n = static_cast<double>(r.rows());
  return wishart_logpdf(join_covariance(r, d), dof, scale) + 0.5 * (n - 1.0) * d.array().log().sum();
}

PxmhSampler::PxmhSampler(Matrix r, double dof, double target)
    : r_(std::move(r)), d_(Vector::Ones(r_.rows())), dof_(dof), target_(target) {
  const double n = static_cast<double>(r_.rows());
  dof_ = std::clamp(dof_, n + 2.0 + 1e-6, kMaxDof);
}

void PxmhSampler::reset(Matrix r) { r_ = std::move(r); }

PxmhSampler::Step PxmhSampler::step(const std::function<double(const Matrix&)>& log_target,
                                    double& current_log_target, Rng& rng, bool adapt) {
  const int n = static_cast<int>(r_.rows());
  const Matrix sigma = join_covariance(r_, d_);
  Step out;
  CorrScale prop;
  Matrix sigma_prop;
  // Regenerate when round-off leaves the draw numerically singular.
  for (int attempt = 0;; ++attempt) {
    sigma_prop = sample_wishart(dof_, sigma / dof_, rng);
    if (Eigen::LLT<Matrix>(sigma_prop).info() == Eigen::Success) break;
    if (attempt >= 100) throw NumericError("PX-MH: Wishart draws repeatedly not positive definite");
  }
  prop = split_covariance(sigma_prop);

  const double lq = log_target(prop.r);
  if (std::isfinite(lq)) {
    const double log_back = log_f_rd(r_, d_, dof_, sigma_prop / dof_);
    const double log_fwd = log_f_rd(prop.r, prop.d, dof_, sigma / dof_);
    const double log_alpha = lq - current_log_target + log_back - log_fwd;
    out.accept_prob = std::isnan(log_alpha) ? 0.0 : std::min(1.0, std::exp(log_alpha));
  }
  out.accepted = uniform01(rng) < out.accept_prob;
  if (out.accepted) {
    r_ = std::move(prop.r);
    d_ = std::move(prop.d);
    current_log_target = lq;
  }
  ++m_;
  if (adapt) {
    const double eta = std::min(1.0, RamAdapter::step_size(m_));
    dof_ = std::clamp(std::exp(std::log(dof_) - eta * (out.accept_prob - target_)), n + 2.0 + 1e-6, kMaxDof);
  }
  return out;
}

}  // namespace dbnad
