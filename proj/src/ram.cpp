#include "dbnad/ram.hpp"

#include <algorithm>
#include <cmath>

#include "dbnad/error.hpp"

namespace dbnad {

RamAdapter::RamAdapter(int dim, double initial_scale, double target)
    : s_(Matrix::Identity(dim, dim) * initial_scale), target_(target) {
  if (dim < 1 || !(initial_scale > 0.0)) throw ConfigError("RamAdapter: dimension and scale must be positive");
}

double RamAdapter::step_size(int m) { return std::pow(static_cast<double>(m), -2.0 / 3.0); }

Vector RamAdapter::propose(const Vector& x, Rng& rng, Vector& u) const {
  u.resize(dim());
  for (int i = 0; i < dim(); ++i) u(i) = standard_normal(rng);
  return x + s_.triangularView<Eigen::Lower>() * u;
}

bool RamAdapter::adapt(const Vector& u, double accept_prob) {
  ++m_;
  const double norm2 = u.squaredNorm();
  if (!(norm2 > 0.0) || !std::isfinite(accept_prob)) return false;
  const double c = std::min(1.0, step_size(m_)) * (std::clamp(accept_prob, 0.0, 1.0) - target_);
  if (c == 0.0) return true;
  const Vector su = s_.triangularView<Eigen::Lower>() * u;
  const Matrix target_cov = s_ * s_.transpose() + (c / norm2) * su * su.transpose();
  Eigen::LLT<Matrix> llt(target_cov);
  if (llt.info() != Eigen::Success) return false;
  Matrix next = llt.matrixL();
  for (int i = 0; i < next.rows(); ++i)
    if (!(next(i, i) > 0.0) || !std::isfinite(next(i, i))) return false;
  s_ = std::move(next);
  return true;
}

double condition_number(const Matrix& s) {
  Eigen::JacobiSVD<Matrix> svd(s);
  const auto& sv = svd.singularValues();
  return sv(0) / sv(sv.size() - 1);
}

RamRun run_ram(const std::function<double(const Vector&)>& log_target, Vector x, int iterations, RamAdapter& adapter,
               Rng& rng) {
  RamRun run;
  run.samples.resize(iterations, x.size());
  run.accept_prob.reserve(iterations);
  run.accepted.reserve(iterations);
  double lp = log_target(x);
  Vector u;
  for (int it = 0; it < iterations; ++it) {
    const Vector y = adapter.propose(x, rng, u);
    const double lq = log_target(y);
    const double alpha = std::isfinite(lq) ? std::min(1.0, std::exp(lq - lp)) : 0.0;
    const bool accept = uniform01(rng) < alpha;
    if (accept) {
      x = y;
      lp = lq;
    }
    adapter.adapt(u, alpha);
    run.max_condition = std::max(run.max_condition, condition_number(adapter.scale()));
    run.samples.row(it) = x.transpose();
    run.accept_prob.push_back(alpha);
    run.accepted.push_back(accept);
  }
  return run;
}

}  // namespace dbnad
