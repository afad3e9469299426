#include "dbnad/model.hpp"

#include "dbnad/error.hpp"

namespace dbnad {

std::vector<std::string> continuous_param_names(int n) {
  std::vector<std::string> names{"mu_bar_a", "mu_bar_d", "alpha1", "beta1", "alpha2", "beta2", "gamma1", "gamma2",
                                 "beta_es"};
  for (int i = 0; i + 1 < n; ++i) names.push_back("w_init[" + std::to_string(i + 1) + "]");
  for (int i = 0; i < n; ++i) {
    const std::string id = std::to_string(i + 1);
    names.push_back("garch_alpha[" + id + "]");
    names.push_back("garch_beta[" + id + "]");
    names.push_back("sigma_bar2[" + id + "]");
  }
  names.push_back("a_c");
  names.push_back("b_c");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      names.push_back("r_bar[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]");
  return names;
}

std::vector<double> flatten_continuous(const ModelParams& theta) {
  const int n = theta.n();
  const auto& e = theta.edge;
  std::vector<double> v{e.mu_bar_a, e.mu_bar_d, e.alpha1, e.beta1, e.alpha2, e.beta2, e.gamma1, e.gamma2,
                        theta.activeness.beta_es};
  for (int i = 0; i + 1 < n; ++i) v.push_back(theta.activeness.w_init[i]);
  for (const auto& g : theta.garch) {
    v.push_back(g.alpha);
    v.push_back(g.beta);
    v.push_back(g.sigma_bar2);
  }
  v.push_back(theta.dcc.a_c);
  v.push_back(theta.dcc.b_c);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) v.push_back(theta.dcc.r_bar(i, j));
  return v;
}

ModelParams unflatten_continuous(const ModelParams& shape, const std::vector<double>& values) {
  const int n = shape.n();
  if (values.size() != continuous_param_names(n).size())
    throw DataError("parameter vector has " + std::to_string(values.size()) + " entries, expected " +
                    std::to_string(continuous_param_names(n).size()));
  ModelParams theta = shape;
  std::size_t k = 0;
  auto& e = theta.edge;
  e.mu_bar_a = values[k++];
  e.mu_bar_d = values[k++];
  e.alpha1 = values[k++];
  e.beta1 = values[k++];
  e.alpha2 = values[k++];
  e.beta2 = values[k++];
  e.gamma1 = values[k++];
  e.gamma2 = values[k++];
  theta.activeness.beta_es = values[k++];
  theta.activeness.w_init.assign(n, kReferenceActiveness);
  for (int i = 0; i + 1 < n; ++i) theta.activeness.w_init[i] = values[k++];
  theta.garch.resize(n);
  for (auto& g : theta.garch) {
    g.alpha = values[k++];
    g.beta = values[k++];
    g.sigma_bar2 = values[k++];
  }
  theta.dcc.a_c = values[k++];
  theta.dcc.b_c = values[k++];
  theta.dcc.r_bar = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) theta.dcc.r_bar(i, j) = theta.dcc.r_bar(j, i) = values[k++];
  return theta;
}

}  // namespace dbnad
