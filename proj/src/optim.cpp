#include "avocodo/optim.hpp"

#include <cmath>

namespace avocodo::optim {

AdamW::AdamW(nn::ParamStore& store, double lr, double beta1, double beta2, double weight_decay,
             double eps)
    : store_(store), lr_(lr), beta1_(beta1), beta2_(beta2), wd_(weight_decay), eps_(eps) {}

void AdamW::step() {
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, t_);
  const double bc2 = 1.0 - std::pow(beta2_, t_);
  for (const auto& [name, p] : store_.all()) {
    Eigen::ArrayXXd g = p->grad.size() != 0
                            ? p->grad
                            : Eigen::ArrayXXd::Zero(p->value.rows(), p->value.cols());
    auto& m = m_[name];
    auto& v = v_[name];
    if (m.size() == 0) {
      m = Eigen::ArrayXXd::Zero(g.rows(), g.cols());
      v = Eigen::ArrayXXd::Zero(g.rows(), g.cols());
    }
    m = beta1_ * m + (1.0 - beta1_) * g;
    v = beta2_ * v + (1.0 - beta2_) * g.square();
    p->value -= lr_ * ((m / bc1) / ((v / bc2).sqrt() + eps_) + wd_ * p->value);
  }
}

std::map<std::string, Eigen::ArrayXXd> AdamW::state() const {
  std::map<std::string, Eigen::ArrayXXd> s;
  for (const auto& [name, m] : m_) s[name + ".m"] = m;
  for (const auto& [name, v] : v_) s[name + ".v"] = v;
  s["adamw.t"] = Eigen::ArrayXXd::Constant(1, 1, static_cast<double>(t_));
  return s;
}

void AdamW::load_state(const std::map<std::string, Eigen::ArrayXXd>& state) {
  m_.clear();
  v_.clear();
  t_ = 0;
  for (const auto& [key, arr] : state) {
    if (key == "adamw.t") t_ = static_cast<long>(arr(0, 0));
    else if (key.size() > 2 && key.substr(key.size() - 2) == ".m") m_[key.substr(0, key.size() - 2)] = arr;
    else if (key.size() > 2 && key.substr(key.size() - 2) == ".v") v_[key.substr(0, key.size() - 2)] = arr;
  }
}

}  // namespace avocodo::optim
