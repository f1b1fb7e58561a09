#pragma once

#include "avocodo/nn.hpp"

#include <map>
#include <string>

namespace avocodo::optim {

/// AdamW with decoupled weight decay: p -= lr * (m̂/(sqrt(v̂)+eps) + wd * p).
class AdamW {
 public:
  AdamW(nn::ParamStore& store, double lr = 2e-3, double beta1 = 0.8, double beta2 = 0.99,
        double weight_decay = 1e-2, double eps = 1e-8);

  /// Applies one update from the gradients currently stored on the parameters.
  /// Parameters with no accumulated gradient are treated as zero-gradient
  /// (they still decay).
  void step();

  void set_lr(double lr) { lr_ = lr; }
  double lr() const { return lr_; }
  long step_count() const { return t_; }

  /// Moment state keyed "name.m" / "name.v", plus "adamw.t"; for checkpoints.
  std::map<std::string, Eigen::ArrayXXd> state() const;
  void load_state(const std::map<std::string, Eigen::ArrayXXd>& state);

 private:
  nn::ParamStore& store_;
  double lr_, beta1_, beta2_, wd_, eps_;
  long t_ = 0;
  std::map<std::string, Eigen::ArrayXXd> m_, v_;
};

}  // namespace avocodo::optim
