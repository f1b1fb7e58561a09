#include "avocodo/optim.hpp"

#include "doctest.h"
#include "test_util.hpp"

#include <cmath>

using namespace avocodo;

TEST_CASE("AdamW matches a scalar reference implementation") {
  nn::ParamStore store(1);
  auto p = store.create("w", 2, 2);
  Eigen::ArrayXXd w_ref = p->value;

  const double lr = 1e-2, b1 = 0.8, b2 = 0.99, wd = 1e-2, eps = 1e-8;
  optim::AdamW opt(store, lr, b1, b2, wd, eps);

  Eigen::ArrayXXd m = Eigen::ArrayXXd::Zero(2, 2), v = Eigen::ArrayXXd::Zero(2, 2);
  for (int t = 1; t <= 5; ++t) {
    Eigen::ArrayXXd g = testutil::random_array(2, 2, 100 + t);
    p->grad = g;
    opt.step();
    p->grad.resize(0, 0);

    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g.square();
    Eigen::ArrayXXd mhat = m / (1 - std::pow(b1, t));
    Eigen::ArrayXXd vhat = v / (1 - std::pow(b2, t));
    w_ref -= lr * (mhat / (vhat.sqrt() + eps) + wd * w_ref);
    CHECK((p->value - w_ref).abs().maxCoeff() < 1e-14);
  }
  CHECK(opt.step_count() == 5);
}

TEST_CASE("decay is decoupled: zero gradient still shrinks the weights") {
  nn::ParamStore store(2);
  auto p = store.create("w", 1, 3);
  Eigen::ArrayXXd w0 = p->value;
  optim::AdamW opt(store, 1e-2, 0.8, 0.99, 0.1);
  opt.step();  // no gradient accumulated anywhere
  CHECK((p->value - w0 * (1.0 - 1e-2 * 0.1)).abs().maxCoeff() < 1e-15);
}

TEST_CASE("optimizer state round-trips through a fresh instance") {
  nn::ParamStore a(3), b(3);
  auto pa = a.create("w", 2, 3);
  auto pb = b.create("w", 2, 3);
  optim::AdamW oa(a, 5e-3), ob(b, 5e-3);

  Eigen::ArrayXXd g1 = testutil::random_array(2, 3, 7);
  pa->grad = g1;
  oa.step();
  ob.load_state(oa.state());
  CHECK(ob.step_count() == 1);
  pb->value = pa->value;

  // both continue identically from the restored state
  Eigen::ArrayXXd g2 = testutil::random_array(2, 3, 8);
  pa->grad = g2;
  pb->grad = g2;
  oa.step();
  ob.step();
  CHECK((pa->value - pb->value).abs().maxCoeff() == 0.0);
}
