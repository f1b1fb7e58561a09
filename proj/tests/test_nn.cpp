#include "avocodo/nn.hpp"

#include "doctest.h"
#include "test_util.hpp"

using namespace avocodo;
using ad::Var;

namespace {

// Straight-loop cross-correlation reference, same geometry semantics as
// conv1d_raw: weight (out_ch, in_ch/groups * kernel), row layout c*kernel+j.
Eigen::ArrayXXd ref_conv(const Eigen::ArrayXXd& x, const Eigen::ArrayXXd& w,
                         const Eigen::ArrayXd& b, int kernel, nn::ConvOpts o) {
  const long in_ch = x.rows(), L = x.cols(), out_ch = w.rows();
  const long in_pg = in_ch / o.groups, out_pg = out_ch / o.groups;
  Eigen::ArrayXXd xpad = Eigen::ArrayXXd::Zero(in_ch, L + o.pad_left + o.pad_right);
  xpad.middleCols(o.pad_left, L) = x;
  const long L_out = nn::conv_out_len(L, kernel, o.stride, o.dilation, o.pad_left, o.pad_right);
  Eigen::ArrayXXd y = Eigen::ArrayXXd::Zero(out_ch, L_out);
  for (long oc = 0; oc < out_ch; ++oc) {
    const long g = oc / out_pg;
    for (long t = 0; t < L_out; ++t) {
      double acc = b.size() ? b(oc) : 0.0;
      for (long c = 0; c < in_pg; ++c)
        for (int j = 0; j < kernel; ++j)
          acc += w(oc, c * kernel + j) * xpad(g * in_pg + c, t * o.stride + j * o.dilation);
      y(oc, t) = acc;
    }
  }
  return y;
}

}  // namespace

TEST_CASE("conv_out_len matches the geometry formula") {
  CHECK(nn::conv_out_len(100, 3, 1, 1, 1, 1) == 100);
  CHECK(nn::conv_out_len(100, 5, 4, 1, 2, 2) == 25);
  CHECK(nn::conv_out_len(64, 3, 1, 5, 5, 5) == 64);
  CHECK(nn::conv_out_len(10, 4, 2, 1, 0, 0) == 4);
}

TEST_CASE("conv1d_raw matches the loop reference across geometries") {
  struct Geo { int in_ch, out_ch, kernel, stride, dilation, groups, pl, pr; };
  const Geo geos[] = {
      {1, 2, 3, 1, 1, 1, 1, 1}, {4, 6, 5, 2, 1, 2, 2, 2},
      {3, 3, 3, 1, 4, 1, 4, 4}, {4, 4, 7, 3, 1, 4, 3, 3},
  };
  int seed = 100;
  for (const auto& g : geos) {
    Var x = ad::constant(testutil::random_array(g.in_ch, 20, seed++));
    Var w = ad::constant(testutil::random_array(g.out_ch, (g.in_ch / g.groups) * g.kernel, seed++));
    Var b = ad::constant(testutil::random_array(g.out_ch, 1, seed++));
    nn::ConvOpts o{g.stride, g.dilation, g.groups, g.pl, g.pr};
    Var y = nn::conv1d_raw(x, w, b, g.kernel, o);
    Eigen::ArrayXXd ref = ref_conv(x->value, w->value, b->value.col(0), g.kernel, o);
    REQUIRE(y->cols() == ref.cols());
    CHECK((y->value - ref).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("grouped conv equals two independent half convs") {
  Var x = ad::constant(testutil::random_array(4, 16, 20));
  Var w = ad::constant(testutil::random_array(4, 2 * 3, 21));
  nn::ConvOpts o;
  o.groups = 2;
  o.pad_left = o.pad_right = 1;
  Var y = nn::conv1d_raw(x, w, nullptr, 3, o);

  nn::ConvOpts o1;
  o1.pad_left = o1.pad_right = 1;
  Var x_lo = ad::constant(Eigen::ArrayXXd(x->value.topRows(2)));
  Var x_hi = ad::constant(Eigen::ArrayXXd(x->value.bottomRows(2)));
  Var w_lo = ad::constant(Eigen::ArrayXXd(w->value.topRows(2)));
  Var w_hi = ad::constant(Eigen::ArrayXXd(w->value.bottomRows(2)));
  Var y_lo = nn::conv1d_raw(x_lo, w_lo, nullptr, 3, o1);
  Var y_hi = nn::conv1d_raw(x_hi, w_hi, nullptr, 3, o1);
  CHECK((y->value.topRows(2) - y_lo->value).abs().maxCoeff() < 1e-12);
  CHECK((y->value.bottomRows(2) - y_hi->value).abs().maxCoeff() < 1e-12);
}

TEST_CASE("conv1d_raw gradients (weights, bias, input)") {
  Var x = ad::parameter(testutil::random_array(3, 12, 30));
  Var w = ad::parameter(testutil::random_array(4, 3 * 5, 31));
  Var b = ad::parameter(testutil::random_array(4, 1, 32));
  nn::ConvOpts o;
  o.stride = 2;
  o.pad_left = o.pad_right = 2;
  auto fn = [&] { return ad::mean_sq_err_to(nn::conv1d_raw(x, w, b, 5, o), 0.3); };
  CHECK(testutil::grad_check({x, w, b}, fn, 1e-4, 6) < 1e-5);
}

TEST_CASE("conv_transpose1d_raw matches its adjoint definition and gradients") {
  Var x = ad::parameter(testutil::random_array(2, 6, 40));
  Var w = ad::parameter(testutil::random_array(2, 3 * 4, 41));
  Var b = ad::parameter(testutil::random_array(3, 1, 42));
  Var y = nn::conv_transpose1d_raw(x, w, b, 3, 4, 2, 1, 1);
  REQUIRE(y->cols() == (6 - 1) * 2 + 4 - 2);
  // y[oc, t*stride + j] += w[c, oc*kernel + j] * x[c, t], then crop padding
  Eigen::ArrayXXd full = Eigen::ArrayXXd::Zero(3, (6 - 1) * 2 + 4);
  for (long c = 0; c < 2; ++c)
    for (int oc = 0; oc < 3; ++oc)
      for (int j = 0; j < 4; ++j)
        for (long t = 0; t < 6; ++t)
          full(oc, t * 2 + j) += w->value(c, oc * 4 + j) * x->value(c, t);
  Eigen::ArrayXXd ref = full.middleCols(1, y->cols());
  ref.colwise() += b->value.col(0);
  CHECK((y->value - ref).abs().maxCoeff() < 1e-12);

  auto fn = [&] {
    return ad::mean_sq_err_to(nn::conv_transpose1d_raw(x, w, b, 3, 4, 2, 1, 1), -0.2);
  };
  CHECK(testutil::grad_check({x, w, b}, fn, 1e-4, 6) < 1e-5);
}

TEST_CASE("weight_norm forward formula and init identity") {
  Var v = ad::parameter(testutil::random_array(3, 7, 50));
  Var g = ad::parameter(testutil::random_array(3, 1, 51).abs() + 0.5);
  Var w = nn::weight_norm(v, g);
  for (long r = 0; r < 3; ++r) {
    const double norm = v->value.row(r).matrix().norm();
    CHECK((w->value.row(r) - v->value.row(r) * (g->value(r, 0) / norm)).abs().maxCoeff() < 1e-12);
    CHECK(w->value.row(r).matrix().norm() == doctest::Approx(g->value(r, 0)));
  }
  CHECK(testutil::grad_check({v, g}, [&] { return ad::mean_sq_err_to(nn::weight_norm(v, g), 0.1); },
                             1e-4, 6) < 1e-4);
}

TEST_CASE("Conv1d layer keeps length with same padding; effective weight equals v at init") {
  nn::ParamStore store(1);
  nn::Conv1d conv(store, "c", 2, 3, 5, 1, 2);
  Var x = ad::constant(testutil::random_array(2, 17, 60));
  Var y = conv(x);
  CHECK(y->rows() == 3);
  CHECK(y->cols() == 17);
  // g initialized to ||v_row|| makes weight_norm the identity at init
  Var w0 = nn::weight_norm(store.at("c.v"), store.at("c.g"));
  CHECK((w0->value - store.at("c.v")->value).abs().maxCoeff() < 1e-12);
}

TEST_CASE("ConvTranspose1d layer output length is exactly L * stride") {
  nn::ParamStore store(2);
  nn::ConvTranspose1d up(store, "u", 4, 2, 16, 8);
  Var x = ad::constant(testutil::random_array(4, 5, 61));
  CHECK(up(x)->cols() == 40);
  nn::ConvTranspose1d up2(store, "u2", 4, 2, 4, 2);
  CHECK(up2(x)->cols() == 10);
}

TEST_CASE("ParamStore is deterministic and counts scalars") {
  nn::ParamStore a(99), b(99);
  auto pa = a.create("x", 3, 4);
  auto pb = b.create("x", 3, 4);
  CHECK((pa->value - pb->value).abs().maxCoeff() == 0.0);
  a.create_const("y", 2, 2, 0.5);
  CHECK(a.total_scalars() == 16);
  CHECK(a.contains("y"));
  CHECK_THROWS(a.at("missing"));
}
