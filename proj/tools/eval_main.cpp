// Objective evaluation of resynthesized speech:
//   eval --ref DIR --deg DIR --out report.json
// Pairs files by name; emits per-file and aggregate
// {f0_rmse, vuv_fpr, vuv_fnr, mcd, ssim}.

#include "avocodo/metrics.hpp"
#include "avocodo/wav.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace avocodo;

int main(int argc, char** argv) {
  CLI::App app{"objective speech metrics"};

  std::string ref_dir, deg_dir, out_path = "report.json";
  app.add_option("--ref", ref_dir, "reference wav directory")->required()->check(CLI::ExistingDirectory);
  app.add_option("--deg", deg_dir, "degraded/resynthesized wav directory")->required()->check(CLI::ExistingDirectory);
  app.add_option("--out", out_path, "JSON report path");

  CLI11_PARSE(app, argc, argv);

  try {
    nlohmann::json files = nlohmann::json::array();
    double sum_f0 = 0, sum_fpr = 0, sum_fnr = 0, sum_mcd = 0, sum_ssim = 0;
    long n = 0;
    std::vector<fs::path> refs;
    for (const auto& e : fs::directory_iterator(ref_dir))
      if (e.is_regular_file() && e.path().extension() == ".wav") refs.push_back(e.path());
    std::sort(refs.begin(), refs.end());

    for (const auto& rp : refs) {
      const fs::path dp = fs::path(deg_dir) / rp.filename();
      if (!fs::exists(dp)) {
        std::cerr << "skipping " << rp.filename().string() << " (no counterpart)\n";
        continue;
      }
      wav::Audio ref = wav::read(rp.string());
      wav::Audio deg = wav::read(dp.string());
      const long T = std::min(ref.samples.size(), deg.samples.size());
      Eigen::ArrayXd x = ref.samples.head(T), y = deg.samples.head(T);

      const auto fx = metrics::extract_f0(x, ref.sample_rate);
      const auto fy = metrics::extract_f0(y, deg.sample_rate);
      bool empty = false;
      const double f0 = metrics::f0_rmse(fx, fy, &empty);
      const auto [fpr, fnr] = metrics::vuv_rates(fx, fy);
      const double mcd_db = metrics::mcd(x, y, ref.sample_rate);
      const double ssim = metrics::spec_ssim(x, y, ref.sample_rate);

      files.push_back({{"file", rp.filename().string()}, {"f0_rmse", f0},
                       {"f0_overlap_empty", empty}, {"vuv_fpr", fpr}, {"vuv_fnr", fnr},
                       {"mcd", mcd_db}, {"ssim", ssim}});
      sum_f0 += f0; sum_fpr += fpr; sum_fnr += fnr; sum_mcd += mcd_db; sum_ssim += ssim;
      ++n;
    }
    if (n == 0) throw std::runtime_error("no file pairs evaluated");

    nlohmann::json report{{"files", files},
                          {"aggregate", {{"f0_rmse", sum_f0 / n}, {"vuv_fpr", sum_fpr / n},
                                         {"vuv_fnr", sum_fnr / n}, {"mcd", sum_mcd / n},
                                         {"ssim", sum_ssim / n}, {"count", n}}}};
    std::ofstream os(out_path);
    os << report.dump(2) << "\n";
    std::cout << report["aggregate"].dump() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
