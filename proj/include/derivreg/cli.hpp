#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace derivreg::cli {

enum ExitCode : int
{
  exit_ok = 0,
  exit_validation = 1,
  exit_numerical = 2,
  exit_io = 3,
};

struct VerifyOptions
{
  int quad_nodes = 32;
  int max_dim = 3;
  bool inject_sign_fault = false;
  std::string out_dir; // empty: report only
};

struct SimulateOptions
{
  std::string experiment = "table1"; // table1 | rates | r2
  std::vector<std::size_t> ns;       // empty: experiment default
  std::vector<double> rhos{ 0.0, 0.4, 0.9 };
  std::size_t reps = 1000;
  std::uint64_t seed = 42;
  int workers = 1;
  double h_constant = 1.0;
  int h_denominator = 5;
  double baseline_constant = 1.0;
  int baseline_denominator = 6;
  double trim_low = 0.6;
  double trim_high = 1.4;
  double c = 1.34;
  double sigma = 0.35;
  bool unit_r = false;
  bool dump_replications = false;
  // rates
  int k = 2;
  std::vector<int> ps{ 2, 1, 0 };
  int d = 2;
  double rate_sigma = 0.5;
  std::size_t r2_n = 100000;
  std::string out_dir = ".";
};

struct EstimateOptions
{
  std::string config;
  std::string out_dir = ".";
  int workers = 1;
  bool plan_report = false;
  bool full_cube = false;
  std::size_t grid = 0; // 0: config value or 11
};

struct KernelsOptions
{
  std::vector<int> interior_orders{ 2, 4, 6 };
  std::vector<int> edge_orders{ 1, 2, 3, 4, 5 };
  std::size_t samples = 101;
  std::string out_dir = ".";
};

int run_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);
int run_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);
int run_estimate(const EstimateOptions& opts, std::ostream& out, std::ostream& err);
int run_kernels(const KernelsOptions& opts, std::ostream& out, std::ostream& err);

//! Parses argv and dispatches; maps exceptions onto the exit codes above.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace derivreg::cli
