// Times the serial reference driver against the OpenMP driver and checks that
// both produce identical run records.
//
//   bench_experiment [config] [repetitions]

#include <chrono>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "coopbandit/config.hpp"
#include "coopbandit/experiment.hpp"

using coopbandit::ExperimentResult;

namespace {

template <typename F>
double time_ms(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

bool same_records(const ExperimentResult& a, const ExperimentResult& b) {
  if (a.policies.size() != b.policies.size()) return false;
  for (std::size_t p = 0; p < a.policies.size(); ++p)
    if (a.policies[p].runs != b.policies[p].runs) return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  auto config = argc > 1 ? coopbandit::load_config(argv[1])
                         : coopbandit::make_config(coopbandit::table1_environment());
  const int reps = argc > 2 ? std::stoi(argv[2]) : 3;

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::cout << "policies=" << config.policies.size() << " runs=" << config.num_runs
            << " horizon=" << config.horizon << " threads=" << threads << "\n";

  double serial_best = 1e300, parallel_best = 1e300;
  bool identical = true;
  for (int r = 0; r < reps; ++r) {
    ExperimentResult serial{.config = config}, parallel{.config = config};
    serial_best = std::min(serial_best, time_ms([&] { serial = coopbandit::run_experiment_serial(config); }));
    parallel_best = std::min(parallel_best, time_ms([&] { parallel = coopbandit::run_experiment(config); }));
    identical = identical && same_records(serial, parallel);
  }
  std::cout << "serial   " << serial_best << " ms\n"
            << "parallel " << parallel_best << " ms\n"
            << "speedup  " << serial_best / parallel_best << "x\n"
            << "identical " << (identical ? "yes" : "NO") << "\n";
  return identical ? 0 : 1;
}
