#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>

namespace zetaflow {

/// Worker count from ZETAFLOW_THREADS, defaulting to 1.
unsigned workers_from_env();

struct ReductionOptions {
  unsigned workers = workers_from_env();
  /// Fixed block boundaries: identical bits for every worker count.
  bool deterministic = true;
};

inline constexpr std::size_t kReductionBlock = 256;

/// Neumaier-compensated accumulator, real and imaginary parts separately.
class CompensatedSum {
 public:
  void add(std::complex<double> x) {
    add_one(re_, cre_, x.real());
    add_one(im_, cim_, x.imag());
  }
  std::complex<double> value() const { return {re_ + cre_, im_ + cim_}; }

 private:
  static void add_one(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double re_ = 0.0, cre_ = 0.0, im_ = 0.0, cim_ = 0.0;
};

/// Sum of term(0) + ... + term(count-1) in index order.
std::complex<double> reduce_terms(std::size_t count,
                                  const std::function<std::complex<double>(std::size_t)>& term,
                                  const ReductionOptions& options = {});

}  // namespace zetaflow
