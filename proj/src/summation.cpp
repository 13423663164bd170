#include "zetaflow/summation.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <string_view>
#include <thread>
#include <vector>

namespace zetaflow {

unsigned workers_from_env() {
  const char* raw = std::getenv("ZETAFLOW_THREADS");
  if (!raw) return 1;
  std::string_view s(raw);
  unsigned v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) return 1;
  return std::min(v, 256u);
}

std::complex<double> reduce_terms(std::size_t count,
                                  const std::function<std::complex<double>(std::size_t)>& term,
                                  const ReductionOptions& options) {
  if (count == 0) return {0.0, 0.0};
  const unsigned workers = std::max(1u, options.workers);

  std::size_t chunks = 0, chunk_len = 0;
  if (options.deterministic) {
    chunk_len = kReductionBlock;
    chunks = (count + chunk_len - 1) / chunk_len;
  } else {
    chunks = std::min<std::size_t>(workers, count);
    chunk_len = (count + chunks - 1) / chunks;
  }

  std::vector<std::complex<double>> partial(chunks);
  std::vector<std::exception_ptr> errors(workers);
  auto run = [&](unsigned w) {
    try {
      for (std::size_t c = w; c < chunks; c += workers) {
        CompensatedSum acc;
        const std::size_t end = std::min(count, (c + 1) * chunk_len);
        for (std::size_t i = c * chunk_len; i < end; ++i) acc.add(term(i));
        partial[c] = acc.value();
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  const unsigned spawned = static_cast<unsigned>(std::min<std::size_t>(workers, chunks));
  if (spawned <= 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < spawned; ++w) pool.emplace_back(run, w);
    run(0);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  CompensatedSum total;
  for (const auto& p : partial) total.add(p);
  return total.value();
}

}  // namespace zetaflow
