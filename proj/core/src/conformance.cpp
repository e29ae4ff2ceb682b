#include "slpn/conformance.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

namespace slpn {

UemscReport uemsc(const StochasticLog& log, const Sts& rg, const UemscOptions& options) {
  auto start = std::chrono::steady_clock::now();
  UemscReport report;
  report.rg_states = rg.state_count();
  for (const auto& [trace, count] : log.entries()) {
    UemscRow row;
    row.trace = trace;
    row.count = count;
    row.log_probability = static_cast<double>(count) / static_cast<double>(log.total());
    report.rows.push_back(std::move(row));
  }

  auto evaluate = [&](std::size_t i) {
    auto& row = report.rows[i];
    row.model_probability = trace_probability(rg, row.trace, options.analysis).value;
    row.contribution = std::max(row.log_probability - row.model_probability, 0.0);
  };

  unsigned threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(report.rows.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < report.rows.size(); ++i) evaluate(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        while (true) {
          std::size_t i = next.fetch_add(1);
          if (i >= report.rows.size()) return;
          try {
            evaluate(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(report.rows.size());
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  double excess = 0.0;
  for (const auto& row : report.rows) excess += row.contribution;
  report.value = std::clamp(1.0 - excess, 0.0, 1.0);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

UemscReport uemsc(const StochasticLog& log, const Lsp& lsp, const UemscOptions& options,
                  Diagnostics* diagnostics) {
  auto start = std::chrono::steady_clock::now();
  auto rg = build_reachability_graph(lsp, options.analysis.reachability, diagnostics);
  auto report = uemsc(log, rg, options);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace slpn
