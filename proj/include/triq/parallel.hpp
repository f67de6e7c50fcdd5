#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace triq {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  void merge(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline constexpr std::size_t kDefaultBlockSize = 4096;

/// A contiguous range of sample indices. Every block owns the random stream
/// (seed, index), so its contents do not depend on which worker runs it.
struct Block {
  std::size_t index = 0;
  std::size_t begin = 0;
  std::size_t count = 0;
};

/// Runs `work(block)` over all blocks of [0, n) on `workers` threads and hands
/// the partial results to `sink` strictly in block order. Blocks are processed
/// in waves so that at most a few partials per worker are alive at once.
template <class Work, class Sink>
void run_blocks(std::size_t n, std::size_t workers, std::size_t block_size, Work&& work,
                Sink&& sink) {
  using Partial = decltype(work(Block{}));
  block_size = std::max<std::size_t>(block_size, 1);
  workers = std::max<std::size_t>(workers, 1);
  const std::size_t blocks = (n + block_size - 1) / block_size;
  const std::size_t wave = workers * 4;

  auto block_at = [&](std::size_t b) {
    Block blk;
    blk.index = b;
    blk.begin = b * block_size;
    blk.count = std::min(block_size, n - blk.begin);
    return blk;
  };

  for (std::size_t first = 0; first < blocks; first += wave) {
    const std::size_t last = std::min(blocks, first + wave);
    std::vector<std::optional<Partial>> partials(last - first);
    if (workers == 1) {
      for (std::size_t b = first; b < last; ++b) partials[b - first].emplace(work(block_at(b)));
    } else {
      std::atomic<std::size_t> next{first};
      std::vector<std::exception_ptr> errors(workers);
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t b = next++; b < last; b = next++) {
              partials[b - first].emplace(work(block_at(b)));
            }
          } catch (...) {
            errors[w] = std::current_exception();
            next = last;
          }
        });
      }
      for (auto& t : pool) t.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }
    for (auto& p : partials) sink(std::move(*p));
  }
}

}  // namespace triq
