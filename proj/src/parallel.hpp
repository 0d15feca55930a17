#pragma once

// Partitioned exhaustive enumeration: contiguous index slices, one private
// accumulator per slice, combined by the caller in slice order.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "ffcorr/irreducible.hpp"
#include "ffcorr/main_term.hpp"
#include "kernels.hpp"

namespace ffcorr::detail {

struct Slice {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
};

inline Slice slice_of(std::uint64_t total, unsigned parts, unsigned part) {
  return {total * part / parts, total * (part + 1) / parts};
}

// Calls fn(part, lo, hi) once for each of `parts` slices of [0, total).
template <typename Fn>
void run_partitions(std::uint64_t total, unsigned parts, Fn&& fn) {
  parts = std::max(parts, 1u);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min(parts, hw);
  std::atomic<unsigned> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (unsigned part = next++; part < parts; part = next++) {
      try {
        const Slice s = slice_of(total, parts, part);
        fn(part, s.lo, s.hi);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

// The enumeration domain of a correlation: all monics of degree n, or the
// degree-n irreducibles of the table in index order.
class Domain {
 public:
  Domain(Mode mode, unsigned n, const IrreducibleTable& table) : mode_(mode), n_(n), table_(&table) {
    if (mode == Mode::kPrime) {
      primes_ = table.primes(n);
      size_ = primes_.size();
    } else {
      size_ = table.field().pow(n);
    }
  }
  std::uint64_t size() const noexcept { return size_; }
  std::uint64_t index(std::uint64_t i) const noexcept { return mode_ == Mode::kPrime ? primes_[i] : i; }
  unsigned degree() const noexcept { return n_; }

 private:
  Mode mode_;
  unsigned n_;
  const IrreducibleTable* table_;
  std::span<const std::uint64_t> primes_;
  std::uint64_t size_ = 0;
};

// A shift h (deg h < n) applied to enumeration indices of degree-n monics.
class Shift {
 public:
  Shift(const Poly& h, unsigned n) : p_(h.modulus()), n_(n) {
    const auto c = h.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) digits_[i] = c[i];
    for (unsigned i = 0; i < n && i < 64; ++i) bits_ |= std::uint64_t{digits_[i] & 1u} << i;
    zero_ = h.is_zero();
  }
  std::uint64_t apply(std::uint64_t index) const noexcept {
    if (zero_) return index;
    if (p_ == 2) return index ^ bits_;
    return shifted_index(p_, n_, index, digits_);
  }

 private:
  std::uint32_t p_;
  unsigned n_;
  std::array<std::uint8_t, kMaxDigits> digits_{};
  std::uint64_t bits_ = 0;
  bool zero_ = false;
};

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Values of a multiplicative spec on prime powers of degree <= n, cached
// when the spec is degree-symmetric.
class SpecEvaluator {
 public:
  SpecEvaluator(const FunctionSpec& spec, unsigned n) : spec_(&spec), n_(n) {
    if (!spec.degree_symmetric()) return;
    cache_.resize(n + 1);
    exact_.resize(n + 1);
    for (unsigned d = 1; d <= n; ++d) {
      cache_[d].resize(n / d + 1);
      exact_[d].resize(n / d + 1);
      for (unsigned m = 1; m <= n / d; ++m) {
        cache_[d][m] = spec.value_at_degree(d, m);
        exact_[d][m] = std::llround(cache_[d][m].real());
      }
    }
  }

  Complex value(const PrimePower& pp) const {
    if (!cache_.empty()) return cache_[pp.prime.degree][pp.multiplicity];
    return spec_->value(pp.prime, pp.multiplicity);
  }

  Complex eval(const std::vector<PrimePower>& fact) const {
    Complex v(1.0);
    for (const auto& pp : fact) v *= value(pp);
    return v;
  }

  std::int64_t eval_exact(const std::vector<PrimePower>& fact) const {
    std::int64_t v = 1;
    for (const auto& pp : fact) {
      v *= cache_.empty() ? std::llround(spec_->value(pp.prime, pp.multiplicity).real())
                          : exact_[pp.prime.degree][pp.multiplicity];
      if (v == 0) return 0;
    }
    return v;
  }

 private:
  const FunctionSpec* spec_;
  unsigned n_;
  std::vector<std::vector<Complex>> cache_;
  std::vector<std::vector<std::int64_t>> exact_;
};

}  // namespace ffcorr::detail
