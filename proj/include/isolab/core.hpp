#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <gmpxx.h>

namespace isolab {

inline constexpr const char* kVersion = "0.1.0";

using Int = std::int64_t;
using Vec = std::vector<Int>;   // small integer vector (lattice point, encoding word)
using Rat = mpq_class;
using Big = mpz_class;

// ---------------------------------------------------------------------------
// Error taxonomy. The CLI maps these onto exit codes.
// ---------------------------------------------------------------------------

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EncodingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedFamilyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Small vector helpers
// ---------------------------------------------------------------------------

inline Vec vadd(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec vsub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec vneg(const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

inline Int dot(const Vec& a, const Vec& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Vec unit_vec(int d, int i, Int sign = 1) {
  Vec r(d, 0);
  r[i] = sign;
  return r;
}

struct VecHash {
  std::size_t operator()(const Vec& v) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (Int x : v) {
      std::uint64_t u = static_cast<std::uint64_t>(x);
      for (int k = 0; k < 8; ++k) {
        h ^= (u >> (8 * k)) & 0xffu;
        h *= 1099511628211ull;
      }
    }
    return static_cast<std::size_t>(h);
  }
};

// ---------------------------------------------------------------------------
// Deterministic RNG. std::uniform_int_distribution is implementation-defined,
// so all draws go through these helpers.
// ---------------------------------------------------------------------------

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // uniform in [0, n)
  std::uint64_t uniform(std::uint64_t n) {
    if (n == 0) throw DegenerateInputError("Rng::uniform: n == 0");
    std::uint64_t lim = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = eng_();
    } while (x >= lim);
    return x % n;
  }

  Int uniform_int(Int lo, Int hi) {  // inclusive bounds
    return lo + static_cast<Int>(uniform(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  double uniform_real() { return static_cast<double>(eng_() >> 11) * (1.0 / 9007199254740992.0); }

  bool coin() { return (eng_() & 1u) != 0; }

 private:
  std::mt19937_64 eng_;
};

// ---------------------------------------------------------------------------
// Thread cap + simple deterministic parallel-for (results merged by index).
// ---------------------------------------------------------------------------

inline int& thread_cap_ref() {
  static int cap = [] {
    if (const char* env = std::getenv("ISOLAB_THREADS")) {
      int v = std::atoi(env);
      if (v > 0) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
  }();
  return cap;
}

inline void set_thread_cap(int n) { thread_cap_ref() = std::max(1, n); }

template <typename F>
void parallel_for(std::size_t n, F&& body) {
  int threads = std::min<std::size_t>(thread_cap_ref(), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// Misc numeric helpers
// ---------------------------------------------------------------------------

inline double rat_to_double(const Rat& q) { return q.get_d(); }

inline Rat rat_from_decimal(const std::string& s) {
  // parse "12.3456" / "-0.5" / "3" exactly
  auto dotpos = s.find('.');
  if (dotpos == std::string::npos) return Rat(s);
  std::string digits = s.substr(0, dotpos) + s.substr(dotpos + 1);
  std::size_t frac = s.size() - dotpos - 1;
  Big den = 1;
  for (std::size_t i = 0; i < frac; ++i) den *= 10;
  Rat r(Big(digits), den);
  r.canonicalize();
  return r;
}

inline Big binom(unsigned long n, unsigned long k) {
  Big r;
  if (k > n) return Big(0);
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline Big big_pow(unsigned long base, unsigned long e) {
  Big r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, e);
  return r;
}

// least-squares slope/intercept of y against x
inline std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size());
  double sx = std::accumulate(x.begin(), x.end(), 0.0);
  double sy = std::accumulate(y.begin(), y.end(), 0.0);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double intercept = (sy - slope * sx) / n;
  return {slope, intercept};
}

}  // namespace isolab
