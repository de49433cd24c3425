#ifndef SE2_CYCLOTOMIC_HPP
#define SE2_CYCLOTOMIC_HPP

// Exact arithmetic in Z[xi], xi a primitive ell-th root of unity, in the cyclic
// coefficient representation: an element is sum_{t=0}^{ell-1} c_t xi^t with the
// relation sum_t xi^t = 0 left unapplied. Two vectors represent the same ring
// element iff they differ by a constant vector.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace se2 {

class CyclotomicError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// An odd prime ell = 2r + 1. `regular` is caller-asserted and never checked.
class PrimeContext {
 public:
  explicit PrimeContext(unsigned ell, bool regular = true) : ell_(ell), regular_(regular) {
    if (ell < 3 || !is_prime(ell)) throw CyclotomicError("ell must be an odd prime, got " + std::to_string(ell));
  }

  unsigned ell() const { return ell_; }
  unsigned r() const { return (ell_ - 1) / 2; }
  bool regular() const { return regular_; }

  /// Nonnegative residue of t mod ell.
  unsigned mod(long long t) const {
    const long long m = static_cast<long long>(ell_);
    return static_cast<unsigned>(((t % m) + m) % m);
  }

  friend bool operator==(const PrimeContext& a, const PrimeContext& b) { return a.ell_ == b.ell_; }

 private:
  unsigned ell_;
  bool regular_;
};

class CycloElem {
 public:
  explicit CycloElem(const PrimeContext& ctx) : coeffs_(ctx.ell()) {}

  explicit CycloElem(std::vector<mpz_class> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() < 3) throw CyclotomicError("coefficient vector too short");
  }

  static CycloElem constant(const PrimeContext& ctx, const mpz_class& value) {
    CycloElem e(ctx);
    e.coeffs_[0] = value;
    return e;
  }

  /// xi^t.
  static CycloElem root_power(const PrimeContext& ctx, long long t) {
    CycloElem e(ctx);
    e.coeffs_[ctx.mod(t)] = 1;
    return e;
  }

  std::size_t ell() const { return coeffs_.size(); }
  const std::vector<mpz_class>& coeffs() const { return coeffs_; }
  const mpz_class& operator[](std::size_t t) const { return coeffs_.at(t); }

  friend CycloElem operator+(const CycloElem& a, const CycloElem& b) {
    check_same(a, b);
    CycloElem out = a;
    for (std::size_t t = 0; t < a.ell(); ++t) out.coeffs_[t] += b.coeffs_[t];
    return out;
  }

  friend CycloElem operator-(const CycloElem& a, const CycloElem& b) {
    check_same(a, b);
    CycloElem out = a;
    for (std::size_t t = 0; t < a.ell(); ++t) out.coeffs_[t] -= b.coeffs_[t];
    return out;
  }

  /// Cyclic convolution.
  friend CycloElem operator*(const CycloElem& a, const CycloElem& b) {
    check_same(a, b);
    const std::size_t n = a.ell();
    std::vector<mpz_class> out(n);
    for (std::size_t s = 0; s < n; ++s) {
      if (a.coeffs_[s] == 0) continue;
      for (std::size_t t = 0; t < n; ++t) out[(s + t) % n] += a.coeffs_[s] * b.coeffs_[t];
    }
    return CycloElem(std::move(out));
  }

  CycloElem scaled(const mpz_class& k) const {
    CycloElem out = *this;
    for (auto& c : out.coeffs_) c *= k;
    return out;
  }

  /// Coordinates in the basis 1, xi, ..., xi^{ell-2} after eliminating
  /// xi^{ell-1} = -(1 + xi + ... + xi^{ell-2}).
  std::vector<mpz_class> canonical() const {
    std::vector<mpz_class> out(coeffs_.begin(), coeffs_.end() - 1);
    for (auto& c : out) c -= coeffs_.back();
    return out;
  }

  /// Equality as ring elements.
  bool ring_equal(const CycloElem& other) const {
    check_same(*this, other);
    return canonical() == other.canonical();
  }

  /// Exact vector equality (same cyclic representation).
  friend bool operator==(const CycloElem&, const CycloElem&) = default;

 private:
  static void check_same(const CycloElem& a, const CycloElem& b) {
    if (a.ell() != b.ell()) throw CyclotomicError("cyclotomic length mismatch");
  }

  std::vector<mpz_class> coeffs_;
};

inline CycloElem mul(const CycloElem& a, const CycloElem& b) { return a * b; }

/// epsilon_i = 1 - xi^i for 1 <= i <= r.
inline CycloElem epsilon(const PrimeContext& ctx, unsigned i) {
  if (i < 1 || i > ctx.r())
    throw CyclotomicError("epsilon index " + std::to_string(i) + " outside 1.." + std::to_string(ctx.r()));
  return CycloElem::constant(ctx, 1) - CycloElem::root_power(ctx, i);
}

/// Coefficients c_t(I) of prod_{i in I} (1 - xi^i), t = 0 .. ell-1.
inline std::vector<mpz_class> c_coeffs(const PrimeContext& ctx, const std::set<unsigned>& subset) {
  if (subset.empty()) throw CyclotomicError("subset must be nonempty");
  CycloElem product = CycloElem::constant(ctx, 1);
  for (unsigned i : subset) product = product * epsilon(ctx, i);
  return product.coeffs();
}

/// Least c >= 0 with 2c = r^2 + r(r+1)/2 (mod ell).
inline unsigned smallest_c(const PrimeContext& ctx) {
  const unsigned long long r = ctx.r();
  const unsigned rhs = ctx.mod(static_cast<long long>(r * r + r * (r + 1) / 2));
  // 2^{-1} = r + 1 mod ell.
  return ctx.mod(static_cast<long long>(rhs) * static_cast<long long>(r + 1));
}

/// lambda = xi^c * epsilon_1 * ... * epsilon_r.
inline CycloElem lambda(const PrimeContext& ctx) {
  CycloElem out = CycloElem::root_power(ctx, smallest_c(ctx));
  for (unsigned i = 1; i <= ctx.r(); ++i) out = out * epsilon(ctx, i);
  return out;
}

/// Whether ell = (-1)^r lambda^2 holds in Z[xi].
inline bool lambda_check(const PrimeContext& ctx) {
  const CycloElem l = lambda(ctx);
  const CycloElem rhs = (l * l).scaled(ctx.r() % 2 == 0 ? 1 : -1);
  return CycloElem::constant(ctx, ctx.ell()).ring_equal(rhs);
}

/// Unit (-xi)^j * epsilon_1^{a_1} ... epsilon_r^{a_r}, with j taken mod 2 ell.
class UnitExp {
 public:
  UnitExp(const PrimeContext& ctx, long long j, std::vector<long long> a)
      : ell_(ctx.ell()), j_(0), a_(std::move(a)) {
    if (a_.size() != ctx.r()) throw CyclotomicError("unit exponent vector must have length r");
    const long long m = 2LL * ell_;
    j_ = static_cast<unsigned>(((j % m) + m) % m);
  }

  static UnitExp identity(const PrimeContext& ctx) { return UnitExp(ctx, 0, std::vector<long long>(ctx.r(), 0)); }
  static UnitExp minus_xi(const PrimeContext& ctx) { return UnitExp(ctx, 1, std::vector<long long>(ctx.r(), 0)); }
  static UnitExp eps(const PrimeContext& ctx, unsigned i) {
    if (i < 1 || i > ctx.r()) throw CyclotomicError("epsilon index out of range");
    std::vector<long long> a(ctx.r(), 0);
    a[i - 1] = 1;
    return UnitExp(ctx, 0, std::move(a));
  }

  unsigned ell() const { return ell_; }
  unsigned j() const { return j_; }
  const std::vector<long long>& a() const { return a_; }
  bool is_identity() const {
    return j_ == 0 && std::all_of(a_.begin(), a_.end(), [](long long v) { return v == 0; });
  }

  friend bool operator==(const UnitExp&, const UnitExp&) = default;

 private:
  friend UnitExp unit_mul(const UnitExp&, const UnitExp&);
  friend UnitExp unit_inv(const UnitExp&);
  UnitExp() = default;

  unsigned ell_ = 0;
  unsigned j_ = 0;
  std::vector<long long> a_;
};

inline UnitExp unit_mul(const UnitExp& x, const UnitExp& y) {
  if (x.ell_ != y.ell_) throw CyclotomicError("unit prime mismatch");
  UnitExp out;
  out.ell_ = x.ell_;
  out.j_ = (x.j_ + y.j_) % (2 * x.ell_);
  out.a_.resize(x.a_.size());
  for (std::size_t i = 0; i < x.a_.size(); ++i) out.a_[i] = x.a_[i] + y.a_[i];
  return out;
}

inline UnitExp unit_inv(const UnitExp& x) {
  UnitExp out;
  out.ell_ = x.ell_;
  out.j_ = (2 * x.ell_ - x.j_) % (2 * x.ell_);
  out.a_.resize(x.a_.size());
  for (std::size_t i = 0; i < x.a_.size(); ++i) out.a_[i] = -x.a_[i];
  return out;
}

inline UnitExp unit_pow(const UnitExp& x, long long n) {
  UnitExp out = UnitExp::identity(PrimeContext(x.ell()));
  const UnitExp base = n < 0 ? unit_inv(x) : x;
  for (long long i = 0; i < (n < 0 ? -n : n); ++i) out = unit_mul(out, base);
  return out;
}

}  // namespace se2

#endif
