#pragma once

// Exact sparse polynomials over arbitrary-precision integers (and Gaussian
// integers), plus the two recurrence families used by the loop series:
//
//   f_0 = 1, f_1 = 0, f_{n+1} = x f_n + f_{n-1}
//   g_0 = x, g_1 = -2, g_{n+1} = x g_n + g_{n-1}

#include <compare>
#include <cstddef>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "loopcorrect/errors.hpp"

namespace loopcorrect {

using BigInt = boost::multiprecision::cpp_int;

template <class T>
struct GaussianInt {
  T re{0};
  T im{0};

  GaussianInt() = default;
  GaussianInt(T r) : re(std::move(r)) {}  // NOLINT: implicit lift from the base ring
  GaussianInt(T r, T i) : re(std::move(r)), im(std::move(i)) {}

  static GaussianInt unit_i() { return {T(0), T(1)}; }

  [[nodiscard]] GaussianInt conj() const { return {re, -im}; }
  [[nodiscard]] T norm() const { return re * re + im * im; }
  [[nodiscard]] bool is_real() const { return im == 0; }

  GaussianInt& operator+=(const GaussianInt& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianInt& operator-=(const GaussianInt& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussianInt& operator*=(const GaussianInt& o) {
    T r = re * o.re - im * o.im;
    T i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  friend GaussianInt operator+(GaussianInt a, const GaussianInt& b) { return a += b; }
  friend GaussianInt operator-(GaussianInt a, const GaussianInt& b) { return a -= b; }
  friend GaussianInt operator*(GaussianInt a, const GaussianInt& b) { return a *= b; }
  friend GaussianInt operator-(const GaussianInt& a) { return {-a.re, -a.im}; }
  friend bool operator==(const GaussianInt& a, const GaussianInt& b) { return a.re == b.re && a.im == b.im; }

  friend std::ostream& operator<<(std::ostream& os, const GaussianInt& z) {
    if (z.im == 0) return os << z.re;
    if (z.re == 0) return os << z.im << 'i';
    os << '(' << z.re;
    if (z.im < 0)
      os << '-' << T(-z.im);
    else
      os << '+' << z.im;
    return os << "i)";
  }
};

using GaussInt = GaussianInt<BigInt>;

namespace detail {

template <class C>
bool is_zero(const C& c) {
  return c == C(0);
}

inline BigInt exact_quotient(const BigInt& a, const BigInt& b) {
  if (b == 0) throw DivisibilityError("division by zero coefficient");
  BigInt q = a / b;
  if (q * b != a) throw DivisibilityError("coefficient division is not exact");
  return q;
}

inline GaussInt exact_quotient(const GaussInt& a, const GaussInt& b) {
  const BigInt n = b.norm();
  if (n == 0) throw DivisibilityError("division by zero coefficient");
  const GaussInt num = a * b.conj();
  return {exact_quotient(num.re, n), exact_quotient(num.im, n)};
}

// Coefficient -> evaluation domain.
template <class V>
V lift(const BigInt& c) {
  if constexpr (std::is_floating_point_v<V>)
    return c.template convert_to<V>();
  else
    return V(c);
}
template <class V>
V lift(const GaussInt& c) {
  return V(c);
}

template <class C>
bool is_negative(const C& c) {
  if constexpr (std::is_same_v<C, BigInt>)
    return c < 0;
  else
    return false;
}

}  // namespace detail

/// Univariate sparse polynomial; no zero coefficients are stored.
template <class C>
class UniPoly {
 public:
  using Coeff = C;
  using Terms = std::map<unsigned, C>;

  UniPoly() = default;
  UniPoly(C constant) { add_term(0, std::move(constant)); }  // NOLINT: constants lift implicitly
  UniPoly(int constant) : UniPoly(C(constant)) {}           // NOLINT

  static UniPoly monomial(C c, unsigned power) {
    UniPoly p;
    p.add_term(power, std::move(c));
    return p;
  }
  static UniPoly x() { return monomial(C(1), 1); }

  /// From ascending coefficients {c0, c1, ...}.
  static UniPoly from_coefficients(const std::vector<C>& coeffs) {
    UniPoly p;
    for (unsigned k = 0; k < coeffs.size(); ++k) p.add_term(k, coeffs[k]);
    return p;
  }

  void add_term(unsigned power, C c) {
    if (detail::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(power, std::move(c));
    if (!inserted) {
      it->second += c;
      if (detail::is_zero(it->second)) terms_.erase(it);
    }
  }

  [[nodiscard]] const Terms& terms() const noexcept { return terms_; }
  [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
  /// -1 for the zero polynomial.
  [[nodiscard]] long degree() const noexcept {
    return terms_.empty() ? -1 : static_cast<long>(terms_.rbegin()->first);
  }
  [[nodiscard]] C coeff(unsigned power) const {
    auto it = terms_.find(power);
    return it == terms_.end() ? C(0) : it->second;
  }
  [[nodiscard]] C leading() const { return terms_.empty() ? C(0) : terms_.rbegin()->second; }

  UniPoly& operator+=(const UniPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  UniPoly& operator-=(const UniPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
  }
  friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
  friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
  friend UniPoly operator-(const UniPoly& a) {
    UniPoly r;
    for (const auto& [k, c] : a.terms_) r.terms_.emplace(k, -c);
    return r;
  }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    UniPoly r;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) r.add_term(ka + kb, ca * cb);
    return r;
  }
  UniPoly& operator*=(const UniPoly& o) { return *this = *this * o; }
  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.terms_ == b.terms_; }

  [[nodiscard]] UniPoly pow(unsigned e) const {
    UniPoly result(C(1)), base = *this;
    while (e != 0) {
      if (e & 1U) result *= base;
      e >>= 1U;
      if (e != 0) base *= base;
    }
    return result;
  }

  /// p(x) -> p(x^k)
  [[nodiscard]] UniPoly substitute_power(unsigned k) const {
    UniPoly r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e * k, c);
    return r;
  }

  /// Horner evaluation; exact for exact V.
  template <class V>
  [[nodiscard]] V eval(const V& x) const {
    V acc = V(0);
    long prev = degree();
    if (prev < 0) return acc;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      for (long k = static_cast<long>(it->first); k < prev; ++k) acc = acc * x;
      acc = acc + detail::lift<V>(it->second);
      prev = static_cast<long>(it->first);
    }
    for (long k = 0; k < prev; ++k) acc = acc * x;
    return acc;
  }

  /// Ascending powers, e.g. "1 + 3*b - 2*b^2".
  [[nodiscard]] std::string render(const std::string& var = "x") const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
      C mag = c;
      bool neg = detail::is_negative(c);
      if (neg) mag = -c;
      if (first)
        os << (neg ? "-" : "");
      else
        os << (neg ? " - " : " + ");
      first = false;
      const bool unit = mag == C(1);
      if (k == 0) {
        os << mag;
        continue;
      }
      if (!unit) os << mag << '*';
      os << var;
      if (k > 1) os << '^' << k;
    }
    return os.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const UniPoly& p) { return os << p.render(); }

 private:
  Terms terms_;
};

using IntPoly = UniPoly<BigInt>;
using GaussPoly = UniPoly<GaussInt>;

/// num = q * den exactly, or DivisibilityError.
template <class C>
UniPoly<C> exact_divide(const UniPoly<C>& num, const UniPoly<C>& den) {
  if (den.is_zero()) throw DivisibilityError("exact_divide: zero divisor");
  const unsigned dd = static_cast<unsigned>(den.degree());
  const C lead = den.leading();
  UniPoly<C> rem = num, quot;
  while (!rem.is_zero() && rem.degree() >= static_cast<long>(dd)) {
    const unsigned shift = static_cast<unsigned>(rem.degree()) - dd;
    const C q = detail::exact_quotient(rem.leading(), lead);
    quot.add_term(shift, q);
    rem -= UniPoly<C>::monomial(q, shift) * den;
  }
  if (!rem.is_zero()) throw DivisibilityError("exact_divide: nonzero remainder " + rem.render());
  return quot;
}

/// Bivariate integer polynomial in (b, g); keys are (power of b, power of g).
class BiPoly {
 public:
  using Key = std::pair<unsigned, unsigned>;

  // Graded order: total degree ascending, then higher b-power first.
  struct GradedOrder {
    bool operator()(const Key& l, const Key& r) const {
      const unsigned tl = l.first + l.second, tr = r.first + r.second;
      if (tl != tr) return tl < tr;
      return l.first > r.first;
    }
  };
  using Terms = std::map<Key, BigInt, GradedOrder>;

  BiPoly() = default;
  BiPoly(BigInt constant) { add_term(0, 0, std::move(constant)); }  // NOLINT
  BiPoly(int constant) : BiPoly(BigInt(constant)) {}               // NOLINT

  void add_term(unsigned beta_power, unsigned gamma_power, BigInt c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(Key{beta_power, gamma_power}, std::move(c));
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Adds b^k * p(g).
  void add_beta_scaled(unsigned beta_power, const IntPoly& gamma_poly) {
    for (const auto& [e, c] : gamma_poly.terms()) add_term(beta_power, e, c);
  }

  [[nodiscard]] const Terms& terms() const noexcept { return terms_; }
  [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
  [[nodiscard]] BigInt coeff(unsigned bp, unsigned gp) const {
    auto it = terms_.find({bp, gp});
    return it == terms_.end() ? BigInt(0) : it->second;
  }
  [[nodiscard]] unsigned beta_degree() const noexcept {
    unsigned d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, k.first);
    return d;
  }

  BiPoly& operator+=(const BiPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, c);
    return *this;
  }
  BiPoly& operator-=(const BiPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k.first, k.second, -c);
    return *this;
  }
  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
  friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    BiPoly r;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
    return r;
  }
  friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.terms_ == b.terms_; }

  /// Multiply by a polynomial in b alone.
  [[nodiscard]] BiPoly times_beta_poly(const IntPoly& p) const {
    BiPoly r;
    for (const auto& [k, c] : terms_)
      for (const auto& [e, pc] : p.terms()) r.add_term(k.first + e, k.second, c * pc);
    return r;
  }

  /// Polynomial in b obtained by fixing g = value.
  template <class V>
  [[nodiscard]] UniPoly<V> at_gamma(const V& value) const {
    std::map<unsigned, V> acc;
    for (const auto& [k, c] : terms_) {
      V gp = V(1);
      for (unsigned j = 0; j < k.second; ++j) gp = gp * value;
      auto [it, inserted] = acc.try_emplace(k.first, V(0));
      it->second = it->second + detail::lift<V>(c) * gp;
    }
    UniPoly<V> r;
    for (auto& [e, v] : acc) r.add_term(e, v);
    return r;
  }

  /// Polynomial in g obtained by fixing b = value.
  [[nodiscard]] IntPoly at_beta(const BigInt& value) const {
    IntPoly r;
    for (const auto& [k, c] : terms_) r.add_term(k.second, c * boost::multiprecision::pow(value, k.first));
    return r;
  }

  template <class V>
  [[nodiscard]] V eval(const V& beta, const V& gamma) const {
    return at_gamma(gamma).eval(beta);
  }

  /// e.g. "1 + 3*b - 2*b^2*g^4"
  [[nodiscard]] std::string render(const std::string& beta_var = "b", const std::string& gamma_var = "g") const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
      const bool neg = c < 0;
      const BigInt mag = neg ? BigInt(-c) : c;
      if (first)
        os << (neg ? "-" : "");
      else
        os << (neg ? " - " : " + ");
      first = false;
      if (k.first == 0 && k.second == 0) {
        os << mag;
        continue;
      }
      bool need_star = false;
      if (mag != 1) {
        os << mag;
        need_star = true;
      }
      auto var = [&](const std::string& name, unsigned p) {
        if (p == 0) return;
        if (need_star) os << '*';
        os << name;
        if (p > 1) os << '^' << p;
        need_star = true;
      };
      var(beta_var, k.first);
      var(gamma_var, k.second);
    }
    return os.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const BiPoly& p) { return os << p.render(); }

 private:
  Terms terms_;
};

namespace detail {

// Write-once-per-key cache of a two-seed recurrence family; extending the
// table under the lock is indistinguishable from recomputation.
class RecurrenceCache {
 public:
  RecurrenceCache(IntPoly seed0, IntPoly seed1) : table_{std::move(seed0), std::move(seed1)} {}

  IntPoly get(std::size_t n) {
    std::lock_guard lock(mutex_);
    while (table_.size() <= n) {
      const std::size_t k = table_.size();
      table_.push_back(IntPoly::x() * table_[k - 1] + table_[k - 2]);
    }
    return table_[n];
  }

 private:
  std::mutex mutex_;
  std::vector<IntPoly> table_;
};

}  // namespace detail

inline IntPoly f_poly(std::size_t n) {
  static detail::RecurrenceCache cache(IntPoly(1), IntPoly());
  return cache.get(n);
}

inline IntPoly g_poly(std::size_t n) {
  static detail::RecurrenceCache cache(IntPoly::x(), IntPoly(-2));
  return cache.get(n);
}

/// f_n(x) by direct recurrence, for floating evaluation inside series terms.
template <class V>
V f_value(std::size_t n, const V& x) {
  V prev = V(1), cur = V(0);  // f_0, f_1
  if (n == 0) return prev;
  for (std::size_t k = 1; k < n; ++k) {
    V next = x * cur + prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

template <class V>
V g_value(std::size_t n, const V& x) {
  V prev = x, cur = V(-2);  // g_0, g_1
  if (n == 0) return prev;
  for (std::size_t k = 1; k < n; ++k) {
    V next = x * cur + prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// f_{n+m-2} == f_n f_m + f_{n-1} f_{m-1} as exact polynomials (n, m >= 1).
inline bool f_product_identity_check(std::size_t n, std::size_t m) {
  if (n < 1 || m < 1) throw ArgumentError("f_product_identity_check: need n, m >= 1");
  return f_poly(n + m - 2) == f_poly(n) * f_poly(m) + f_poly(n - 1) * f_poly(m - 1);
}

/// Checks the identity for every 1 <= n, m <= bound.
inline bool f_product_identity_check_all(std::size_t bound) {
  for (std::size_t n = 1; n <= bound; ++n)
    for (std::size_t m = 1; m <= bound; ++m)
      if (!f_product_identity_check(n, m)) return false;
  return true;
}

/// Binomial coefficient as an exact integer.
inline BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (unsigned j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

}  // namespace loopcorrect
