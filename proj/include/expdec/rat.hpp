#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace expdec {

// Exact rational on int64 with __int128 intermediates. Denominators in this
// project stay small (block lengths, enumeration counts), so no bignum.
struct Rat {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rat() = default;
  Rat(std::int64_t n) : num(n), den(1) {}
  Rat(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::domain_error("Rat: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  static Rat from128(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("Rat: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw std::overflow_error("Rat: overflow");
    Rat r;
    r.num = static_cast<std::int64_t>(n);
    r.den = static_cast<std::int64_t>(d);
    return r;
  }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return from128((__int128)a.num * b.den + (__int128)b.num * a.den,
                   (__int128)a.den * b.den);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return from128((__int128)a.num * b.den - (__int128)b.num * a.den,
                   (__int128)a.den * b.den);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return from128((__int128)a.num * b.num, (__int128)a.den * b.den);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num == 0) throw std::domain_error("Rat: division by zero");
    return from128((__int128)a.num * b.den, (__int128)a.den * b.num);
  }
  Rat operator-() const {
    Rat r = *this;
    r.num = -r.num;
    return r;
  }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return (__int128)a.num * b.den < (__int128)b.num * a.den;
  }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  // parses "p", "p/q", or a plain decimal like "0.25"
  static Rat parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
      if (fp.size() > 15) fp = fp.substr(0, 15);
      std::int64_t scale = 1;
      for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
      bool neg = !ip.empty() && ip[0] == '-';
      std::int64_t whole = ip.empty() || ip == "-" ? 0 : std::stoll(ip);
      std::int64_t frac = fp.empty() ? 0 : std::stoll(fp);
      __int128 n = (__int128)(neg ? -whole : whole) * scale + frac;
      return from128(neg ? -n : n, scale);
    }
    return Rat(std::stoll(s));
  }

  // exact square root if this is the square of a rational, else nullopt-like
  bool sqrt_exact(Rat& out) const {
    if (num < 0) return false;
    auto isqrt = [](std::int64_t v) -> std::int64_t {
      if (v < 0) return -1;
      std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
      while (r > 0 && r * r > v) --r;
      while ((r + 1) * (r + 1) <= v) ++r;
      return r;
    };
    std::int64_t sn = isqrt(num), sd = isqrt(den);
    if (sn * sn == num && sd * sd == den) {
      out = Rat(sn, sd);
      return true;
    }
    return false;
  }
};

}  // namespace expdec
