#include "flowlab/rational.hpp"

#include <cctype>
#include <sstream>

namespace flowlab {

TimeQ TimeQ::parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("TimeQ::parse: empty string");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    return TimeQ(num, den);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return TimeQ(BigInt(s), BigInt(1));
  std::string whole = s.substr(0, dot);
  std::string frac = s.substr(dot + 1);
  for (char c : frac) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("TimeQ::parse: bad decimal: " + s);
  }
  bool neg = !whole.empty() && whole[0] == '-';
  if (!whole.empty() && (whole[0] == '+' || whole[0] == '-')) whole = whole.substr(1);
  if (whole.empty()) whole = "0";
  BigInt scale = 1;
  for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
  BigInt num = BigInt(whole) * scale + (frac.empty() ? BigInt(0) : BigInt(frac));
  if (neg) num = -num;
  return TimeQ(num, scale);
}

BigInt TimeQ::floor() const {
  BigInt n = num(), d = den();
  BigInt q = n / d;
  if (n < 0 && q * d != n) --q;
  return q;
}

std::string TimeQ::str() const {
  std::ostringstream os;
  os << num();
  if (den() != 1) os << '/' << den();
  return os.str();
}

std::string TimeQ::decimal(int significant_digits) const {
  if (v_ == 0) return "0";
  BigInt n = num(), d = den();
  bool neg = n < 0;
  if (neg) n = -n;
  // Scale so the integer part of n/d has `significant_digits` digits.
  int exp10 = 0;
  while (n < d) { n *= 10; --exp10; }
  while (n >= d * 10) { d *= 10; ++exp10; }
  // Now 1 <= n/d < 10; emit digits.
  std::string digits;
  for (int i = 0; i < significant_digits; ++i) {
    BigInt q = n / d;
    digits += static_cast<char>('0' + q.convert_to<int>());
    n = (n - q * d) * 10;
  }
  // Round the last digit (half-up) using the next digit.
  if (n / d >= 5) {
    int i = static_cast<int>(digits.size()) - 1;
    while (i >= 0) {
      if (digits[i] != '9') { ++digits[i]; break; }
      digits[i] = '0';
      --i;
    }
    if (i < 0) { digits.insert(digits.begin(), '1'); ++exp10; digits.pop_back(); }
  }
  // Trim trailing zeros (keep at least one digit).
  while (digits.size() > 1 && digits.back() == '0') digits.pop_back();

  std::string out = neg ? "-" : "";
  if (exp10 >= 0 && exp10 < significant_digits + 4) {
    if (static_cast<int>(digits.size()) <= exp10 + 1) {
      out += digits + std::string(exp10 + 1 - digits.size(), '0');
    } else {
      out += digits.substr(0, exp10 + 1) + "." + digits.substr(exp10 + 1);
    }
  } else if (exp10 < 0 && exp10 > -5) {
    out += "0." + std::string(-exp10 - 1, '0') + digits;
  } else {
    out += digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    out += "e" + std::to_string(exp10);
  }
  return out;
}

BigInt isqrt(const BigInt& x) {
  if (x < 0) throw std::domain_error("isqrt of negative");
  if (x == 0) return 0;
  BigInt r = x, prev = 0;
  // Newton iteration; converges fast and exactly with integer division.
  BigInt guess = 1;
  BigInt t = x;
  while (t > 1) { t >>= 2; guess <<= 1; }
  r = guess;
  while (true) {
    BigInt next = (r + x / r) / 2;
    if (next >= r) break;
    r = next;
  }
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

}  // namespace flowlab
