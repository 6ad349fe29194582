#include "powercast/scalar.hpp"

#include <cctype>
#include <stdexcept>

namespace powercast {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
  }
  mpz_class z(std::string(s), 10);
  return negative ? mpz_class(-z) : z;
}

}  // namespace

Scalar parse_scalar(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw std::invalid_argument("empty rational");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(s.substr(0, slash), text);
    std::string_view den_text = s.substr(slash + 1);
    if (!all_digits(den_text)) {
      throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    }
    mpz_class den(std::string(den_text), 10);
    if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    Scalar q(num, den);
    q.canonicalize();
    return q;
  }

  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    std::string_view int_digits = int_part;
    if (!int_digits.empty() && (int_digits.front() == '-' || int_digits.front() == '+')) {
      int_digits.remove_prefix(1);
    }
    if ((!int_digits.empty() && !all_digits(int_digits)) || !all_digits(frac_part) ||
        (int_digits.empty() && frac_part.empty())) {
      throw std::invalid_argument("malformed decimal: '" + std::string(text) + "'");
    }
    mpz_class whole = int_digits.empty() ? mpz_class(0) : mpz_class(std::string(int_digits), 10);
    mpz_class frac(std::string(frac_part), 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_part.size());
    Scalar q(whole * scale + frac, scale);
    q.canonicalize();
    return negative ? Scalar(-q) : q;
  }

  return Scalar(parse_integer(s, text));
}

std::string format_scalar(const Scalar& value) { return value.get_str(10); }

std::string format_decimal(const Scalar& value, int digits) {
  if (digits < 0) digits = 0;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  Scalar scaled = abs(value) * scale + Scalar(1, 2);
  mpz_class rounded = scaled.get_num() / scaled.get_den();
  std::string body = rounded.get_str(10);
  if (digits > 0) {
    if (body.size() <= static_cast<std::size_t>(digits)) {
      body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    }
    body.insert(body.size() - static_cast<std::size_t>(digits), 1, '.');
  }
  return (value < 0 && rounded != 0) ? "-" + body : body;
}

Scalar times_pow2(const Scalar& value, std::size_t k) {
  Scalar out;
  mpq_mul_2exp(out.get_mpq_t(), value.get_mpq_t(), static_cast<mp_bitcnt_t>(k));
  return out;
}

Scalar pow2_minus_one(std::size_t k) {
  mpz_class z;
  mpz_setbit(z.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
  z -= 1;
  return Scalar(z);
}

}  // namespace powercast
