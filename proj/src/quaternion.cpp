#include "qla/quaternion.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <system_error>

namespace qla {

Quaternion inverse(const Quaternion& q, double zero_threshold) {
  const double n = norm(q);
  if (!(n > zero_threshold)) {
    throw Error(Errc::ZeroQuaternion, "cannot invert quaternion " + to_string(q));
  }
  // Scale first so tiny or huge norms do not under/overflow in |q|^2.
  const Quaternion u = q / n;
  return conj(u) / n;
}

bool is_similar(const Quaternion& p, const Quaternion& q, double tol) {
  return std::abs(norm(p) - norm(q)) <= tol && std::abs(real(p) - real(q)) <= tol;
}

Complex complex_representative(const Quaternion& q) {
  return {q.w, imag_norm(q)};
}

Quaternion conjugate_by(const Quaternion& q, const Quaternion& r) {
  return r * q * inverse(r);
}

namespace {

[[noreturn]] void parse_fail(std::string_view text, std::string_view why) {
  throw Error(Errc::ParseError, "bad quaternion literal '" + std::string(text) + "': " + std::string(why));
}

}  // namespace

Quaternion parse_quaternion(std::string_view text) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_ws();
  if (pos == text.size()) parse_fail(text, "empty");

  Quaternion q;
  bool first = true;
  while (true) {
    skip_ws();
    if (pos == text.size()) break;
    double sign = 1.0;
    if (text[pos] == '+' || text[pos] == '-') {
      sign = text[pos] == '-' ? -1.0 : 1.0;
      ++pos;
    } else if (!first) {
      parse_fail(text, "expected '+' or '-' between terms");
    }
    skip_ws();
    if (pos == text.size()) parse_fail(text, "dangling sign");

    double coeff = 1.0;
    bool has_number = false;
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text.data() + pos;
      const char* end = text.data() + text.size();
      auto [ptr, ec] = std::from_chars(begin, end, coeff);
      if (ec != std::errc{}) parse_fail(text, "bad number");
      pos += static_cast<std::size_t>(ptr - begin);
      has_number = true;
    }
    char unit = '\0';
    if (pos < text.size() && (text[pos] == 'i' || text[pos] == 'j' || text[pos] == 'k')) {
      unit = text[pos++];
    }
    if (!has_number && unit == '\0') parse_fail(text, "expected number or unit");
    if (pos < text.size() && text[pos] != '+' && text[pos] != '-' &&
        !std::isspace(static_cast<unsigned char>(text[pos]))) {
      parse_fail(text, "unexpected character");
    }
    coeff *= sign;
    switch (unit) {
      case 'i': q.x += coeff; break;
      case 'j': q.y += coeff; break;
      case 'k': q.z += coeff; break;
      default: q.w += coeff; break;
    }
    first = false;
  }
  return q;
}

std::string to_string(const Quaternion& q) {
  const std::array<double, 4> parts{q.w, q.x, q.y, q.z};
  const std::array<const char*, 4> units{"", "i", "j", "k"};
  std::string out;
  for (std::size_t n = 0; n < parts.size(); ++n) {
    if (parts[n] == 0.0) continue;
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), parts[n]);
    std::string num(buf.data(), ptr);
    // Unit coefficients print as "i", "-j".
    if (n > 0 && std::abs(parts[n]) == 1.0) num.pop_back();
    if (!out.empty() && (num.empty() || num.front() != '-')) out += '+';
    out += num;
    out += units[n];
  }
  return out.empty() ? "0" : out;
}

}  // namespace qla
