#include "epslog/rational.hpp"

#include <stdexcept>

namespace epslog {

Rat parse_rat(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  auto ok_int = [](const std::string& s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  auto slash = text.find('/');
  if (slash == std::string::npos) {
    if (!ok_int(text, true))
      throw std::invalid_argument("bad rational literal: " + text);
    return Rat(Int(text));
  }
  std::string num = text.substr(0, slash);
  std::string den = text.substr(slash + 1);
  if (!ok_int(num, true) || !ok_int(den, false))
    throw std::invalid_argument("bad rational literal: " + text);
  Int d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: " + text);
  return Rat(Int(num), d);
}

std::string rat_to_string(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace epslog
