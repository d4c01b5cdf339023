#include "typesemi/rational.hpp"
#include <cctype>
#include <stdexcept>

namespace typesemi {

ExtQ operator+(const ExtQ& a, const ExtQ& b) {
  if (a.inf || b.inf) return ExtQ::infinity();
  return ExtQ(Q(a.v + b.v));
}

ExtQ operator*(std::int64_t k, const ExtQ& a) {
  if (k == 0) return ExtQ(0);
  if (a.inf) return ExtQ::infinity();
  return ExtQ(Q(Q(static_cast<long>(k)) * a.v));
}

bool operator<=(const ExtQ& a, const ExtQ& b) {
  if (b.inf) return true;
  if (a.inf) return false;
  return a.v <= b.v;
}

bool operator<(const ExtQ& a, const ExtQ& b) { return !(b <= a); }

bool operator==(const ExtQ& a, const ExtQ& b) {
  if (a.inf || b.inf) return a.inf == b.inf;
  return a.v == b.v;
}

std::string to_string(const Q& q) {
  Q c = q;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string to_string(const ExtQ& q) { return q.inf ? "inf" : to_string(q.v); }

Q parse_rational(const std::string& s) {
  if (s.empty()) throw InputError("empty rational");
  for (char c : s)
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-'))
      throw InputError("malformed rational '" + s + "'");
  Q q;
  if (q.set_str(s, 10) != 0) throw InputError("malformed rational '" + s + "'");
  if (q.get_den() == 0) throw InputError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

ExtQ parse_ext(const std::string& s) {
  if (s == "inf" || s == "INF") return ExtQ::infinity();
  return ExtQ(parse_rational(s));
}

Z lcm_of_denominators(const std::vector<Q>& xs) {
  Z l = 1;
  for (const auto& x : xs) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

Z fibonacci(unsigned n) {
  Z f;
  mpz_fib_ui(f.get_mpz_t(), n);
  return f;
}

}  // namespace typesemi

namespace typesemi {

QPhi QPhi::conjugate() const { return QPhi(p + q, -q); }

Q QPhi::norm() const { return p * p + p * q - q * q; }

QPhi QPhi::inverse() const {
  Q n = norm();
  if (n == 0) throw std::domain_error("inverse of zero in Q(phi)");
  auto c = conjugate();
  return QPhi(c.p / n, c.q / n);
}

// p + q*phi = (A + B*sqrt5) / 2 with A = 2p + q, B = q
int QPhi::sign() const {
  Q a = 2 * p + q, b = q;
  int sa = sgn(a), sb = sgn(b);
  if (sa >= 0 && sb >= 0) return (sa > 0 || sb > 0) ? 1 : 0;
  if (sa <= 0 && sb <= 0) return -1;
  int d = sgn(Q(a * a - 5 * b * b));  // never 0: sqrt5 is irrational
  return sa > 0 ? d : -d;
}

QPhi operator+(const QPhi& a, const QPhi& b) { return QPhi(a.p + b.p, a.q + b.q); }
QPhi operator-(const QPhi& a, const QPhi& b) { return QPhi(a.p - b.p, a.q - b.q); }
QPhi operator*(const QPhi& a, const QPhi& b) {
  return QPhi(a.p * b.p + a.q * b.q, a.p * b.q + a.q * b.p + a.q * b.q);
}
bool operator==(const QPhi& a, const QPhi& b) { return a.p == b.p && a.q == b.q; }
bool operator<(const QPhi& a, const QPhi& b) { return (b - a).sign() > 0; }

std::string to_string(const QPhi& x) {
  if (x.q == 0) return to_string(x.p);
  std::string s = x.p == 0 ? "" : to_string(x.p);
  if (x.q > 0 && !s.empty()) s += "+";
  return s + to_string(x.q) + "*phi";
}

QPhi parse_qphi(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  auto at = s.find("*phi");
  if (at == std::string::npos) return QPhi(parse_rational(s));
  if (at + 4 != s.size()) throw InputError("bad Q(phi) value: " + text);
  // split before the sign that starts the phi coefficient
  std::size_t cut = 0;
  for (std::size_t i = at; i-- > 1;)
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != '/') {
      cut = i;
      break;
    }
  Q p = cut ? parse_rational(s.substr(0, cut)) : Q(0);
  std::string qs = s.substr(cut, at - cut);
  if (!qs.empty() && qs[0] == '+') qs = qs.substr(1);
  return QPhi(p, parse_rational(qs));
}

}  // namespace typesemi
