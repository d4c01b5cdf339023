#pragma once
#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace typesemi {

using Q = mpq_class;
using Z = mpz_class;

// Nonnegative rational or +infinity. INF absorbs addition.
struct ExtQ {
  bool inf = false;
  Q v = 0;

  ExtQ() = default;
  ExtQ(const Q& q) : v(q) {}
  ExtQ(long q) : v(q) {}
  static ExtQ infinity() {
    ExtQ e;
    e.inf = true;
    return e;
  }
  bool finite() const { return !inf; }
};

ExtQ operator+(const ExtQ& a, const ExtQ& b);
ExtQ operator*(std::int64_t k, const ExtQ& a);
bool operator<=(const ExtQ& a, const ExtQ& b);
bool operator<(const ExtQ& a, const ExtQ& b);
bool operator==(const ExtQ& a, const ExtQ& b);

std::string to_string(const Q& q);
std::string to_string(const ExtQ& q);
Q parse_rational(const std::string& s);
ExtQ parse_ext(const std::string& s);

Z lcm_of_denominators(const std::vector<Q>& xs);
Z fibonacci(unsigned n);

// p + q*phi in Q(phi), phi^2 = phi + 1.
struct QPhi {
  Q p = 0, q = 0;
  QPhi() = default;
  QPhi(const Q& a, const Q& b = 0) : p(a), q(b) {
    p.canonicalize();
    q.canonicalize();
  }
  static QPhi phi() { return QPhi(0, 1); }
  QPhi conjugate() const;  // phi -> 1 - phi
  Q norm() const;          // x * conjugate(x), rational
  QPhi inverse() const;    // throws on zero
  int sign() const;
};
QPhi operator+(const QPhi& a, const QPhi& b);
QPhi operator-(const QPhi& a, const QPhi& b);
QPhi operator*(const QPhi& a, const QPhi& b);
bool operator==(const QPhi& a, const QPhi& b);
bool operator<(const QPhi& a, const QPhi& b);
std::string to_string(const QPhi& x);  // "p/q+r/s*phi"
QPhi parse_qphi(const std::string& s);

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A search or closure outgrew its configured cap.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace typesemi
