#include "slp/vec.hpp"

namespace slp {

Vec vec_zero(const FieldPtr& f, int n) { return Vec(static_cast<size_t>(n), Scalar(f)); }

Vec vec_add(const Vec& x, const Vec& y) {
  Vec r(x);
  for (size_t i = 0; i < r.size(); ++i) r[i] += y[i];
  return r;
}

Vec vec_sub(const Vec& x, const Vec& y) {
  Vec r(x);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
  return r;
}

Vec vec_scale(const Scalar& c, const Vec& x) {
  Vec r(x);
  for (auto& v : r) v *= c;
  return r;
}

Vec vec_neg(const Vec& x) {
  Vec r(x);
  for (auto& v : r) v = -v;
  return r;
}

bool vec_eq(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) return false;
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] != y[i]) return false;
  return true;
}

bool vec_is_zero(const Vec& x) {
  for (const auto& v : x)
    if (!v.is_zero()) return false;
  return true;
}

int vec_compare(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
  for (size_t i = 0; i < x.size(); ++i) {
    // exact equality is cheap; fall back to the sign oracle only on difference
    if (x[i] == y[i]) continue;
    return x[i].compare(y[i]);
  }
  return 0;
}

}  // namespace slp
