#pragma once

#include <vector>

#include "slp/scalar.hpp"

namespace slp {

// Coordinate vector in the ambient space of a root system.
using Vec = std::vector<Scalar>;

Vec vec_zero(const FieldPtr& f, int n);
Vec vec_add(const Vec& x, const Vec& y);
Vec vec_sub(const Vec& x, const Vec& y);
Vec vec_scale(const Scalar& c, const Vec& x);
Vec vec_neg(const Vec& x);
bool vec_eq(const Vec& x, const Vec& y);
bool vec_is_zero(const Vec& x);

// Lexicographic comparison through the real embedding; a strict total order
// on vectors over one field.  Used only to fix deterministic orderings.
int vec_compare(const Vec& x, const Vec& y);

struct VecLess {
  bool operator()(const Vec& x, const Vec& y) const { return vec_compare(x, y) < 0; }
};

}  // namespace slp
