#pragma once

#include <cmath>
#include <cstdlib>
#include <string>

#include "coiso/rational.hpp"

namespace coiso {

// Default relative pivot threshold for rank decisions in float mode.
inline constexpr double kDefaultRelTol = 1e-9;

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rat> {
  static constexpr bool exact = true;
  static bool is_zero(const Rat& x) { return x.is_zero(); }
  static std::string str(const Rat& x) { return x.str(); }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static bool is_zero(double x) { return x == 0.0; }
  static std::string str(double x) { return std::to_string(x); }
};

// Customization point: lift an exact rational constant into the scalar ring T.
// JetScalar specializes this in its own header.
template <class T>
struct FromRat;

template <>
struct FromRat<Rat> {
  static Rat get(const Rat& q) { return q; }
};

template <>
struct FromRat<double> {
  static double get(const Rat& q) { return q.to_double(); }
};

template <class T>
T from_rat(const Rat& q) {
  return FromRat<T>::get(q);
}

inline double abs_value(double x) { return std::fabs(x); }
inline Rat abs_value(const Rat& x) { return abs(x); }

}  // namespace coiso
