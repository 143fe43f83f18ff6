#pragma once

// Exact number types used throughout the library.
//
// All arithmetic that feeds a mathematical decision (lattice kernels, linear
// programs, areas, Maslov indices) is done over arbitrary-precision integers
// and rationals; floating point is never used.

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <sstream>
#include <string>

namespace hfw {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::rational<Int>;

inline Rat rat(long long num, long long den = 1) { return Rat(Int(num), Int(den)); }

inline std::string to_string(const Int& v) { return v.str(); }

inline std::string to_string(const Rat& v) {
  if (v.denominator() == 1) return v.numerator().str();
  return v.numerator().str() + "/" + v.denominator().str();
}

}  // namespace hfw
