#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace imp {

/// Unbounded integer used by the reference semantics and the stack machine.
using Int = boost::multiprecision::cpp_int;

/// A 32-bit machine word. Signedness is a property of the static type, not of
/// the word itself.
using Word32 = std::uint32_t;

inline std::string to_string(const Int &v) { return v.str(); }

/// Reduce an unbounded integer modulo 2^32.
inline Word32 wrap32(const Int &v) {
  Int m = v & Int(0xFFFFFFFFu);  // two's complement semantics for negatives
  return static_cast<Word32>(m);
}

inline std::int32_t as_signed(Word32 w) { return static_cast<std::int32_t>(w); }

}  // namespace imp
