#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubical {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using SquareId = std::uint32_t;
using HyperplaneId = std::uint32_t;

inline constexpr std::uint32_t kNone = 0xffffffffu;

// Directed edges and darts share one code: code = 2*edge + bit.
// As a directed edge, bit 0 means forward (end0 -> end1).
// The code of a directed edge doubles as the dart at its tail; code^1 is the
// dart at its head, and also the reversed directed edge.
namespace dir {
inline constexpr std::uint32_t make(EdgeId e, bool forward) {
  return 2 * e + (forward ? 0u : 1u);
}
inline constexpr std::uint32_t fwd(EdgeId e) { return 2 * e; }
inline constexpr std::uint32_t rev(std::uint32_t code) { return code ^ 1u; }
inline constexpr EdgeId edge(std::uint32_t code) { return code >> 1; }
inline constexpr bool forward(std::uint32_t code) { return (code & 1u) == 0; }
}  // namespace dir

// Error taxonomy; the CLI maps these onto exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Malformed data or precondition failure (exit 2).
struct StructuralError : Error {
  using Error::Error;
};
// Input that fails to parse (exit 2).
struct ParseError : Error {
  using Error::Error;
};
// A checked property failed; the message names a witness (exit 1).
struct PropertyViolation : Error {
  using Error::Error;
};
// A resource guard tripped; the result is inconclusive, never wrong (exit 3).
struct BudgetError : Error {
  using Error::Error;
};

struct Budgets {
  std::size_t vertices = 1000000;  // fiber products, cover BFS states
  std::size_t orbit = 100000;      // word-orbit enumeration, group closures
};

// Permutation on points 0..n-1. Products compose left-to-right:
// (a * b)(p) = b(a(p)), so loop concatenation maps to the product.
struct Perm {
  std::vector<std::uint32_t> img;

  Perm() = default;
  explicit Perm(std::size_t n) : img(n) {
    for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<std::uint32_t>(i);
  }
  static Perm identity(std::size_t n) { return Perm(n); }

  std::size_t size() const { return img.size(); }
  std::uint32_t operator()(std::uint32_t p) const { return img[p]; }

  bool is_identity() const {
    for (std::size_t i = 0; i < img.size(); ++i)
      if (img[i] != i) return false;
    return true;
  }

  Perm inverse() const {
    Perm r;
    r.img.resize(img.size());
    for (std::uint32_t i = 0; i < img.size(); ++i) r.img[img[i]] = i;
    return r;
  }

  friend Perm operator*(const Perm& a, const Perm& b) {
    Perm r;
    r.img.resize(a.img.size());
    for (std::size_t i = 0; i < a.img.size(); ++i) r.img[i] = b.img[a.img[i]];
    return r;
  }

  bool operator==(const Perm& o) const { return img == o.img; }
  bool operator<(const Perm& o) const { return img < o.img; }

  bool valid() const {
    std::vector<char> seen(img.size(), 0);
    for (auto v : img) {
      if (v >= img.size() || seen[v]) return false;
      seen[v] = 1;
    }
    return true;
  }

  // Order as lcm of cycle lengths.
  std::uint64_t order() const;
};

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b);

}  // namespace cubical
