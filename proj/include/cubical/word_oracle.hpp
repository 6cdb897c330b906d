#pragma once

#include <string>

#include "cubical/complex.hpp"

namespace cubical {

// Decides null-homotopy of closed paths in one fixed complex and hands out
// a canonical key constant on homotopy classes of paths rel endpoints.
class WordOracle {
 public:
  virtual ~WordOracle() = default;
  virtual bool trivial(const EdgePath& loop) const = 0;
  virtual std::string canonical_key(const EdgePath& p) const = 0;
  // p ~ q rel endpoints. Default: compare canonical keys.
  virtual bool same_class(const EdgePath& p, const EdgePath& q) const {
    return canonical_key(p) == canonical_key(q);
  }
};

}  // namespace cubical
