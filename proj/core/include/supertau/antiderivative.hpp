#pragma once

#include "supertau/diffpoly.hpp"
#include "supertau/errors.hpp"

namespace supertau {

// True when p only involves even jets, theta jets and exponentials.
bool is_free(const DiffPoly& p);

// x-derivative restricted to the free subalgebra; no rewrite rules needed.
DiffPoly dx_free(const DiffPoly& p);

// q with dx(q) = p and no generator-free term. Throws NotATotalDerivative
// when p is not exact and UnsupportedGenerators outside the free subalgebra.
DiffPoly antiderivative(const DiffPoly& p);

}  // namespace supertau
