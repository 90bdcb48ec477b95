#pragma once

#include <doctest.h>

#include "adjustmcmc/node_set.hpp"

namespace adjustmcmc {
inline doctest::String toString(const NodeSet& s) { return s.to_string().c_str(); }
}  // namespace adjustmcmc
