#pragma once

#include "dfo/structures.hpp"

namespace dfo::test {

// The six-element 2-data sample used throughout the tests:
//   a=(1,2) b=(1,3) c=(3,2) d=(5,6) e=(4,3) f=(2,7), no predicates.
// d shares no value with anyone; e reaches the rest only through b's 3.
inline DataStructure sample6() {
  return DataStructure({"a", "b", "c", "d", "e", "f"}, 2,
                       {1, 2, 1, 3, 3, 2, 5, 6, 4, 3, 2, 7}, {});
}

// What a radius-2 view of `a` looks like: d and e carry fresh values.
inline DataStructure sample6_view2_of_a() {
  return DataStructure({"a", "b", "c", "d", "e", "f"}, 2,
                       {1, 2, 1, 3, 3, 2, 10, 11, 8, 9, 2, 7}, {});
}

} // namespace dfo::test
