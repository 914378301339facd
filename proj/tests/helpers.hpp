#pragma once

#include <initializer_list>
#include <vector>

#include "shadowlab/linalg.hpp"

inline shadowlab::Vec V(std::initializer_list<long> xs) {
    shadowlab::Vec v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

inline shadowlab::Rat R(long p, long q = 1) { return shadowlab::ratio(p, q); }
