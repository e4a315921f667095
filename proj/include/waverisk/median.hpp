#pragma once

#include <utility>

#include "waverisk/signal.hpp"

namespace waverisk {

// Running median with window 2l+1.  Indices within l of either edge reuse
// the first (resp. last) full window, so output length equals input length.
// l = 0 is the identity.  OpenMP across output indices when available.
Signal median_filter(const Signal& x, int l);

// Single-threaded twin of median_filter; kept as the equivalence reference.
Signal median_filter_serial(const Signal& x, int l);

// P(med of 2k-1 i.i.d. >= x) <= binom(2k-1, k) p_max^k where p_max bounds
// each P(X_i >= x).  Clipped to [0, 1].
double median_tail_bound(int k, double p_max);

// Smallest half-width l whose median of 2l+1 draws with tail order gamma has
// finite moments of order L_required: smallest l with (l+1) gamma > L_required
// (strict, since only orders below (l+1) gamma are granted).
int filter_length(double gamma, double L_required);

// lhs = sum_i (med(f+e)_i - med(e)_i - f_i)^2 against the deterministic
// bound rhs = 8 l^2 sum |f_i - f_{i-1}|^2; lhs <= rhs for every realization.
std::pair<double, double> bias_check(const Signal& f, const Signal& e, int l);

}  // namespace waverisk
