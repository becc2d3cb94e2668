#pragma once

#include <span>

namespace sensing {

/// log I0(x), finite for every finite x.
double log_bessel_i0(double x);

/// log(sum_i exp(v_i)); -inf for an empty span.
double log_sum_exp(std::span<const double> values);

/// log(sum_i w_i exp(v_i)) with nonnegative weights.
double log_sum_exp_weighted(std::span<const double> values, std::span<const double> weights);

}  // namespace sensing
