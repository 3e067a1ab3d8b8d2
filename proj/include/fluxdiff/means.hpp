#pragma once

// Scalar mean values used by two-point fluxes. The logarithmic mean
// (a+ - a-) / (log a+ - log a-) is evaluated with a truncated series when the
// two arguments are close, switching at u = ((a- - a+)/(a- + a+))^2 < 1e-4.

#include <cmath>
#include <sstream>

#include "fluxdiff/errors.hpp"
#include "fluxdiff/flux_counter.hpp"

namespace fluxdiff {

inline constexpr double kLogMeanSeriesThreshold = 1.0e-4;

namespace detail {

inline void check_positive_pair(const char* fn, double a_minus, double a_plus) {
  if (!(a_minus > 0.0) || !(a_plus > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << fn << ": arguments must be positive, got (" << a_minus << ", " << a_plus << ")";
    throw DomainError(msg.str());
  }
}

// u = f^2 with f = (xi - 1)/(xi + 1), xi = a-/a+, written with a single division.
inline double logmean_u(double a_minus, double a_plus) {
  return (a_minus * (a_minus - 2.0 * a_plus) + a_plus * a_plus) /
         (a_minus * (a_minus + 2.0 * a_plus) + a_plus * a_plus);
}

inline double logmean_series_denominator(double u) {
  return 2.0 + u * (2.0 / 3.0 + u * (2.0 / 5.0 + u * (2.0 / 7.0)));
}

inline double logmean_fast(double a_minus, double a_plus) {
  const double u = logmean_u(a_minus, a_plus);
  if (u < kLogMeanSeriesThreshold) {
    return (a_minus + a_plus) / logmean_series_denominator(u);
  }
  return (a_plus - a_minus) / std::log(a_plus / a_minus);
}

inline double inv_logmean_fast(double a_minus, double a_plus) {
  const double u = logmean_u(a_minus, a_plus);
  if (u < kLogMeanSeriesThreshold) {
    return logmean_series_denominator(u) / (a_minus + a_plus);
  }
  return std::log(a_plus / a_minus) / (a_plus - a_minus);
}

// Same branches with log(a-) and log(a+) supplied by the caller.
inline double logmean_fast_logs(double a_minus, double a_plus, double log_minus, double log_plus) {
  const double u = logmean_u(a_minus, a_plus);
  if (u < kLogMeanSeriesThreshold) {
    return (a_minus + a_plus) / logmean_series_denominator(u);
  }
  return (a_plus - a_minus) / (log_plus - log_minus);
}

inline double inv_logmean_fast_logs(double a_minus, double a_plus, double log_minus, double log_plus) {
  const double u = logmean_u(a_minus, a_plus);
  if (u < kLogMeanSeriesThreshold) {
    return logmean_series_denominator(u) / (a_minus + a_plus);
  }
  return (log_plus - log_minus) / (a_plus - a_minus);
}

// Order-independent wrappers; the flux kernels must be bitwise symmetric in
// their two states.
inline double logmean_sym(double a, double b) {
  count_logmean();
  return a <= b ? logmean_fast(a, b) : logmean_fast(b, a);
}

inline double inv_logmean_sym(double a, double b) {
  count_logmean();
  return a <= b ? inv_logmean_fast(a, b) : inv_logmean_fast(b, a);
}

inline double logmean_sym_logs(double a, double b, double log_a, double log_b) {
  count_logmean();
  return a <= b ? logmean_fast_logs(a, b, log_a, log_b) : logmean_fast_logs(b, a, log_b, log_a);
}

inline double inv_logmean_sym_logs(double a, double b, double log_a, double log_b) {
  count_logmean();
  return a <= b ? inv_logmean_fast_logs(a, b, log_a, log_b) : inv_logmean_fast_logs(b, a, log_b, log_a);
}

}  // namespace detail

inline double arithmetic_mean(double a_minus, double a_plus) { return 0.5 * (a_plus + a_minus); }

// {{a b}} = (a+ b- + a- b+) / 2
inline double product_mean(double a_minus, double a_plus, double b_minus, double b_plus) {
  return 0.5 * (a_plus * b_minus + a_minus * b_plus);
}

// Direct evaluation of the defining quotient. Loses accuracy for a- ~ a+.
inline double logmean_reference(double a_minus, double a_plus) {
  detail::check_positive_pair("logmean_reference", a_minus, a_plus);
  if (a_minus == a_plus) {
    throw DomainError("logmean_reference: undefined for equal arguments");
  }
  return (a_plus - a_minus) / (std::log(a_plus) - std::log(a_minus));
}

inline double logmean_ismail_roe(double a_minus, double a_plus) {
  detail::check_positive_pair("logmean_ismail_roe", a_minus, a_plus);
  const double xi = a_minus / a_plus;
  const double f = (xi - 1.0) / (xi + 1.0);
  const double u = f * f;
  double big_f;
  if (u < kLogMeanSeriesThreshold) {
    big_f = 1.0 + u / 3.0 + u * u / 5.0 + u * u * u / 7.0;
  } else {
    big_f = (std::log(xi) / 2.0) / f;
  }
  return (a_minus + a_plus) / (2.0 * big_f);
}

// The arguments are ordered before evaluation so that the result is bitwise
// symmetric; the two orderings of the log branch round differently.
inline double logmean_optimized(double a_minus, double a_plus) {
  detail::check_positive_pair("logmean_optimized", a_minus, a_plus);
  return detail::logmean_sym(a_minus, a_plus);
}

// Variant replacing the series-branch division by a polynomial in u.
inline double logmean_polynomial(double a_minus, double a_plus) {
  detail::check_positive_pair("logmean_polynomial", a_minus, a_plus);
  const double u = detail::logmean_u(a_minus, a_plus);
  if (u < kLogMeanSeriesThreshold) {
    return (a_minus + a_plus) *
           (0.5 + u * (-1.0 / 6.0 + u * (-2.0 / 45.0 + u * (-22.0 / 945.0))));
  }
  return (a_plus - a_minus) / std::log(a_plus / a_minus);
}

inline double inv_logmean_optimized(double a_minus, double a_plus) {
  detail::check_positive_pair("inv_logmean_optimized", a_minus, a_plus);
  return detail::inv_logmean_sym(a_minus, a_plus);
}

}  // namespace fluxdiff
