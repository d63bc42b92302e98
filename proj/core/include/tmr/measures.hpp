#pragma once

#include <span>

// Scalar summaries of one window channel. All take the full series.
namespace tmr::measures {

double mean(std::span<const double> s);
double max(std::span<const double> s);
double min(std::span<const double> s);
double variance(std::span<const double> s);  // population (divide by N)
double stddev(std::span<const double> s);
double range(std::span<const double> s);
/// Q3 - Q1, quantiles by linear interpolation between order statistics
/// at position q * (N - 1).
double iqr(std::span<const double> s);
double quantile(std::span<const double> s, double q);
/// Number of k with s[k] * s[k+1] < 0.
double sign_changes(std::span<const double> s);
double energy(std::span<const double> s);
/// Shannon entropy of the one-sided DFT power spectrum (bins 1..N/2,
/// normalised to sum 1) divided by ln(N/2), so the result lies in [0, 1].
/// A series with no non-DC power has entropy 0.
double spectral_entropy(std::span<const double> s);

}  // namespace tmr::measures
