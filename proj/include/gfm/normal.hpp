#pragma once

namespace gfm {

// Density of the standard normal distribution.
double std_normal_pdf(double x);

// CDF of the standard normal distribution, evaluated through the
// complementary error function so the lower tail keeps full relative
// accuracy (no cancellation for x << 0). Absolute error < 1e-15.
// Accepts +/-infinity, mapping to 1/0.
double std_normal_cdf(double x);

// Inverse CDF on (0,1): AS241-class rational approximation polished by one
// Newton step against std_normal_cdf, so cdf and inv_cdf are mutually
// consistent to ~1e-15. Throws std::domain_error for p <= 0 or p >= 1.
double std_normal_inv_cdf(double p);

} // namespace gfm
