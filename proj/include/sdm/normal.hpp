#pragma once

// Standard-normal distribution helpers.

namespace sdm {

// Quantile function (inverse CDF), Wichura's PPND16 rational approximation,
// accurate to ~1e-15 for p in (0,1).  Throws validation_error outside (0,1).
double norm_ppf(double p);

// Lower-tail CDF.
double norm_cdf(double z);

// Upper-tail probability P(Z > z).
double norm_sf(double z);

}  // namespace sdm
