#pragma once

namespace tumorstab {

/// Modified spherical Bessel function of the first kind, i_l(x) = sqrt(pi/(2x)) I_{l+1/2}(x).
///
/// Power series for x < (l+1)/2, otherwise Miller backward recurrence
/// normalised by i_0(x) = sinh(x)/x. Throws RangeError when i_0 overflows.
double bessel_i_spherical(int l, double x);

}  // namespace tumorstab
