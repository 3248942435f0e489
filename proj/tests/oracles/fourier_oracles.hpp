#pragma once

#include <complex>

#include "ibm/domain.hpp"
#include "ibm/greens.hpp"

namespace oracle {

using cplx = std::complex<double>;

// Outgoing free Green function from its Fourier integral: the imaginary part from the
// delta on |xi| = kappa, the real part as a principal value, with the oscillatory tail
// summed between Bessel zeros and Wynn-accelerated.
cplx free_green_fourier(ibm::Vec2 x, double kappa);

// Faddeev Green function by direct integration of its Fourier representation in polar
// coordinates: radial integral in closed form (exponential integral), angular integral
// by adaptive Gauss-Kronrod split at the singular directions.
cplx faddeev_green_fourier(ibm::Vec2 x, const ibm::ComplexMomentum& k);

// exp(u) E1(u), principal branch.
std::complex<long double> scaled_e1(std::complex<long double> u);

}  // namespace oracle
