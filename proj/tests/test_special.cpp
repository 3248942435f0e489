#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/hankel.hpp>

#include "ibm/special.hpp"

using namespace ibm;
constexpr double pi = std::numbers::pi;

TEST_CASE("integer-order J, Y, I, K agree with boost")
{
    std::vector<ldouble> J, Y, I, K;
    for (double x : {1e-3, 0.3, 1.0, 5.0, 30.0}) {
        bessel_jy(static_cast<ldouble>(x), 40, J, Y);
        bessel_ik(static_cast<ldouble>(x), 40, I, K);
        for (int m : {0, 1, 2, 7, 20}) {
            double jb = boost::math::cyl_bessel_j(m, x), yb = boost::math::cyl_neumann(m, x);
            double ib = boost::math::cyl_bessel_i(m, x), kb = boost::math::cyl_bessel_k(m, x);
            CHECK(std::abs(double(J[m]) - jb) <= 1e-13 * std::max(1.0, std::abs(jb)));
            if (std::abs(yb) < 1e250) CHECK(std::abs(double(Y[m]) - yb) <= 1e-12 * std::max(1.0, std::abs(yb)));
            if (ib < 1e250 && ib > 1e-250) CHECK(std::abs(double(I[m]) - ib) <= 1e-12 * ib);
            if (kb < 1e250) CHECK(std::abs(double(K[m]) - kb) <= 1e-12 * kb);
        }
    }
}

TEST_CASE("complex J, Y satisfy the Wronskian")
{
    for (double x : {0.5, 3.0, 16.0, 30.0}) {
        lcplx z(x, 0.3 * x);
        std::vector<lcplx> J, Y;
        bessel_jy(z, 40, J, Y);
        for (int m = 0; m < 39; m += 3) {
            lcplx w = J[m + 1] * Y[m] - J[m] * Y[m + 1];
            CHECK(double(std::abs(w * static_cast<ldouble>(pi) * z / 2.0L - 1.0L)) < 1e-10);
        }
    }
}

TEST_CASE("hankel functions on the real axis")
{
    for (double x : {0.01, 0.7, 4.0, 25.0}) {
        auto h0 = boost::math::cyl_hankel_1(0, x), h1 = boost::math::cyl_hankel_1(1, x);
        CHECK(std::abs(hankel1_0(x) - cplx(h0)) < 1e-13 * std::abs(h0));
        CHECK(std::abs(hankel1_1(x) - cplx(h1)) < 1e-13 * std::abs(h1));
    }
}

TEST_CASE("entire exponential integral: Ein(x) = E1(x) + ln x + gamma")
{
    for (double x : {0.1, 1.0, 3.0, 10.0}) {
        double ref = boost::math::expint(1, x) + std::log(x) + euler_gamma;
        CHECK(std::abs(ein(x) - ref) < 1e-13 * std::max(1.0, ref));
    }
    // Ein(-x) = -Ei(x) + ln x + gamma for x > 0
    double x = 2.0;
    double ref = -boost::math::expint(x) + std::log(x) + euler_gamma;
    CHECK(std::abs(ein(-x) - ref) < 1e-13 * std::abs(ref));
}
