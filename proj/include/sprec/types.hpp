// SPDX-License-Identifier: Apache-2.0
//
// sprec - geometry-based spatial precoding for space-time block coded MIMO links
// ------------------------------------------------------------------------

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sprec
{
    using cplx = std::complex<double>;
    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;
    using RMatrix = Eigen::MatrixXd;
    using RVector = Eigen::VectorXd;

    inline constexpr double pi = 3.14159265358979323846;

    inline double deg2rad(double deg) { return deg * pi / 180.0; }
    inline double rad2deg(double rad) { return rad * 180.0 / pi; }

    // Argument outside the mathematical domain of an operation.
    class DomainError : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    // Covariance with an eigenvalue below the clamping tolerance.
    class NotPsdError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Iterative solver failed to converge.
    class NumericError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Codebook violates the scalar-identity distance structure or unitarity.
    class PropertyError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Requested value lies outside the range covered by the data.
    class RangeError : public std::range_error
    {
    public:
        using std::range_error::range_error;
    };

    class DimensionError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    class UnsupportedDesign : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };
} // namespace sprec
