// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the SpectraCast Project.

#pragma once

#include <stdexcept>
#include <string>

namespace spectracast {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two objects were expected to share a wavelength grid but do not.
class GridMismatch : public Error {
public:
    using Error::Error;
};

/// Image/cube/map dimensions disagree.
class ShapeMismatch : public Error {
public:
    using Error::Error;
};

/// A tabulated function was empty where data was required.
class EmptyTable : public Error {
public:
    using Error::Error;
};

/// A matrix that must be inverted is singular (or numerically rank deficient).
class SingularSystem : public Error {
public:
    using Error::Error;
};

/// Requested basis count is outside the valid range for the data.
class BadBasisCount : public Error {
public:
    using Error::Error;
};

/// An operation needed training samples but none were supplied.
class EmptyTrainingSet : public Error {
public:
    using Error::Error;
};

/// Prediction was requested from a model that has not been fitted.
class ModelNotFitted : public Error {
public:
    using Error::Error;
};

/// A spectrum with zero norm where a direction is required.
class DegenerateSpectrum : public Error {
public:
    using Error::Error;
};

/// File does not start with the expected cube magic.
class NotACube : public Error {
public:
    using Error::Error;
};

/// File is structurally damaged (truncated payload, ragged rows, trailing bytes).
class CorruptFile : public Error {
public:
    using Error::Error;
};

/// File uses a variant of a format this library does not read.
class UnsupportedFormat : public Error {
public:
    using Error::Error;
};

/// Raw pixel value outside the declared bit depth.
class BadPixelValue : public Error {
public:
    using Error::Error;
};

/// Random sampling produced no samples.
class EmptySample : public Error {
public:
    using Error::Error;
};

/// Could not open/read/write a file at the OS level.
class IoFailure : public Error {
public:
    using Error::Error;
};

/// Invalid user-supplied configuration (CLI argument level).
class InvalidConfig : public Error {
public:
    using Error::Error;
};

} // namespace spectracast
