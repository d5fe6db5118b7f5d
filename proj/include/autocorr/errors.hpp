#pragma once

#include <stdexcept>
#include <string>

namespace autocorr {

// Base class for every error the library throws deliberately.  Callers that
// want to treat "bad input" separately from "bug" can catch this one type.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroFunction : Error {
    explicit ZeroFunction(const std::string& what = "function is identically zero")
        : Error(what) {}
};

struct NonpositiveHeight : Error {
    explicit NonpositiveHeight(const std::string& what = "bump height must be positive")
        : Error(what) {}
};

struct InsufficientMass : Error {
    explicit InsufficientMass(const std::string& what = "not enough mass in source cell")
        : Error(what) {}
};

struct SameCell : Error {
    explicit SameCell(const std::string& what = "source and destination are the same cell")
        : Error(what) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& what = "dimension mismatch")
        : Error(what) {}
};

struct ZeroColumn : Error {
    explicit ZeroColumn(const std::string& what = "shift matrix has a zero column")
        : Error(what) {}
};

struct DegenerateD : Error {
    explicit DegenerateD(const std::string& what = "Brascamp-Lieb constant is degenerate")
        : Error(what) {}
};

struct NotGuaranteedFinite : Error {
    explicit NotGuaranteedFinite(const std::string& what =
                                     "shift matrix does not guarantee a finite functional")
        : Error(what) {}
};

struct TooLarge : Error {
    explicit TooLarge(const std::string& what = "requested enumeration is too large")
        : Error(what) {}
};

struct ShapeMismatch : Error {
    explicit ShapeMismatch(const std::string& what = "function shape does not match")
        : Error(what) {}
};

}  // namespace autocorr
