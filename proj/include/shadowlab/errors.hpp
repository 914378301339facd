#pragma once

#include <stdexcept>
#include <string>

namespace shadowlab {

// Base of every error thrown by the library. The CLI maps these to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error { using Error::Error; };
class DegenerateBasisError : public Error { using Error::Error; };
class ParameterError : public Error { using Error::Error; };
class PolytopeError : public Error { using Error::Error; };
class SamplingError : public Error { using Error::Error; };
class GeometryError : public Error { using Error::Error; };
class PreconditionError : public Error { using Error::Error; };
class WalkError : public Error { using Error::Error; };
class SearchError : public Error { using Error::Error; };
class ConstructionError : public Error { using Error::Error; };
class InputError : public Error { using Error::Error; };

} // namespace shadowlab
