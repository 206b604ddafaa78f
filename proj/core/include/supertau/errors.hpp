#pragma once

#include <stdexcept>
#include <string>

namespace supertau {

// Base of all library errors; kind() names the failure class for reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what) : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

#define SUPERTAU_ERROR(Name)                                          \
    class Name : public Error {                                       \
    public:                                                           \
        explicit Name(const std::string& what) : Error(#Name, what) {} \
    }

SUPERTAU_ERROR(AlgebraError);
SUPERTAU_ERROR(NotATotalDerivative);
SUPERTAU_ERROR(NotInvertible);
SUPERTAU_ERROR(UnsupportedGenerators);
SUPERTAU_ERROR(DimensionMismatch);
SUPERTAU_ERROR(ValidationError);
SUPERTAU_ERROR(SolveError);
SUPERTAU_ERROR(DivisibilityError);
SUPERTAU_ERROR(TruncationTooSmall);
SUPERTAU_ERROR(UnsupportedOrder);
SUPERTAU_ERROR(WindowError);

#undef SUPERTAU_ERROR

}  // namespace supertau
