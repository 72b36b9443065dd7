#pragma once

#include <stdexcept>
#include <string>

namespace mc {

struct Error : std::runtime_error {
    std::string code;
    Error(std::string c, const std::string& what) : std::runtime_error(c + ": " + what), code(std::move(c)) {}
};

#define MC_ERROR_TYPE(Name)                                                 \
    struct Name : Error {                                                   \
        explicit Name(const std::string& what) : Error(#Name, what) {}      \
    }

MC_ERROR_TYPE(ZeroDivision);
MC_ERROR_TYPE(PrecisionRequired);
MC_ERROR_TYPE(SingularExpansion);
MC_ERROR_TYPE(NonDefaultChart);
MC_ERROR_TYPE(SameMarkedPoint);
MC_ERROR_TYPE(NotReduced);
MC_ERROR_TYPE(IncompatibleEndpoints);
MC_ERROR_TYPE(CapExceeded);
MC_ERROR_TYPE(NotNilpotent);
MC_ERROR_TYPE(NotSquareZero);
MC_ERROR_TYPE(InsufficientTruncation);
MC_ERROR_TYPE(NotDegreeZero);
MC_ERROR_TYPE(NotLocal);
MC_ERROR_TYPE(NotRepresentative);
MC_ERROR_TYPE(NotDegreeZeroConcentrated);
MC_ERROR_TYPE(PoleOnOrbit);
MC_ERROR_TYPE(SpecError);

#undef MC_ERROR_TYPE

}  // namespace mc
