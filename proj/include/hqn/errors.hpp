#pragma once

#include <stdexcept>
#include <string>

namespace hqn {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define HQN_DEFINE_ERROR(Name)                      \
    class Name : public Error {                     \
    public:                                         \
        explicit Name(const std::string& what)      \
            : Error(#Name ": " + what) {}           \
    }

HQN_DEFINE_ERROR(DivisionByZero);
HQN_DEFINE_ERROR(ShapeError);
HQN_DEFINE_ERROR(NotInteriorError);
HQN_DEFINE_ERROR(NotSymplecticError);
HQN_DEFINE_ERROR(NotPolarError);
HQN_DEFINE_ERROR(DegenerateLocusError);
HQN_DEFINE_ERROR(DomainError);
HQN_DEFINE_ERROR(SingularBoundaryError);
HQN_DEFINE_ERROR(NoSingularStratumError);
HQN_DEFINE_ERROR(StepSizeUnderflow);
HQN_DEFINE_ERROR(ExtrapolationError);
HQN_DEFINE_ERROR(DegenerateOrbitError);
HQN_DEFINE_ERROR(SingularPointError);
HQN_DEFINE_ERROR(CertificateFailure);

#undef HQN_DEFINE_ERROR

}  // namespace hqn
