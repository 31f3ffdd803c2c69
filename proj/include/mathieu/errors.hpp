#pragma once

#include <stdexcept>
#include <string>

namespace mathieu {

// Every failure the library reports derives from Error so callers (the CLI in
// particular) can map it to a machine-readable record via kind().
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

#define MATHIEU_DEFINE_ERROR(Name)                                           \
    class Name : public Error {                                              \
    public:                                                                  \
        using Error::Error;                                                  \
        const char* kind() const noexcept override { return #Name; }         \
    };

MATHIEU_DEFINE_ERROR(InvalidArgument)
MATHIEU_DEFINE_ERROR(EmbeddingNotPSD)
MATHIEU_DEFINE_ERROR(Overflow)
MATHIEU_DEFINE_ERROR(NotConverged)
MATHIEU_DEFINE_ERROR(InvalidRegime)
MATHIEU_DEFINE_ERROR(QuadratureFailure)
MATHIEU_DEFINE_ERROR(EmptyInput)
MATHIEU_DEFINE_ERROR(ConfigError)

#undef MATHIEU_DEFINE_ERROR

inline void require(bool condition, const std::string& message) {
    if (!condition) throw InvalidArgument(message);
}

}  // namespace mathieu
