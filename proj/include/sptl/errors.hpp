#pragma once

#include <stdexcept>
#include <string>

namespace sptl {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define SPTL_ERROR(name)                         \
    struct name : error {                        \
        explicit name(const std::string &w)      \
            : error(std::string(#name ": ") + w) \
        {                                        \
        }                                        \
    }

SPTL_ERROR(PoleError);
SPTL_ERROR(DomainError);
SPTL_ERROR(ConvergenceError);
SPTL_ERROR(NotADiscriminant);
SPTL_ERROR(LocalFactorPole);
SPTL_ERROR(UnsupportedWeight);
SPTL_ERROR(DegenerateDiscriminant);
SPTL_ERROR(TruncationError);
SPTL_ERROR(ModelRangeError);
SPTL_ERROR(SupportTooWide);
SPTL_ERROR(SieveRangeError);
SPTL_ERROR(NonRealSign);

#undef SPTL_ERROR

} // namespace sptl
