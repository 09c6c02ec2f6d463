#pragma once

#include <stdexcept>
#include <string>

namespace wogan {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define WOGAN_DEFINE_ERROR(Name)              \
    class Name : public Error {               \
    public:                                   \
        using Error::Error;                   \
    }

WOGAN_DEFINE_ERROR(DegenerateInput);
WOGAN_DEFINE_ERROR(TooShort);
WOGAN_DEFINE_ERROR(InvalidRoad);
WOGAN_DEFINE_ERROR(ConfigError);
WOGAN_DEFINE_ERROR(DimensionMismatch);
WOGAN_DEFINE_ERROR(EmptyBatch);
WOGAN_DEFINE_ERROR(EmptyData);
WOGAN_DEFINE_ERROR(EmptyArchive);
WOGAN_DEFINE_ERROR(NoValidCandidate);
WOGAN_DEFINE_ERROR(BudgetTooSmall);
WOGAN_DEFINE_ERROR(EmptySuite);
WOGAN_DEFINE_ERROR(EmptyGroup);
WOGAN_DEFINE_ERROR(SchemaMismatch);
WOGAN_DEFINE_ERROR(IoError);

#undef WOGAN_DEFINE_ERROR

} // namespace wogan
