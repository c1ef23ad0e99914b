#pragma once

#include <stdexcept>
#include <string>

namespace phishmatch {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define PHISHMATCH_ERROR(Name)                  \
    class Name : public Error {                 \
    public:                                     \
        using Error::Error;                     \
    }

PHISHMATCH_ERROR(MalformedUrl);
PHISHMATCH_ERROR(InvalidSymbol);
PHISHMATCH_ERROR(DuplicatePattern);
PHISHMATCH_ERROR(EmptyKeywordSet);
PHISHMATCH_ERROR(ArtifactCorrupt);
PHISHMATCH_ERROR(ArtifactVersionMismatch);
PHISHMATCH_ERROR(ArtifactMissing);
PHISHMATCH_ERROR(PunycodeDecodeError);
PHISHMATCH_ERROR(InvalidRecord);
PHISHMATCH_ERROR(NotBlacklisted);
PHISHMATCH_ERROR(ProviderUnavailable);
PHISHMATCH_ERROR(BudgetExhausted);

#undef PHISHMATCH_ERROR

}  // namespace phishmatch
