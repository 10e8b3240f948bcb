#pragma once

#include <stdexcept>
#include <string>

namespace mosaic {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define MOSAIC_ERROR(NAME)                                            \
    struct NAME : Error {                                             \
        explicit NAME(const std::string& what = #NAME) : Error(what) {} \
    }

MOSAIC_ERROR(PrecisionExhausted);
MOSAIC_ERROR(NotInUnitInterval);
MOSAIC_ERROR(EmptyCoefficients);
MOSAIC_ERROR(DepthExceeded);
MOSAIC_ERROR(ForbiddenPhase);
MOSAIC_ERROR(OverflowBudget);
MOSAIC_ERROR(TargetUnreachable);
MOSAIC_ERROR(NotFound);
MOSAIC_ERROR(EllOutOfRange);
MOSAIC_ERROR(SingularityHit);
MOSAIC_ERROR(FormulaArgumentBelowOne);
MOSAIC_ERROR(IntervalTooLarge);
MOSAIC_ERROR(IllConditioned);
MOSAIC_ERROR(DuplicateNodes);
MOSAIC_ERROR(BoxResonant);
MOSAIC_ERROR(ConfigError);

#undef MOSAIC_ERROR

} // namespace mosaic
