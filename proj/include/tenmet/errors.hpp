#ifndef TENMET_ERRORS_HPP
#define TENMET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tenmet {

/// Base class of every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define TENMET_DEFINE_ERROR(NAME)          \
  struct NAME : Error {                    \
    using Error::Error;                    \
  }

// tensor algebra
TENMET_DEFINE_ERROR(DimensionMismatch);
TENMET_DEFINE_ERROR(ModeOutOfRange);
TENMET_DEFINE_ERROR(ShapeInconsistent);
TENMET_DEFINE_ERROR(BadDims);

// dataset container
TENMET_DEFINE_ERROR(BadMagic);
TENMET_DEFINE_ERROR(TruncatedFile);
TENMET_DEFINE_ERROR(DimsMismatch);
TENMET_DEFINE_ERROR(LabelOutOfRange);
TENMET_DEFINE_ERROR(IoFailure);
TENMET_DEFINE_ERROR(TooFewSamples);

// graph / objective / solver / trainer / classifier
TENMET_DEFINE_ERROR(EmptyClass);
TENMET_DEFINE_ERROR(ShapeMismatch);
TENMET_DEFINE_ERROR(EigenFailure);
TENMET_DEFINE_ERROR(StepSizeDiverged);
TENMET_DEFINE_ERROR(DegenerateGraph);
TENMET_DEFINE_ERROR(BadKernel);
TENMET_DEFINE_ERROR(InvalidArgument);

#undef TENMET_DEFINE_ERROR

}  // namespace tenmet

#endif  // TENMET_ERRORS_HPP
