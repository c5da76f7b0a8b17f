#ifndef HBSURF_ERRORS_HPP
#define HBSURF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hbsurf {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HBSURF_DEFINE_ERROR(Name)        \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

HBSURF_DEFINE_ERROR(OutOfChart);
HBSURF_DEFINE_ERROR(SingularMetric);
HBSURF_DEFINE_ERROR(DegeneratePath);
HBSURF_DEFINE_ERROR(NotOnSphere);
HBSURF_DEFINE_ERROR(OutOfRange);
HBSURF_DEFINE_ERROR(Unsupported);
HBSURF_DEFINE_ERROR(NotUnitSpeed);
HBSURF_DEFINE_ERROR(SegmentLeavesChart);
HBSURF_DEFINE_ERROR(EmptyStencil);
HBSURF_DEFINE_ERROR(DegenerateSet);
HBSURF_DEFINE_ERROR(UnknownFunction);
HBSURF_DEFINE_ERROR(InsufficientRows);
HBSURF_DEFINE_ERROR(InvalidConfig);
HBSURF_DEFINE_ERROR(IoError);

#undef HBSURF_DEFINE_ERROR

/// Raised when the geodesic boundary-value relaxation fails to settle.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, int iterations, double last_residual)
      : Error(what), iterations_(iterations), last_residual_(last_residual) {}

  int iterations() const noexcept { return iterations_; }
  double last_residual() const noexcept { return last_residual_; }

 private:
  int iterations_;
  double last_residual_;
};

}  // namespace hbsurf

#endif  // HBSURF_ERRORS_HPP
