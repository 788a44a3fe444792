#pragma once

#include <stdexcept>
#include <string>

namespace plp {

//! Raised when an argument lies outside the mathematical domain of an
//! operation (non-positive time, invalid parameter set, ...).
class DomainError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

//! Raised when an estimator cannot produce a value for valid inputs
//! (zero denominators, vanishing posterior mass, failed optimisation).
class EstimationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! Adaptive quadrature did not reach its tolerance. Carries what was
//! computed so callers can report it.
class QuadratureError : public EstimationError
{
public:
  QuadratureError(const std::string& what,
                  double numerator,
                  double denominator,
                  double lower,
                  double upper)
    : EstimationError(what)
    , numerator_(numerator)
    , denominator_(denominator)
    , lower_(lower)
    , upper_(upper)
  {}

  double numerator() const noexcept { return numerator_; }
  double denominator() const noexcept { return denominator_; }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

private:
  double numerator_;
  double denominator_;
  double lower_;
  double upper_;
};

} // namespace plp
