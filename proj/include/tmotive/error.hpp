#ifndef TMOTIVE_ERROR_HPP
#define TMOTIVE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace tmotive {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

#define TMOTIVE_DECLARE_ERROR(Name)                                  \
    class Name : public Error {                                      \
      public:                                                        \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    };

TMOTIVE_DECLARE_ERROR(PreconditionViolated)
TMOTIVE_DECLARE_ERROR(TwistDepthExceeded)
TMOTIVE_DECLARE_ERROR(NonTwistable)
TMOTIVE_DECLARE_ERROR(DivisionByZeroWithinPrecision)
TMOTIVE_DECLARE_ERROR(InseparableRamification)
TMOTIVE_DECLARE_ERROR(PrecisionExhausted)
TMOTIVE_DECLARE_ERROR(PrecisionLoss)
TMOTIVE_DECLARE_ERROR(ConvergenceNotCertified)
TMOTIVE_DECLARE_ERROR(MismatchBeyondPrecision)
TMOTIVE_DECLARE_ERROR(NotRational)
TMOTIVE_DECLARE_ERROR(IntertwineFailed)
TMOTIVE_DECLARE_ERROR(RankDefect)
TMOTIVE_DECLARE_ERROR(EliminationMismatch)

#undef TMOTIVE_DECLARE_ERROR

// Parse failure with a 1-based source position.
class ParseError : public Error {
  public:
    ParseError(int line, int column, const std::string& msg)
        : Error("ParseError: " + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line),
          column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

  private:
    int line_;
    int column_;
};

}  // namespace tmotive

#endif
