#pragma once

#include <stdexcept>
#include <string>

namespace eqtoda {

enum class Errc {
    NotAUnit,       // inversion of a non-unit scalar or coefficient
    NotDefined,     // operation outside its domain (e.g. evaluation at a q-pole)
    ZeroBracket,    // inverse of the bracket series [0]
    EmptyWindow,    // an operation would produce an empty guaranteed window
    WindowMiss,     // requested coefficient outside the guaranteed window
    NotInvertible,  // operator has no unit leading coefficient
    DepthExhausted, // requested depth exceeds what the inputs determine
    SolveFailed,    // triangular solve hit an unexpected nonlinearity
    SingularFlow,   // exposed flow image has an eps pole
    TPoleDetected,  // evaluation at t = 0 of a series with a t pole
    ConfigError,    // bad run configuration
    ParseError,     // bad expression text
    Internal,       // broken internal invariant
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
    Errc code() const { return code_; }

  private:
    Errc code_;
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NotAUnit: return "NotAUnit";
        case Errc::NotDefined: return "NotDefined";
        case Errc::ZeroBracket: return "ZeroBracket";
        case Errc::EmptyWindow: return "EmptyWindow";
        case Errc::WindowMiss: return "WindowMiss";
        case Errc::NotInvertible: return "NotInvertible";
        case Errc::DepthExhausted: return "DepthExhausted";
        case Errc::SolveFailed: return "SolveFailed";
        case Errc::SingularFlow: return "SingularFlow";
        case Errc::TPoleDetected: return "TPoleDetected";
        case Errc::ConfigError: return "ConfigError";
        case Errc::ParseError: return "ParseError";
        case Errc::Internal: return "Internal";
    }
    return "Unknown";
}

}  // namespace eqtoda
