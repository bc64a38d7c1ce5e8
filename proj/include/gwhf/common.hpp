#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gwhf {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// kernel / window validation
class InvalidKernel : public Error { public: using Error::Error; };
class SingularKernel : public Error { public: using Error::Error; };
class DecayViolation : public Error { public: using Error::Error; };
class DegeneratePair : public Error { public: using Error::Error; };
class InvalidWindow : public Error { public: using Error::Error; };

// simulation / detection
class AliasError : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class ResolutionError : public Error { public: using Error::Error; };
class ConfigError : public Error { public: using Error::Error; };

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Domain {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  Complex center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
  // half-open, so tiles never share a point
  bool contains(Complex z) const {
    return z.real() >= x0 && z.real() < x1 && z.imag() >= y0 && z.imag() < y1;
  }
};

enum class Plane { stft, gwhf };

inline const char* to_string(Plane p) { return p == Plane::stft ? "stft" : "gwhf"; }

}  // namespace gwhf
