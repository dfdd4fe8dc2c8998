#ifndef P1NC_CORE_HPP
#define P1NC_CORE_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace p1nc {

using index_t = std::int64_t;
using Point = std::array<double, 3>;

/// Scalar field on the domain; the z component is ignored in 2D.
using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Point(const Point&)>;

// Parity indicator: 1 if n is even, 0 if odd.
inline index_t parity_even(index_t n) { return (n % 2 == 0) ? 1 : 0; }

struct InvalidSpecError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SizeCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotRepresentableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InconsistentRhsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace p1nc

#endif
