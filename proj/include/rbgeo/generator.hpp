#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rbgeo {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Open interval (lower, upper); either bound may be infinite.
struct Interval {
  double lower = -kInf;
  double upper = kInf;

  bool contains(double x) const noexcept { return x > lower && x < upper; }
  bool operator==(const Interval&) const = default;
};

using ScalarFn = std::function<double(double)>;
using ScalarDivergenceFn = std::function<double(double, double)>;

// Legendre conjugate of a scalar generator, expressed on the dual domain
// phi'(J). phi_star_prime is the inverse of phi'.
struct ConjugatePieces {
  ScalarFn phi_star;
  ScalarFn phi_star_prime;
  ScalarFn phi_star_double_prime;
  ScalarFn h_star;
  Interval dual_domain;
};

// A separable Bregman generator phi on the interval J together with the
// embedding h = int sqrt(phi'') and its inverse H. Immutable once built; every
// member is a pure function so a Generator can be shared across threads.
struct Generator {
  std::string name;
  Interval domain;
  ScalarFn phi;
  ScalarFn phi_prime;
  ScalarFn phi_double_prime;
  ScalarFn h;
  ScalarFn h_inverse;
  Interval embedded_range;
  // Optional closed form of the scalar divergence phi(x) - phi(y) - (x-y)phi'(y)
  // that is better conditioned than the three-term expression.
  ScalarDivergenceFn divergence;
  std::optional<ConjugatePieces> conjugate_pieces;

  // delta_phi(x, y) for scalars.
  double scalar_divergence(double x, double y) const;
};

// Names accepted by make_generator: the five built-ins.
std::span<const std::string_view> builtin_generator_names();

// Maps aliases ("x", "sqrt", "ln", "log", "exp-neg", ...) to the canonical
// built-in name. Unknown names are returned unchanged.
std::string canonical_generator_name(std::string_view name);

// euclidean | exp | negexp | shannon | burg (aliases accepted).
// Throws InvalidArgument for anything else.
Generator make_generator(std::string_view name);

// Generator from caller-supplied closed forms. h must be increasing on the
// domain with derivative sqrt(phi'') and h_inverse its inverse on
// embedded_range.
Generator make_custom_generator(std::string name, Interval domain, ScalarFn phi,
                                ScalarFn phi_prime, ScalarFn phi_double_prime,
                                ScalarFn h, ScalarFn h_inverse,
                                Interval embedded_range);

// Conjugate pieces of a generator. Throws InvalidArgument when the generator
// was built without them.
const ConjugatePieces& conjugate(const Generator& g);

// Throws DomainError naming the first coordinate outside the domain.
void check_domain(const Generator& g, std::span<const double> x);

// Componentwise h and H. Both validate their input and throw DomainError
// with the offending index.
std::vector<double> embed(const Generator& g, std::span<const double> x);
std::vector<double> unembed(const Generator& g, std::span<const double> u);

// In-place variants for flat buffers; out.size() must equal in.size().
void embed_into(const Generator& g, std::span<const double> in,
                std::span<double> out);
void unembed_into(const Generator& g, std::span<const double> in,
                  std::span<double> out);

}  // namespace rbgeo
