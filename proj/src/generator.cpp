#include "rbgeo/generator.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "rbgeo/errors.hpp"

namespace rbgeo {
namespace {

constexpr std::array<std::string_view, 5> kBuiltins = {
    "euclidean", "exp", "negexp", "shannon", "burg"};

Generator euclidean() {
  Generator g;
  g.name = "euclidean";
  g.domain = {-kInf, kInf};
  g.phi = [](double x) { return 0.5 * x * x; };
  g.phi_prime = [](double x) { return x; };
  g.phi_double_prime = [](double) { return 1.0; };
  g.h = [](double x) { return x; };
  g.h_inverse = [](double u) { return u; };
  g.embedded_range = {-kInf, kInf};
  g.divergence = [](double x, double y) {
    const double d = x - y;
    return 0.5 * (d * d);
  };
  g.conjugate_pieces = ConjugatePieces{
      [](double y) { return 0.5 * y * y; },
      [](double y) { return y; },
      [](double) { return 1.0; },
      [](double y) { return y; },
      {-kInf, kInf},
  };
  return g;
}

Generator exponential() {
  Generator g;
  g.name = "exp";
  g.domain = {-kInf, kInf};
  g.phi = [](double x) { return std::exp(x); };
  g.phi_prime = [](double x) { return std::exp(x); };
  g.phi_double_prime = [](double x) { return std::exp(x); };
  g.h = [](double x) { return 2.0 * std::exp(0.5 * x); };
  g.h_inverse = [](double u) { return 2.0 * std::log(0.5 * u); };
  g.embedded_range = {0.0, kInf};
  g.divergence = [](double x, double y) {
    const double d = x - y;
    return std::exp(y) * (std::expm1(d) - d);
  };
  // phi*(y) = y ln y - y on y > 0.
  g.conjugate_pieces = ConjugatePieces{
      [](double y) { return y * std::log(y) - y; },
      [](double y) { return std::log(y); },
      [](double y) { return 1.0 / y; },
      [](double y) { return 2.0 * std::sqrt(y); },
      {0.0, kInf},
  };
  return g;
}

Generator negative_exponential() {
  Generator g;
  g.name = "negexp";
  g.domain = {-kInf, kInf};
  g.phi = [](double x) { return std::exp(-x); };
  g.phi_prime = [](double x) { return -std::exp(-x); };
  g.phi_double_prime = [](double x) { return std::exp(-x); };
  g.h = [](double x) { return -2.0 * std::exp(-0.5 * x); };
  g.h_inverse = [](double u) { return -2.0 * std::log(-0.5 * u); };
  g.embedded_range = {-kInf, 0.0};
  g.divergence = [](double x, double y) {
    const double d = x - y;
    return std::exp(-y) * (std::expm1(-d) + d);
  };
  // phi*(y) = -y ln(-y) + y on y < 0.
  g.conjugate_pieces = ConjugatePieces{
      [](double y) { return -y * std::log(-y) + y; },
      [](double y) { return -std::log(-y); },
      [](double y) { return -1.0 / y; },
      [](double y) { return -2.0 * std::sqrt(-y); },
      {-kInf, 0.0},
  };
  return g;
}

Generator shannon() {
  Generator g;
  g.name = "shannon";
  g.domain = {0.0, kInf};
  g.phi = [](double x) { return x * std::log(x); };
  g.phi_prime = [](double x) { return std::log(x) + 1.0; };
  g.phi_double_prime = [](double x) { return 1.0 / x; };
  g.h = [](double x) { return 2.0 * std::sqrt(x); };
  g.h_inverse = [](double u) {
    const double half = 0.5 * u;
    return half * half;
  };
  g.embedded_range = {0.0, kInf};
  g.divergence = [](double x, double y) {
    return x * std::log(x / y) - x + y;
  };
  g.conjugate_pieces = ConjugatePieces{
      [](double y) { return std::exp(y - 1.0); },
      [](double y) { return std::exp(y - 1.0); },
      [](double y) { return std::exp(y - 1.0); },
      [](double y) { return 2.0 * std::exp(0.5 * (y - 1.0)); },
      {-kInf, kInf},
  };
  return g;
}

Generator burg() {
  Generator g;
  g.name = "burg";
  g.domain = {0.0, kInf};
  g.phi = [](double x) { return -std::log(x); };
  g.phi_prime = [](double x) { return -1.0 / x; };
  g.phi_double_prime = [](double x) { return 1.0 / (x * x); };
  g.h = [](double x) { return std::log(x); };
  g.h_inverse = [](double u) { return std::exp(u); };
  g.embedded_range = {-kInf, kInf};
  // Itakura-Saito form.
  g.divergence = [](double x, double y) {
    const double r = x / y;
    return r - std::log(r) - 1.0;
  };
  g.conjugate_pieces = ConjugatePieces{
      [](double y) { return -1.0 - std::log(-y); },
      [](double y) { return -1.0 / y; },
      [](double y) { return 1.0 / (y * y); },
      [](double y) { return -std::log(-y); },
      {-kInf, 0.0},
  };
  return g;
}

std::string out_of_range_message(std::string_view what, std::string_view gen,
                                 std::size_t index, double value) {
  std::ostringstream os;
  os << "coordinate " << index << " (value " << value << ") is outside the "
     << what << " of generator '" << gen << "'";
  return os.str();
}

}  // namespace

double Generator::scalar_divergence(double x, double y) const {
  if (divergence) return divergence(x, y);
  return phi(x) - phi(y) - (x - y) * phi_prime(y);
}

std::span<const std::string_view> builtin_generator_names() {
  return kBuiltins;
}

std::string canonical_generator_name(std::string_view name) {
  if (name == "x" || name == "identity" || name == "euclid") return "euclidean";
  if (name == "sqrt" || name == "xlogx") return "shannon";
  if (name == "ln" || name == "log" || name == "-logx") return "burg";
  if (name == "exp-neg" || name == "expneg" || name == "exp(-x)") return "negexp";
  return std::string(name);
}

Generator make_generator(std::string_view name) {
  const std::string canonical = canonical_generator_name(name);
  if (canonical == "euclidean") return euclidean();
  if (canonical == "exp") return exponential();
  if (canonical == "negexp") return negative_exponential();
  if (canonical == "shannon") return shannon();
  if (canonical == "burg") return burg();
  throw InvalidArgument("unknown generator '" + std::string(name) +
                        "' (expected euclidean|exp|negexp|shannon|burg)");
}

Generator make_custom_generator(std::string name, Interval domain, ScalarFn phi,
                                ScalarFn phi_prime, ScalarFn phi_double_prime,
                                ScalarFn h, ScalarFn h_inverse,
                                Interval embedded_range) {
  if (!phi || !phi_prime || !phi_double_prime || !h || !h_inverse) {
    throw InvalidArgument("custom generator '" + name +
                          "' is missing a required function");
  }
  Generator g;
  g.name = std::move(name);
  g.domain = domain;
  g.phi = std::move(phi);
  g.phi_prime = std::move(phi_prime);
  g.phi_double_prime = std::move(phi_double_prime);
  g.h = std::move(h);
  g.h_inverse = std::move(h_inverse);
  g.embedded_range = embedded_range;
  return g;
}

const ConjugatePieces& conjugate(const Generator& g) {
  if (!g.conjugate_pieces) {
    throw InvalidArgument("generator '" + g.name +
                          "' has no Legendre conjugate pieces");
  }
  return *g.conjugate_pieces;
}

void check_domain(const Generator& g, std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!g.domain.contains(x[i])) {
      throw DomainError(out_of_range_message("domain", g.name, i, x[i]), i);
    }
  }
}

void embed_into(const Generator& g, std::span<const double> in,
                std::span<double> out) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (!g.domain.contains(in[i])) {
      throw DomainError(out_of_range_message("domain", g.name, i, in[i]), i);
    }
    out[i] = g.h(in[i]);
  }
}

void unembed_into(const Generator& g, std::span<const double> in,
                  std::span<double> out) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (!g.embedded_range.contains(in[i])) {
      throw DomainError(
          out_of_range_message("embedded range", g.name, i, in[i]), i);
    }
    out[i] = g.h_inverse(in[i]);
  }
}

std::vector<double> embed(const Generator& g, std::span<const double> x) {
  std::vector<double> out(x.size());
  embed_into(g, x, out);
  return out;
}

std::vector<double> unembed(const Generator& g, std::span<const double> u) {
  std::vector<double> out(u.size());
  unembed_into(g, u, out);
  return out;
}

}  // namespace rbgeo
