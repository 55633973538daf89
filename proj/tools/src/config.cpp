#include <cmath>

#include "bergman/error.hpp"
#include "bergman/tools/experiments.hpp"

namespace bergman::tools {
namespace {

std::vector<Complex> parse_points(const Json& j) {
  std::vector<Complex> out;
  for (const Json& p : j) out.push_back(parse_complex(p));
  return out;
}

// The single key of a {"kind": {...}} object.
std::pair<std::string, const Json*> tagged(const Json& j, const char* what) {
  if (!j.is_object() || j.size() != 1)
    throw Error(ErrorKind::InvalidArgument,
                std::string(what) + " spec must be an object with exactly one key");
  return {j.begin().key(), &j.begin().value()};
}

double number_or(const Json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

}  // namespace

Complex parse_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw Error(ErrorKind::InvalidArgument, "complex value must be a number or [re, im]: " + j.dump());
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

ConvexDomain parse_convex_domain(const Json& j) {
  const auto [kind, body] = tagged(j, "domain");
  const Json& b = *body;
  if (kind == "disk")
    return ConvexDomain::disk(b.contains("center") ? parse_complex(b.at("center")) : Complex{},
                              b.at("radius").get<double>());
  if (kind == "ellipse")
    return ConvexDomain::ellipse(b.contains("center") ? parse_complex(b.at("center")) : Complex{},
                                 b.at("semi_a").get<double>(), b.at("semi_b").get<double>(),
                                 number_or(b, "rotation", 0.0));
  if (kind == "polygon") return ConvexDomain::polygon(parse_points(b.at("vertices")));
  if (kind == "rectangle")
    return ConvexDomain::rectangle(b.at("x")[0].get<double>(), b.at("x")[1].get<double>(),
                                   b.at("y")[0].get<double>(), b.at("y")[1].get<double>());
  if (kind == "regular_polygon")
    return ConvexDomain::regular_polygon(
        b.at("sides").get<int>(), b.contains("center") ? parse_complex(b.at("center")) : Complex{},
        b.at("circumradius").get<double>(), number_or(b, "phase", 0.0));
  throw Error(ErrorKind::InvalidArgument, "unknown convex domain kind '" + kind + "'");
}

Region parse_region(const Json& j) {
  const auto [kind, body] = tagged(j, "domain");
  if (kind == "simple_polygon") return SimplePolygon(parse_points(body->at("vertices")));
  return parse_convex_domain(j);
}

Weight parse_weight(const Json& j) {
  const auto [kind, body] = tagged(j, "weight");
  const Json& b = *body;
  if (kind == "zero") return Weight::zero();
  if (kind == "quadratic")
    return Weight::quadratic(number_or(b, "a", 0.0), number_or(b, "b", 0.0), number_or(b, "c", 0.0),
                             number_or(b, "linear_x", 0.0), number_or(b, "linear_y", 0.0),
                             number_or(b, "constant", 0.0));
  if (kind == "modsq")
    return Weight::modulus_squared(number_or(b, "alpha", 1.0),
                                   b.contains("center") ? parse_complex(b.at("center")) : Complex{});
  if (kind == "max_affine") {
    std::vector<AffinePiece> pieces;
    for (const Json& p : b.at("pieces")) {
      if (!p.is_array() || p.size() != 3)
        throw Error(ErrorKind::InvalidArgument, "affine piece must be [gx, gy, offset]");
      pieces.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
    }
    return Weight::max_affine(std::move(pieces));
  }
  throw Error(ErrorKind::InvalidArgument, "unknown weight kind '" + kind + "'");
}

FiberedFamily parse_family(const Json& j) {
  const auto [kind, body] = tagged(j, "family");
  const Json& b = *body;
  if (kind == "norm_ball") return FiberedFamily::norm_ball(number_or(b, "radius", 1.0));
  if (kind == "oka")
    return FiberedFamily::oka(parse_convex_domain(b.at("base")),
                              b.contains("weight") ? parse_weight(b.at("weight")) : Weight::zero(),
                              parse_complex(b.at("z0")), parse_complex(b.at("z1")));
  throw Error(ErrorKind::InvalidArgument, "unknown family kind '" + kind + "'");
}

const Json& ConfigReader::require(const std::string& key) {
  if (!source_.contains(key))
    throw Error(ErrorKind::InvalidArgument, "config is missing required key '" + key + "'");
  echo_[key] = source_.at(key);
  return source_.at(key);
}

Json ConfigReader::get_json(const std::string& key, const Json& fallback) {
  Json value = source_.contains(key) ? source_.at(key) : fallback;
  echo_[key] = value;
  return value;
}

}  // namespace bergman::tools
