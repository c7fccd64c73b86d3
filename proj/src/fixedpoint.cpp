#include "invstab/fixedpoint.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace invstab {

ExtReal::ExtReal(double value) : value_(value) {
  if (std::isnan(value) || value < 0.0 || std::isinf(value)) {
    throw std::domain_error("extended real must be finite and non-negative, got " +
                            std::to_string(value));
  }
}

double ExtReal::value() const {
  if (infinite_) throw std::logic_error("value() of an infinite extended real");
  return value_;
}

double ExtReal::ToDouble() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

std::string ExtReal::ToString() const { return infinite_ ? "inf" : std::to_string(value_); }

ExtReal operator+(ExtReal a, ExtReal b) {
  if (a.infinite_ || b.infinite_) return ExtReal::Infinity();
  return ExtReal(a.value_ + b.value_);
}

ExtReal operator*(double k, ExtReal a) {
  if (!(k >= 0.0) || std::isinf(k)) throw std::domain_error("factor must be finite and >= 0");
  if (k == 0.0) return ExtReal(0.0);
  if (a.infinite_) return a;
  return ExtReal(k * a.value_);
}

ExtReal SafeRatio(double num, double den) {
  if (num == 0.0) return ExtReal(0.0);
  if (den == 0.0) return ExtReal::Infinity();
  return ExtReal(num / den);
}

FunctionSpaceMetric::FunctionSpaceMetric(ControlFunction control, double q,
                                         std::vector<std::vector<Element>> rays)
    : control_(std::move(control)), q_(q), rays_(std::move(rays)) {
  if (q_ != 2.0 && q_ != 0.5) throw Error(ErrorCode::kInvalidArgument, "q must be 2 or 1/2");
  for (const auto& ray : rays_) {
    for (const auto& p : ray) {
      if (p.IsZero()) throw Error(ErrorCode::kInvalidArgument, "zero element in probe set");
    }
  }
  if (Probes().empty()) throw Error(ErrorCode::kInvalidArgument, "probe set is empty");
}

FunctionSpaceMetric FunctionSpaceMetric::FromBasePoints(ControlFunction control, double q,
                                                        const std::vector<Element>& base_points,
                                                        std::size_t depth) {
  std::vector<std::vector<Element>> rays;
  rays.reserve(base_points.size());
  for (const auto& x0 : base_points) {
    std::vector<Element> ray{x0};
    for (std::size_t k = 0; k < depth; ++k) ray.push_back(Scale(q, ray.back()));
    rays.push_back(std::move(ray));
  }
  return FunctionSpaceMetric(std::move(control), q, std::move(rays));
}

std::vector<Element> FunctionSpaceMetric::Probes() const {
  std::vector<Element> out;
  for (const auto& ray : rays_) out.insert(out.end(), ray.begin(), ray.end());
  return out;
}

std::vector<Element> FunctionSpaceMetric::InteriorProbes() const {
  std::vector<Element> out;
  for (const auto& ray : rays_) {
    if (ray.size() > 1) out.insert(out.end(), ray.begin(), ray.end() - 1);
  }
  return out;
}

ExtReal FunctionSpaceDistance(const ElementMap& g, const ElementMap& h,
                              const std::vector<Element>& probes, const ControlFunction& control) {
  if (probes.empty()) throw Error(ErrorCode::kInvalidArgument, "probe set is empty");
  ExtReal best(0.0);
  for (const auto& x : probes) {
    const ExtReal ratio = SafeRatio(Norm(Sub(g(x), h(x))), ControlAtZero(control, x));
    if (ratio > best) best = ratio;
    if (best.is_infinite()) break;
  }
  return best;
}

ElementMap ScalingOperator(ElementMap g, double q) {
  if (q != 2.0 && q != 0.5) throw Error(ErrorCode::kInvalidArgument, "q must be 2 or 1/2");
  return [g = std::move(g), q](const Element& x) { return Scale(1.0 / q, g(Scale(q, x))); };
}

}  // namespace invstab
