#include "wgtrap/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "wgtrap/errors.hpp"

namespace wgtrap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

double evaluate(const SegmentShape& shape, double z) {
  return std::visit(
      Overloaded{
          [](const Constant& c) { return c.value; },
          [z](const SineRamp& s) {
            return s.base +
                   s.amplitude * (1.0 + std::sin(kTwoPi * (z - s.z_ref) / s.period)) / 2.0;
          },
      },
      shape);
}

Piecewise::Piecewise(std::vector<Segment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw ValidationError("piecewise function needs at least one segment");
  for (const auto& s : segments_) {
    if (!(s.z_end > s.z_start))
      throw ValidationError(fmt::format("segment [{}, {}] is empty or reversed", s.z_start, s.z_end));
    if (const auto* r = std::get_if<SineRamp>(&s.shape); r && !(r->period != 0.0))
      throw ValidationError("sine ramp period must be nonzero");
  }
}

Piecewise Piecewise::constant(double value, double z_start, double z_end) {
  return Piecewise({Segment{z_start, z_end, Constant{value}}});
}

double Piecewise::z_begin() const { return segments_.front().z_start; }
double Piecewise::z_end() const { return segments_.back().z_end; }

double Piecewise::operator()(double z) const {
  if (!(z >= z_begin() && z <= z_end()))
    throw DomainError(fmt::format("z = {} outside [{}, {}]", z, z_begin(), z_end()));
  // Segments are few (<= 3 in every bundled preset); a linear scan is fine.
  for (const auto& s : segments_) {
    if (z < s.z_end) return evaluate(s.shape, z);
  }
  return evaluate(segments_.back().shape, z);
}

std::pair<double, double> Piecewise::range(double a, double b) const {
  double lo = (*this)(a);
  double hi = lo;
  auto take = [&](double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };
  take((*this)(b));
  for (const auto& s : segments_) {
    const double sa = std::max(a, s.z_start);
    const double sb = std::min(b, s.z_end);
    if (sa > sb) continue;
    take(evaluate(s.shape, sa));
    take(evaluate(s.shape, sb));
    if (const auto* r = std::get_if<SineRamp>(&s.shape)) {
      // sin crests/troughs at phase pi/2 + k*pi
      const double half = std::abs(r->period) / 2.0;
      const double first = r->z_ref + r->period / 4.0;
      const double k0 = std::ceil((sa - first) / half);
      for (double k = k0;; k += 1.0) {
        const double zc = first + k * half;
        if (zc > sb) break;
        take(evaluate(s.shape, zc));
      }
    }
  }
  return {lo, hi};
}

Piecewise Piecewise::scaled_z(double factor) const {
  auto out = segments_;
  for (auto& s : out) {
    s.z_start *= factor;
    s.z_end *= factor;
    if (auto* r = std::get_if<SineRamp>(&s.shape)) {
      r->z_ref *= factor;
      r->period *= factor;
    }
  }
  return Piecewise(std::move(out));
}

Piecewise Piecewise::shifted(double offset) const {
  auto out = segments_;
  for (auto& s : out) {
    std::visit(Overloaded{[offset](Constant& c) { c.value += offset; },
                          [offset](SineRamp& r) { r.base += offset; }},
               s.shape);
  }
  return Piecewise(std::move(out));
}

double Piecewise::max_join_jump() const {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
    const double left = evaluate(segments_[i].shape, segments_[i].z_end);
    const double right = evaluate(segments_[i + 1].shape, segments_[i + 1].z_start);
    worst = std::max(worst, std::abs(left - right));
  }
  return worst;
}

double Piecewise::max_gap() const {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i)
    worst = std::max(worst, std::abs(segments_[i].z_end - segments_[i + 1].z_start));
  return worst;
}

}  // namespace wgtrap
