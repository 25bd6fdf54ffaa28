#pragma once

#include <utility>
#include <variant>
#include <vector>

namespace wgtrap {

struct Constant {
  double value = 0.0;
  bool operator==(const Constant&) const = default;
};

// base + amplitude * (1 + sin(2*pi*(z - z_ref)/period)) / 2
struct SineRamp {
  double base = 0.0;
  double amplitude = 0.0;
  double z_ref = 0.0;
  double period = 1.0;
  bool operator==(const SineRamp&) const = default;
};

using SegmentShape = std::variant<Constant, SineRamp>;

struct Segment {
  double z_start = 0.0;
  double z_end = 0.0;
  SegmentShape shape;
  bool operator==(const Segment&) const = default;
};

double evaluate(const SegmentShape& shape, double z);

// Piecewise function of one coordinate built from Constant/SineRamp pieces.
// Used both for waveguide centre trajectories (z and value in um) and for
// coupling schedules (z in mm, value in 1/mm). Units are the caller's.
class Piecewise {
 public:
  Piecewise() = default;
  explicit Piecewise(std::vector<Segment> segments);

  static Piecewise constant(double value, double z_start, double z_end);

  const std::vector<Segment>& segments() const { return segments_; }
  double z_begin() const;
  double z_end() const;

  // Throws DomainError outside [z_begin, z_end]. Points on a join use the
  // later segment; the final segment includes its end.
  double operator()(double z) const;

  // Exact extrema over [a, b], accounting for interior sine crests.
  std::pair<double, double> range(double a, double b) const;
  std::pair<double, double> range() const { return range(z_begin(), z_end()); }

  Piecewise scaled_z(double factor) const;
  Piecewise shifted(double offset) const;

  // Largest |value - value| across each join.
  double max_join_jump() const;
  // Largest |z_end_i - z_start_{i+1}|.
  double max_gap() const;

  bool operator==(const Piecewise&) const = default;

 private:
  std::vector<Segment> segments_;
};

using Trajectory = Piecewise;
using CouplingSchedule = Piecewise;

}  // namespace wgtrap
