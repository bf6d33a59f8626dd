#include "echelon/demand.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "echelon/errors.hpp"

namespace echelon {

namespace {

Units draw_uniform(const UniformDemand& u, Engine& rng) {
  return std::uniform_int_distribution<Units>(u.lo, u.hi)(rng);
}

std::string number(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string uniform_text(const UniformDemand& u) {
  return "a discrete uniform distribution U{" + std::to_string(u.lo) + ", " + std::to_string(u.hi) + "}";
}

}  // namespace

Units sample_demand(const DemandModel& model, Period period, Engine& rng) {
  return std::visit(
      [&](const auto& m) -> Units {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ConstantDemand>) {
          return m.value;
        } else if constexpr (std::is_same_v<M, UniformDemand>) {
          return draw_uniform(m, rng);
        } else if constexpr (std::is_same_v<M, PiecewiseDemand>) {
          for (const auto& seg : m.segments) {
            if (period >= seg.first && period <= seg.last) return draw_uniform(seg.dist, rng);
          }
          throw ConfigError("period " + std::to_string(period) + " not covered by piecewise demand");
        } else {
          const double x = std::normal_distribution<double>(m.mean, m.stddev)(rng);
          return static_cast<Units>(std::floor(std::max(0.0, x) + 0.5));
        }
      },
      model);
}

std::string describe_demand(const DemandModel& model, int num_periods) {
  const std::string all = " for all " + std::to_string(num_periods) + " rounds";
  return std::visit(
      [&](const auto& m) -> std::string {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ConstantDemand>) {
          return "a constant " + std::to_string(m.value) + " units" + all;
        } else if constexpr (std::is_same_v<M, UniformDemand>) {
          return uniform_text(m) + all;
        } else if constexpr (std::is_same_v<M, PiecewiseDemand>) {
          if (m.segments.size() == 1) return uniform_text(m.segments.front().dist) + all;
          std::ostringstream out;
          for (std::size_t i = 0; i < m.segments.size(); ++i) {
            const auto& seg = m.segments[i];
            const int len = seg.last - seg.first + 1;
            if (i > 0) out << (i + 1 == m.segments.size() ? ", and " : ", ");
            out << uniform_text(seg.dist);
            if (i == 0)
              out << " for the first " << len << " rounds";
            else if (i + 1 == m.segments.size())
              out << " for the last " << len << " rounds";
            else
              out << " for rounds " << seg.first << " to " << seg.last;
          }
          return out.str();
        } else {
          return "a normal distribution N(" + number(m.mean) + ", " + number(m.stddev) + "^2), truncated at 0," + all;
        }
      },
      model);
}

}  // namespace echelon
