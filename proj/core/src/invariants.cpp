#include "echelon/invariants.hpp"

#include <cmath>
#include <sstream>

namespace echelon {

std::vector<std::string> check_record(const EpisodeRecord& record, const ScenarioConfig& config) {
  std::vector<std::string> violations;
  auto fail = [&](Period t, int m, const std::string& what) {
    std::ostringstream msg;
    msg << "period " << t << " stage " << m << ": " << what;
    violations.push_back(msg.str());
  };

  const int num_stages = config.num_stages();
  if (record.num_stages != num_stages) {
    violations.push_back("record has " + std::to_string(record.num_stages) + " stages, scenario has " +
                         std::to_string(num_stages));
    return violations;
  }

  std::vector<Units> prev_backlog(num_stages, 0);
  std::vector<Units> received(num_stages, 0), sold(num_stages, 0);

  Money total = 0;
  for (std::size_t i = 0; i < record.periods.size(); ++i) {
    const auto& row = record.periods[i];
    const Period t = row.period;
    if (static_cast<int>(row.stages.size()) != num_stages) {
      fail(t, -1, "wrong number of stage rows");
      return violations;
    }
    for (int m = 0; m < num_stages; ++m) {
      const auto& s = row.stages[m];
      const auto& p = config.stages[m];
      if (s.inventory < 0) fail(t, m, "negative inventory");
      if (s.backlog < 0) fail(t, m, "negative backlog");
      if (s.order < 0) fail(t, m, "negative order");

      if (m + 1 < num_stages) {
        if (s.fulfilled > config.stages[m + 1].capacity) fail(t, m, "fulfilled order exceeds upstream capacity");
        if (s.fulfilled > prev_backlog[m + 1] + s.order) fail(t, m, "fulfilled order exceeds upstream backlog + order");
      } else if (s.fulfilled != s.order) {
        fail(t, m, "top-stage order not fulfilled in full");
      }
      if (m == 0) {
        if (s.sales > p.capacity) fail(t, m, "retail sales exceed capacity");
        if (s.backlog - prev_backlog[0] != row.demand - s.sales) fail(t, m, "retail backlog recursion broken");
      } else {
        const auto& down = row.stages[m - 1];
        if (s.sales != down.fulfilled) fail(t, m, "sales differ from downstream fulfilled order");
        if (s.backlog - prev_backlog[m] != down.order - s.sales) fail(t, m, "backlog recursion broken");
      }

      // Order fulfilled in period t - L_m lands now.
      const auto source = static_cast<long>(i) - p.lead_time;
      if (source >= 0) received[m] += record.periods[static_cast<std::size_t>(source)].stages[m].fulfilled;
      sold[m] += s.sales;
      if (s.inventory - p.init_inventory != received[m] - sold[m]) fail(t, m, "flow conservation broken");

      const Money expected = p.sale_price * static_cast<Money>(s.sales) - p.order_cost * static_cast<Money>(s.fulfilled) -
                             p.backlog_cost * static_cast<Money>(s.backlog) -
                             p.holding_cost * static_cast<Money>(s.inventory);
      if (std::abs(expected - s.profit) > 1e-9 * (1 + std::abs(expected))) fail(t, m, "profit mismatch");
      total += s.profit;

      prev_backlog[m] = s.backlog;
    }
  }
  if (total != record.episode_reward) violations.push_back("episode reward differs from the sum of profits");
  return violations;
}

}  // namespace echelon
