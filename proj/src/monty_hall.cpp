#include "qinfer/monty_hall.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace qinfer::monty {
namespace {

constexpr double kTieTolerance = 1e-10;

Eigen::VectorXcd door_pair(Index a, Index b) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(kDoors * kDoors);
  v(a * kDoors + b) = 1.0;
  return v;
}

ComplexMatrix outer(const Eigen::VectorXcd& v) { return v * v.adjoint(); }

const DimList& door_pair_dims() {
  static const DimList dims{kDoors, kDoors};
  return dims;
}

void require_door(Index d, const char* what) {
  if (d < 0 || d >= kDoors)
    throw PreconditionError(std::string(what) + " must be a door in {0,1,2}, got " + std::to_string(d));
}

}  // namespace

ScenarioKind ScenarioKind::bar(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw PreconditionError("bar scenario needs lambda in [0, 1], got " + std::to_string(lambda));
  return {Tag::bar, lambda};
}

ScenarioKind ScenarioKind::parse(std::string_view text) {
  if (text == "classical") return classical();
  if (text == "tilde") return tilde();
  if (text == "hat") return hat();
  if (text == "breve") return breve();
  std::string_view arg;
  if (text.starts_with("bar(") && text.ends_with(")"))
    arg = text.substr(4, text.size() - 5);
  else if (text.starts_with("bar:"))
    arg = text.substr(4);
  else
    throw PreconditionError("unknown scenario '" + std::string(text) +
                            "' (expected classical, tilde, hat, breve, bar(L) or bar:L)");
  double lambda = 0.0;
  const auto [end, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), lambda);
  if (ec != std::errc{} || end != arg.data() + arg.size() || arg.empty())
    throw PreconditionError("cannot parse lambda in scenario '" + std::string(text) + "'");
  return bar(lambda);
}

std::string ScenarioKind::name() const {
  switch (tag) {
    case Tag::classical:
      return "classical";
    case Tag::tilde:
      return "tilde";
    case Tag::hat:
      return "hat";
    case Tag::breve:
      return "breve";
    case Tag::bar: {
      std::ostringstream os;
      os << "bar(" << std::setprecision(12) << lambda << ")";
      return os.str();
    }
  }
  return "unknown";
}

ComplexMatrix host_table() {
  const Index n = kDoors * kDoors * kDoors;
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (Index prize = 0; prize < kDoors; ++prize) {
    for (Index pick = 0; pick < kDoors; ++pick) {
      std::vector<Index> allowed;
      for (Index c = 0; c < kDoors; ++c)
        if (c != prize && c != pick) allowed.push_back(c);
      for (auto c : allowed) {
        const Index k = (prize * kDoors + pick) * kDoors + c;
        m(k, k) = 1.0 / static_cast<double>(allowed.size());
      }
    }
  }
  return m;
}

DensityOperator uniform_door_state() {
  return DensityOperator(ComplexMatrix::Identity(kDoors, kDoors) / static_cast<double>(kDoors));
}

DensityOperator tilde_state() {
  const Eigen::VectorXcd psi = door_pair(0, 0) + door_pair(1, 1) + door_pair(2, 2);
  return DensityOperator(outer(psi) / 3.0, door_pair_dims());
}

DensityOperator hat_state() {
  const ComplexMatrix m = outer(door_pair(0, 1) + door_pair(1, 0)) + outer(door_pair(0, 2) + door_pair(2, 0)) +
                          outer(door_pair(1, 2) + door_pair(2, 1));
  return DensityOperator(m / 6.0, door_pair_dims());
}

DensityOperator bar_state(double lambda) {
  const auto kind = ScenarioKind::bar(lambda);
  return DensityOperator(kind.lambda * tilde_state().matrix() + (1.0 - kind.lambda) * hat_state().matrix(),
                         door_pair_dims());
}

DensityOperator breve_state() {
  const ComplexMatrix m = outer(door_pair(0, 0) + door_pair(0, 1)) + outer(door_pair(1, 1) + door_pair(1, 2)) +
                          outer(door_pair(2, 2) + door_pair(2, 0));
  return DensityOperator(m / 6.0, door_pair_dims());
}

DensityOperator prize_pick_state(const ScenarioKind& kind) {
  switch (kind.tag) {
    case ScenarioKind::Tag::classical:
      return DensityOperator(kron(uniform_door_state().matrix(), uniform_door_state().matrix()), door_pair_dims());
    case ScenarioKind::Tag::tilde:
      return tilde_state();
    case ScenarioKind::Tag::hat:
      return hat_state();
    case ScenarioKind::Tag::bar:
      return bar_state(kind.lambda);
    case ScenarioKind::Tag::breve:
      return breve_state();
  }
  throw PreconditionError("unknown scenario tag");
}

AcausalNetwork build_scenario(const ScenarioKind& kind) {
  AcausalNetwork net;
  net.nodes = {{kPrize, kDoors, {}}, {kPick, kDoors, {}}, {kHost, kDoors, {kPrize, kPick}}};
  net.conditionals.emplace(kHost, ConditionalOperator(host_table(), DimList{kDoors, kDoors, kDoors}, {0, 1}, {2}));
  if (kind.tag == ScenarioKind::Tag::classical) {
    net.conditionals.emplace(kPrize, ConditionalOperator::from_state(uniform_door_state()));
    net.conditionals.emplace(kPick, ConditionalOperator::from_state(uniform_door_state()));
  } else {
    net.joint_override = JointOverride{{kPrize, kPick}, prize_pick_state(kind)};
  }
  return net;
}

GameResult play(const AcausalNetwork& net, const GameQuery& query) {
  require_door(query.pick, "pick");
  require_door(query.open, "open");
  if (query.pick == query.open)
    throw PreconditionError("the host never opens the picked door: pick and open must differ");
  DensityOperator post = posterior(net, {{kPick, query.pick}, {kHost, query.open}}, kPrize);
  const Eigen::VectorXd p = post.probabilities();
  const Index target = kDoors - query.pick - query.open;
  GameResult r{query, std::move(post), {p(0), p(1), p(2)}, p(query.pick), p(target), target};
  return r;
}

GameResult play(const ScenarioKind& kind, const GameQuery& query) { return play(build_scenario(kind), query); }

std::vector<PlayCell> all_plays(const ScenarioKind& kind) {
  const AcausalNetwork net = build_scenario(kind);
  std::vector<PlayCell> cells;
  for (Index b = 0; b < kDoors; ++b) {
    for (Index c = 0; c < kDoors; ++c) {
      if (b == c) continue;
      PlayCell cell{{b, c}, std::nullopt, {}};
      try {
        cell.result = play(net, cell.query);
      } catch (const Error& e) {
        cell.error = e.what();
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::vector<SweepPoint> lambda_sweep(int steps) {
  if (steps < 2) throw PreconditionError("lambda_sweep needs at least 2 steps, got " + std::to_string(steps));
  std::vector<SweepPoint> points;
  points.reserve(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    SweepPoint pt;
    pt.lambda = static_cast<double>(k) / static_cast<double>(steps - 1);
    for (const auto& cell : all_plays(ScenarioKind::bar(pt.lambda))) {
      if (!cell.result) throw Error("lambda_sweep: play failed at lambda " + std::to_string(pt.lambda) + ": " + cell.error);
      pt.per_pair.push_back(cell.result->stay_win);
    }
    const auto [lo, hi] = std::minmax_element(pt.per_pair.begin(), pt.per_pair.end());
    pt.pair_spread = *hi - *lo;
    double sum = 0.0;
    for (double v : pt.per_pair) sum += v;
    pt.stay_win = sum / static_cast<double>(pt.per_pair.size());
    points.push_back(std::move(pt));
  }
  return points;
}

HostAnalysis host_strategy_analysis(const ScenarioKind& kind, Index pick) {
  require_door(pick, "pick");
  const AcausalNetwork net = build_scenario(kind);
  HostAnalysis out;
  out.pick = pick;
  for (Index c = 0; c < kDoors; ++c) {
    if (c == pick) continue;
    const GameResult r = play(net, {pick, c});
    out.options.push_back({c, r.stay_win, r.switch_win, std::max(r.stay_win, r.switch_win)});
  }
  const auto best = std::min_element(out.options.begin(), out.options.end(),
                                     [](const auto& x, const auto& y) { return x.best_response < y.best_response; });
  out.minimized_best_response = best->best_response;
  for (const auto& o : out.options)
    if (o.best_response - out.minimized_best_response <= kTieTolerance) out.minimizing_opens.push_back(o.open);
  return out;
}

}  // namespace qinfer::monty
