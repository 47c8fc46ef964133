#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "ipp/planner.hpp"

using namespace ipp;

namespace {

OccupancyGrid live_grid(const ScenarioConfig& c) { return OccupancyGrid::from_config(c); }

PredictedGrid constant_prediction(const ScenarioConfig& c, double v) {
  const GridGeometry g = geometry_of(c);
  return {g, std::vector<double>(static_cast<std::size_t>(g.rows) * g.cols, v), 0.0, {}};
}

ScenarioConfig with_weight(double w) {
  ScenarioConfig c;
  c.planner.weight = {WeightSchedule::Mode::Constant, w};
  return c;
}

int rank_of(const std::vector<CandidateRecord>& recs, std::size_t i) {
  int above = 0;
  for (const auto& r : recs) above += r.utility.total > recs[i].utility.total;
  return above;
}

}  // namespace

TEST_CASE("candidate fan") {
  const ScenarioConfig c;
  const auto cands = candidate_paths(Pose{50, 50, 0}, c);
  REQUIRE(cands.size() == 7);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    CHECK(cands[i].index == static_cast<int>(i));
    CHECK(cands[i].heading_change ==
          doctest::Approx(deg2rad(c.planner.heading_changes_deg[i])));
    const auto& tr = cands[i].trajectory;
    CHECK(tr.points().front() == Vec2(50, 50));
    CHECK(tr.arc_length() / tr.duration() == doctest::Approx(1.5).epsilon(0.01));
    CHECK(tr.max_curvature() <= c.planner.max_curvature);
  }
  const auto& straight = cands[3].trajectory;
  CHECK(straight.arc_length() == doctest::Approx(37.5).epsilon(1e-9));
  const Pose end = straight.pose_at(straight.duration());
  CHECK(end.x == doctest::Approx(87.5));
  CHECK(end.y == doctest::Approx(50.0));
  CHECK(straight.waypoints().size() == 5);

  // The fan is mirror symmetric about the heading.
  const Pose left = cands[0].trajectory.pose_at(cands[0].trajectory.duration());
  const Pose right = cands[6].trajectory.pose_at(cands[6].trajectory.duration());
  CHECK(left.x == doctest::Approx(right.x));
  CHECK(left.y - 50.0 == doctest::Approx(50.0 - right.y));
}

TEST_CASE("candidates near a corner stay in the map and are never empty") {
  const ScenarioConfig c;
  for (const Pose& pose : {Pose{1, 1, -3 * std::numbers::pi / 4}, Pose{99, 99, std::numbers::pi / 4},
                           Pose{0, 50, std::numbers::pi}, Pose{100, 0, -0.2}}) {
    const auto cands = candidate_paths(pose, c);
    REQUIRE_FALSE(cands.empty());
    for (const auto& cand : cands) {
      CHECK_FALSE(cand.trajectory.empty());
      CHECK(cand.trajectory.arc_length() > 0.0);
      for (const auto& p : cand.trajectory.points()) {
        CHECK(p.x() >= 0.0);
        CHECK(p.x() <= 100.0);
        CHECK(p.y() >= 0.0);
        CHECK(p.y() <= 100.0);
      }
    }
  }
}

TEST_CASE("candidate_paths rejects poses outside the map") {
  CHECK_THROWS_AS(candidate_paths(Pose{-1, 50, 0}, ScenarioConfig{}), ContractError);
  CHECK_THROWS_AS(candidate_paths(Pose{50, 100.5, 0}, ScenarioConfig{}), ContractError);
}

TEST_CASE("prediction times") {
  CHECK(prediction_times(25.0, 5.0) == std::vector<double>{5, 10, 15, 20, 25});
  CHECK(prediction_times(24.9, 5.0) == std::vector<double>{5, 10, 15, 20});
  CHECK(prediction_times(4.0, 5.0).empty());
}

TEST_CASE("tracking reward cases") {
  const ScenarioConfig c;
  const Pose pose{50, 50, 0};
  const auto zeros = constant_prediction(c, 0.0);
  const auto ones = constant_prediction(c, 1.0);
  CHECK(tracking_reward(pose, zeros, c.sensor, TrackingForm::Literal) == 1.0);
  CHECK(tracking_reward(pose, ones, c.sensor, TrackingForm::Literal) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(tracking_reward(pose, zeros, c.sensor, TrackingForm::Complementary) == 0.0);
  CHECK(tracking_reward(pose, ones, c.sensor, TrackingForm::Complementary) ==
        doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));

  // Rows above y = 50 hold p = 1, rows below p = 0; the fov is symmetric about y = 50.
  PredictedGrid half = zeros;
  for (int r = 50; r < half.geometry.rows; ++r) {
    for (int col = 0; col < half.geometry.cols; ++col) half.values[half.geometry.index(r, col)] = 1.0;
  }
  CHECK(tracking_reward(pose, half, c.sensor, TrackingForm::Literal) ==
        doctest::Approx((1.0 + std::exp(-2.0)) / 2.0).epsilon(1e-12));
  CHECK(tracking_reward(Pose{-50, -50, 0}, ones, c.sensor, TrackingForm::Literal) == 0.0);
}

TEST_CASE("tracking utility over a trajectory") {
  const ScenarioConfig c;
  const auto cands = candidate_paths(Pose{50, 50, 0}, c);
  const auto& tr = cands[3].trajectory;
  const auto zeros = constant_prediction(c, 0.0);
  CHECK(tracking_utility(tr, std::vector<PredictedGrid>(5, zeros), c) == 1.0);
  CHECK_THROWS_AS(tracking_utility(tr, std::vector<PredictedGrid>(4, zeros), c),
                  std::invalid_argument);
  CHECK(tracking_utility(Trajectory{}, {}, c) == 0.0);
}

TEST_CASE("weight schedule") {
  const WeightSchedule decay{WeightSchedule::Mode::LinearDecay, 5.0};
  CHECK(std::abs(weight_schedule(decay, 0.0, 250.0) - 5.0) < 1e-12);
  CHECK(std::abs(weight_schedule(decay, 250.0, 250.0)) < 1e-12);
  CHECK(weight_schedule(decay, 125.0, 250.0) == doctest::Approx(2.5));
  const WeightSchedule two{WeightSchedule::Mode::Constant, 2.0};
  for (double t : {0.0, 17.0, 250.0}) CHECK(weight_schedule(two, t, 250.0) == 2.0);
}

TEST_CASE("forward simulation") {
  const ScenarioConfig c;
  const OccupancyGrid live = live_grid(c);
  const auto tr = candidate_paths(Pose{50, 50, 0}, c)[3].trajectory;
  const OccupancyGrid post = forward_simulate(live, tr, {8.0, 0.3}, c);
  CHECK(mean_entropy(post) < mean_entropy(live));
  CHECK(forward_simulate(live, Trajectory{}, {8.0, 0.3}, c) == live);

  // one mapped target ahead: re-detected, its surroundings observed free
  OccupancyGrid one = live;
  one.set_prob(50, 60, 0.7);
  const std::vector<TimedPose> poses{{Pose{50.5, 50.5, 0}, 0.0}, {Pose{50.5, 50.5, 0}, 1.0}};
  ScenarioConfig still = c;
  still.mapping.prediction_step = false;
  const OccupancyGrid after = forward_simulate(one, poses, {}, still);
  const double r = (one.cell_center(50, 60) - Vec2(50.5, 50.5)).norm();
  CHECK(after.prob(50, 60) == doctest::Approx(std::min(
                                  0.9, logistic(logit(0.7) + logit(positive_sensor_model(r, 0, c.sensor))))));
  CHECK(after.prob(50, 61) == doctest::Approx(negative_sensor_model(11.0, c.sensor)));
}

TEST_CASE("utility") {
  const ScenarioConfig c0 = with_weight(0.0);
  const OccupancyGrid live = live_grid(c0);
  const auto tr = candidate_paths(Pose{50, 50, 0}, c0)[2].trajectory;
  const WindState wind{8.0, 0.4};

  const UtilityBreakdown u = utility(tr, live, wind, 0.0, c0);
  CHECK(u.w == 0.0);
  CHECK(u.total == u.entropy_term);
  CHECK(u.entropy_term > 0.0);

  const UtilityBreakdown empty = utility(Trajectory{}, live, wind, 0.0, c0);
  CHECK(empty.total == 0.0);

  ScenarioConfig c5 = with_weight(5.0);
  const UtilityBreakdown a = utility(tr, live, wind, 10.0, c5);
  const UtilityBreakdown b = utility(tr, live, wind, 10.0, c5);
  CHECK(a == b);
  CHECK(a.total == a.entropy_term + 5.0 * a.tracking_term);

  ScenarioConfig literal_sign = c0;
  literal_sign.planner.entropy_term = EntropyTerm::Literal;
  CHECK(utility(tr, live, wind, 0.0, literal_sign).entropy_term == -u.entropy_term);
}

TEST_CASE("utility never mutates the live grid") {
  const ScenarioConfig c = with_weight(5.0);
  OccupancyGrid live = live_grid(c);
  live.set_prob(40, 70, 0.85);
  live.residual = Vec2(0.2, -0.3);
  const OccupancyGrid before = live;
  Engine rng(1);
  for (const auto& cand : candidate_paths(Pose{50, 50, 0}, c)) {
    utility(cand.trajectory, live, {9.0, 0.2}, 5.0, c);
  }
  plan(live, Pose{50, 50, 0}, {9.0, 0.2}, 5.0, c, rng);
  CHECK(live == before);
}

TEST_CASE("select_best tie breaks and scale invariance") {
  std::vector<CandidateRecord> recs;
  const double deltas[] = {-0.6, -0.3, 0.0, 0.3, 0.6};
  const double totals[] = {0.2, 0.5, 0.1, 0.5, 0.4};
  for (int i = 0; i < 5; ++i) recs.push_back({i, deltas[i], {totals[i], 0.0, 0.0, totals[i]}});
  CHECK(select_best(recs) == 1);  // tie with index 3 at equal |delta|

  recs[2].utility.total = 0.5;
  CHECK(select_best(recs) == 2);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1), scale(0.01, 100);
  for (int trial = 0; trial < 200; ++trial) {
    for (auto& r : recs) r.utility.total = u(rng);
    const int before = select_best(recs);
    const double k = scale(rng);
    auto scaled = recs;
    for (auto& r : scaled) r.utility.total *= k;
    CHECK(select_best(scaled) == before);
  }
  CHECK(select_best({}) == -1);
}

TEST_CASE("increasing w never lowers the rank of the best tracking candidate") {
  ScenarioConfig base = with_weight(0.0);
  base.planner.tracking_form = TrackingForm::Complementary;
  OccupancyGrid live = live_grid(base);
  for (int r = 60; r < 64; ++r) live.set_prob(r, 70, 0.9);
  for (int r = 20; r < 22; ++r) live.set_prob(r, 35, 0.9);
  const Pose pose{50, 50, 0.3};
  const WindState wind{8.0, 1.0};

  int prev_rank = 1 << 20;
  for (double w : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0}) {
    ScenarioConfig c = base;
    c.planner.weight = {WeightSchedule::Mode::Constant, w};
    Engine rng(1);
    const auto recs = plan(live, pose, wind, 0.0, c, rng).decision.candidates;
    std::size_t best_track = 0;
    for (std::size_t i = 1; i < recs.size(); ++i) {
      if (recs[i].utility.tracking_term > recs[best_track].utility.tracking_term) best_track = i;
    }
    const int rank = rank_of(recs, best_track);
    CHECK(rank <= prev_rank);
    prev_rank = rank;
  }
  CHECK(prev_rank == 0);
}

TEST_CASE("zero wind and no mapped targets: tracking term equal across candidates") {
  const ScenarioConfig c = with_weight(5.0);
  Engine rng(1);
  const auto d = plan(live_grid(c), Pose{30, 40, 1.0}, {0.0, 0.0}, 0.0, c, rng).decision;
  REQUIRE(d.candidates.size() == 7);
  for (const auto& r : d.candidates) CHECK(r.utility.tracking_term == 1.0);
}

TEST_CASE("tree search on a blank map picks the most informative sweep") {
  const ScenarioConfig c = with_weight(0.0);
  Engine rng(1);
  const auto d = plan(live_grid(c), Pose{50, 50, 0}, {0.0, 0.0}, 0.0, c, rng).decision;
  const int best = select_best(d.candidates);
  for (const auto& r : d.candidates) {
    CHECK(r.utility.entropy_term <= d.candidates[static_cast<std::size_t>(best)].utility.entropy_term);
  }
  CHECK(d.chosen == d.candidates[static_cast<std::size_t>(best)].index);
}

TEST_CASE("planning is deterministic") {
  for (auto kind : {PlannerKind::TreeSearch, PlannerKind::RecedingHorizon, PlannerKind::Greedy,
                    PlannerKind::Lawnmower, PlannerKind::Random}) {
    ScenarioConfig c;
    c.planner.kind = kind;
    OccupancyGrid live = live_grid(c);
    live.set_prob(55, 75, 0.9);
    Engine a(77), b(77);
    const PlanResult x = plan(live, Pose{40, 60, -0.5}, {7.0, 2.0}, 30.0, c, a);
    const PlanResult y = plan(live, Pose{40, 60, -0.5}, {7.0, 2.0}, 30.0, c, b);
    CHECK(x.decision == y.decision);
    CHECK(x.trajectory.points() == y.trajectory.points());
  }
}

TEST_CASE("receding horizon keeps three of five waypoints") {
  ScenarioConfig tree;
  ScenarioConfig rh;
  rh.planner.kind = PlannerKind::RecedingHorizon;
  Engine rng(1);
  const OccupancyGrid live = live_grid(tree);
  const auto full = plan(live, Pose{50, 50, 0}, {8.0, 0.0}, 0.0, tree, rng);
  const auto cut = plan(live, Pose{50, 50, 0}, {8.0, 0.0}, 0.0, rh, rng);
  CHECK(full.decision.chosen == cut.decision.chosen);
  CHECK(cut.trajectory.waypoints().size() == 3);
  CHECK(cut.trajectory.arc_length() == doctest::Approx(0.6 * full.trajectory.arc_length()).epsilon(1e-6));
}

TEST_CASE("greedy scores candidates from the final pose only") {
  ScenarioConfig c;
  c.planner.kind = PlannerKind::Greedy;
  Engine rng(1);
  const OccupancyGrid live = live_grid(c);
  const auto d = plan(live, Pose{50, 50, 0}, {8.0, 0.0}, 0.0, c, rng).decision;
  ScenarioConfig tree;
  const auto full = plan(live, Pose{50, 50, 0}, {8.0, 0.0}, 0.0, tree, rng).decision;
  REQUIRE(d.candidates.size() == full.candidates.size());
  for (std::size_t i = 0; i < d.candidates.size(); ++i) {
    CHECK(d.candidates[i].utility.entropy_term < full.candidates[i].utility.entropy_term);
  }
}

TEST_CASE("depth-2 tree search scores each first leg by its best continuation") {
  ScenarioConfig c;
  c.planner.depth = 2;
  Engine rng(1);
  const OccupancyGrid live = live_grid(c);
  const auto res = plan(live, Pose{50, 50, 0}, {8.0, 0.0}, 0.0, c, rng);
  CHECK(res.decision.candidates.size() == 7);
  CHECK(res.trajectory.arc_length() == doctest::Approx(37.5).epsilon(0.05));
  ScenarioConfig one;
  const auto d1 = plan(live, Pose{50, 50, 0}, {8.0, 0.0}, 0.0, one, rng).decision;
  for (std::size_t i = 0; i < 7; ++i) {
    CHECK(res.decision.candidates[i].utility.entropy_term >
          d1.candidates[i].utility.entropy_term);
  }
}

TEST_CASE("lawnmower pattern") {
  ScenarioConfig c;
  c.planner.kind = PlannerKind::Lawnmower;
  CHECK(c.planner.lawnmower_spacing_factor * c.sensor.max_range == doctest::Approx(28.0));
  const Trajectory tr = lawnmower_path(Pose{2, 3, 0}, c);
  std::set<double> ys;
  for (const auto& w : tr.waypoints()) {
    ys.insert(w.y());
    CHECK((w.x() == doctest::Approx(1.0) || w.x() == doctest::Approx(99.0)));
  }
  CHECK(ys == std::set<double>{14.0, 42.0, 70.0, 98.0});
  CHECK(tr.waypoints().front() == Vec2(1.0, 14.0));
  CHECK(tr.arc_length() >= c.asv.speed * c.mission.budget);

  const Trajectory top = lawnmower_path(Pose{97, 95, 0}, c);
  CHECK(top.waypoints().front() == Vec2(99.0, 98.0));

  Engine rng(1);
  const auto res = plan(OccupancyGrid::from_config(c), Pose{2, 3, 0}, {}, 0.0, c, rng);
  CHECK(res.decision.chosen == -1);
  CHECK(res.decision.candidates.empty());
}

TEST_CASE("random planner is reproducible for a fixed seed") {
  ScenarioConfig c;
  c.planner.kind = PlannerKind::Random;
  const OccupancyGrid live = OccupancyGrid::from_config(c);
  Engine a(5), b(5), other(6);
  for (int k = 0; k < 10; ++k) {
    const auto x = plan(live, Pose{50, 50, 0}, {}, 0.0, c, a).trajectory;
    const auto y = plan(live, Pose{50, 50, 0}, {}, 0.0, c, b).trajectory;
    CHECK(x.waypoints() == y.waypoints());
    CHECK(x.arc_length() >= 0.25 * 37.5 * 0.99);
    for (const auto& p : x.points()) {
      CHECK(p.x() >= 0.0);
      CHECK(p.x() <= 100.0);
      CHECK(p.y() >= 0.0);
      CHECK(p.y() <= 100.0);
    }
  }
  CHECK(plan(live, Pose{50, 50, 0}, {}, 0.0, c, other).trajectory.waypoints() !=
        plan(live, Pose{50, 50, 0}, {}, 0.0, c, a).trajectory.waypoints());
}
