#include "vaep/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "vaep/errors.hpp"
#include "vaep/rng.hpp"

namespace vaep::synth {
namespace {

constexpr double kPeriodSeconds = 45.0 * 60.0;
constexpr double kPi = 3.14159265358979323846;

enum class Line { gk, def, mid, fwd };

struct Slot {
  std::string player_id;
  std::string position;
  Line line;
  double on_at = 0.0;    // game seconds
  double off_at = 1e18;  // game seconds
  double skill = 0.5;
};

enum class Restart { none, kickoff, throw_in, corner, free_kick, penalty, goal_kick };

struct Pos {
  double x, y;
};

Pos mirror(Pos p) { return {kPitchLength - p.x, kPitchWidth - p.y}; }
Pos clamp(Pos p) {
  return {std::clamp(p.x, 0.0, kPitchLength), std::clamp(p.y, 0.0, kPitchWidth)};
}
double goal_distance(Pos p) { return std::hypot(kGoalX - p.x, kGoalY - p.y); }
bool in_box(Pos p) { return p.x >= 88.5 && std::abs(p.y - kGoalY) <= 20.16; }

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double stable_unit(const std::string& key) { return double(mix_seed(fnv1a(key)) >> 11) * 0x1.0p-53; }

std::string two_digits(int n) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02d", n);
  return buf;
}

class Simulator {
 public:
  explicit Simulator(const SynthConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

  Game run() {
    const bool coin = rng_.bernoulli(0.5);
    meta_.game_id = cfg_.game_id;
    meta_.home_team_id = cfg_.home_team_id;
    meta_.away_team_id = cfg_.away_team_id;
    meta_.home_attacks_right = {coin, !coin};
    build_rosters();

    const std::size_t first_half = cfg_.n_actions / 2;
    for (int period = 1; period <= 2; ++period) {
      const std::size_t target = period == 1 ? first_half : cfg_.n_actions;
      if (actions_.size() >= target) continue;
      period_ = period;
      const std::size_t in_period = target - actions_.size();
      clock_ = (period - 1) * kPeriodSeconds;
      pace_ = kPeriodSeconds / double(std::max<std::size_t>(in_period, 1)) / 2.0;
      team_ = period == 1 ? 0 : 1;
      ball_ = {52.5, 34.0};
      restart_ = Restart::kickoff;
      while (actions_.size() < target) step();
      actions_.resize(target);
    }

    for (int t = 0; t < 2; ++t) {
      for (const auto& s : roster_[t]) {
        const double on = std::min(s.on_at, 2 * kPeriodSeconds);
        const double off = std::min(s.off_at, 2 * kPeriodSeconds);
        if (off <= on) continue;
        PlayerInfo p;
        p.team_id = team_id(t);
        p.minutes = std::round((off - on) / 60.0);
        p.position = s.position;
        p.birth_date = birth_date(s.player_id);
        meta_.players[s.player_id] = std::move(p);
      }
    }
    return build_game(std::move(actions_), std::move(meta_));
  }

 private:
  const std::string& team_id(int t) const { return t == 0 ? cfg_.home_team_id : cfg_.away_team_id; }

  static std::string birth_date(const std::string& player_id) {
    const double u = stable_unit(player_id + "#born");
    const int year = 1986 + int(u * 16.0);
    const int month = 1 + int(stable_unit(player_id + "#m") * 12.0);
    const int day = 1 + int(stable_unit(player_id + "#d") * 28.0);
    return std::to_string(year) + "-" + two_digits(month) + "-" + two_digits(day);
  }

  void build_rosters() {
    static constexpr std::array<std::pair<const char*, Line>, 13> kSquad{{
        {"GK", Line::gk},  {"LB", Line::def}, {"CB", Line::def}, {"CB", Line::def},
        {"RB", Line::def}, {"DM", Line::mid}, {"CM", Line::mid}, {"AM", Line::mid},
        {"LW", Line::fwd}, {"ST", Line::fwd}, {"RW", Line::fwd}, {"CM", Line::mid},
        {"ST", Line::fwd},
    }};
    for (int t = 0; t < 2; ++t) {
      auto& squad = roster_[t];
      for (int i = 0; i < 13; ++i) {
        Slot s;
        s.player_id = team_id(t) + "-" + two_digits(i + 1);
        s.position = kSquad[i].first;
        s.line = kSquad[i].second;
        s.skill = stable_unit(s.player_id + "#skill");
        if (i >= 11) s.on_at = 1e18;
        squad.push_back(std::move(s));
      }
      // Substitutions: a winger for the bench striker, a midfielder for the
      // bench midfielder.
      if (rng_.bernoulli(0.6)) {
        const double at = rng_.uniform(55.0, 80.0) * 60.0;
        const int out = 8 + int(rng_.below(3));
        squad[out].off_at = at;
        squad[12].on_at = at;
      }
      if (rng_.bernoulli(0.4)) {
        const double at = rng_.uniform(60.0, 85.0) * 60.0;
        const int out = 5 + int(rng_.below(3));
        squad[out].off_at = at;
        squad[11].on_at = at;
      }
    }
  }

  double team_skill(int t) const { return cfg_.team_skill[std::size_t(t)]; }

  const Slot& pick_by_x(int t, double x) {
    std::array<double, 4> w;
    if (x < 35) {
      w = {0.03, 0.6, 0.3, 0.07};
    } else if (x < 70) {
      w = {0.0, 0.25, 0.5, 0.25};
    } else {
      w = {0.0, 0.1, 0.35, 0.55};
    }
    return pick_weighted(t, w);
  }

  const Slot& pick_weighted(int t, const std::array<double, 4>& line_weights) {
    std::vector<const Slot*> candidates;
    std::vector<double> weights;
    for (const auto& s : roster_[t]) {
      if (s.on_at <= clock_ && clock_ < s.off_at) {
        candidates.push_back(&s);
        weights.push_back(line_weights[std::size_t(s.line)]);
      }
    }
    double total = 0.0;
    for (double w : weights) total += w;
    if (total <= 0.0) return *candidates.front();
    double r = rng_.uniform() * total;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      r -= weights[i];
      if (r < 0.0) return *candidates[i];
    }
    return *candidates.back();
  }

  const Slot& keeper(int t) { return pick_weighted(t, {1.0, 0.0, 0.0, 0.0}); }
  const Slot& shooter(int t) { return pick_weighted(t, {0.0, 0.1, 0.3, 0.6}); }

  // Emits one action performed by team t; positions are in t's attacking frame.
  void emit(int t, const Slot& who, ActionType type, Pos start, Pos end, ActionResult result,
            BodyPart body, double duration_scale = 1.0) {
    start = clamp(start);
    end = clamp(end);
    const int dir = attack_right(t) ? 1 : -1;
    const Pos raw_start = dir > 0 ? start : mirror(start);
    const Pos raw_end = dir > 0 ? end : mirror(end);
    Action a;
    a.game_id = cfg_.game_id;
    a.action_id = std::int64_t(actions_.size());
    a.period = period_;
    a.start_time = clock_;
    a.end_time = clock_ + rng_.uniform(0.3, 1.5) * pace_ * duration_scale;
    a.start_x = raw_start.x;
    a.start_y = raw_start.y;
    a.end_x = raw_end.x;
    a.end_y = raw_end.y;
    a.player_id = who.player_id;
    a.team_id = team_id(t);
    a.type = type;
    a.body_part = body;
    a.result = result;
    clock_ = a.end_time + rng_.uniform(0.2, 1.4) * pace_;
    actions_.push_back(std::move(a));
  }

  bool attack_right(int t) const {
    const bool home_right = meta_.home_attacks_right[std::size_t(period_ - 1)];
    return t == 0 ? home_right : !home_right;
  }

  void stoppage(double seconds) { clock_ += seconds; }

  // Possession passes to the other team at `where` (current team frame).
  void turnover(Pos where) {
    team_ = 1 - team_;
    ball_ = mirror(clamp(where));
  }

  // Ball goes loose after a defensive touch; either side may pick it up.
  void loose_ball(int toucher, Pos where_in_toucher_frame) {
    const Pos p = clamp(where_in_toucher_frame);
    if (rng_.bernoulli(0.55)) {
      team_ = toucher;
      ball_ = p;
    } else {
      team_ = 1 - toucher;
      ball_ = mirror(p);
    }
  }

  void goal_scored(int scoring_team) {
    team_ = 1 - scoring_team;
    ball_ = {52.5, 34.0};
    restart_ = Restart::kickoff;
    stoppage(45.0);
  }

  void step() {
    switch (restart_) {
      case Restart::kickoff:
        return kickoff();
      case Restart::throw_in:
        return throw_in();
      case Restart::corner:
        return corner();
      case Restart::free_kick:
        return free_kick();
      case Restart::penalty:
        return penalty();
      case Restart::goal_kick:
        return goal_kick();
      case Restart::none:
        return open_play();
    }
  }

  void kickoff() {
    restart_ = Restart::none;
    const Slot& who = pick_weighted(team_, {0.0, 0.0, 0.4, 0.6});
    const Pos end{rng_.uniform(38.0, 48.0), 34.0 + rng_.normal(0.0, 6.0)};
    emit(team_, who, ActionType::pass, ball_, end, ActionResult::success, BodyPart::foot);
    ball_ = clamp(end);
  }

  void throw_in() {
    restart_ = Restart::none;
    const Slot& who = pick_by_x(team_, ball_.x);
    const double inward = ball_.y < kGoalY ? 1.0 : -1.0;
    const Pos end{ball_.x + rng_.normal(3.0, 7.0), ball_.y + inward * rng_.uniform(3.0, 15.0)};
    if (rng_.bernoulli(0.8)) {
      emit(team_, who, ActionType::throw_in, ball_, end, ActionResult::success, BodyPart::other);
      ball_ = clamp(end);
    } else {
      emit(team_, who, ActionType::throw_in, ball_, end, ActionResult::fail, BodyPart::other);
      turnover(end);
    }
  }

  void corner() {
    restart_ = Restart::none;
    const Slot& who = pick_weighted(team_, {0.0, 0.15, 0.6, 0.25});
    if (rng_.bernoulli(0.8)) {
      const Pos end{rng_.uniform(93.0, 101.0), 34.0 + rng_.normal(0.0, 6.0)};
      const bool ok = rng_.bernoulli(0.3);
      emit(team_, who, ActionType::crossed_corner, ball_, end,
           ok ? ActionResult::success : ActionResult::fail, BodyPart::foot);
      if (ok) {
        ball_ = clamp(end);
      } else {
        defend_cross(end);
      }
    } else {
      const Pos end{ball_.x - rng_.uniform(5.0, 15.0), ball_.y + (ball_.y < kGoalY ? 8.0 : -8.0)};
      emit(team_, who, ActionType::short_corner, ball_, end, ActionResult::success, BodyPart::foot);
      ball_ = clamp(end);
    }
  }

  void free_kick() {
    restart_ = Restart::none;
    const double d = goal_distance(ball_);
    const Slot& who = pick_weighted(team_, {0.0, 0.2, 0.55, 0.25});
    if (d < 30.0 && std::abs(ball_.y - kGoalY) < 18.0 && rng_.bernoulli(0.35 * cfg_.shot_rate)) {
      shoot(ActionType::shot_free_kick, 0.55 * goal_probability(d), who);
      return;
    }
    if (ball_.x > 70.0) {
      const Pos end{rng_.uniform(92.0, 102.0), 34.0 + rng_.normal(0.0, 7.0)};
      const bool ok = rng_.bernoulli(0.3);
      emit(team_, who, ActionType::crossed_free_kick, ball_, end,
           ok ? ActionResult::success : ActionResult::fail, BodyPart::foot);
      if (ok) {
        ball_ = clamp(end);
      } else {
        defend_cross(end);
      }
      return;
    }
    const Pos end{ball_.x + rng_.normal(6.0, 8.0), ball_.y + rng_.normal(0.0, 10.0)};
    const bool ok = rng_.bernoulli(0.9);
    emit(team_, who, ActionType::short_free_kick, ball_, end,
         ok ? ActionResult::success : ActionResult::fail, BodyPart::foot);
    if (ok) {
      ball_ = clamp(end);
    } else {
      turnover(end);
    }
  }

  void penalty() {
    restart_ = Restart::none;
    ball_ = {94.0, 34.0};
    shoot(ActionType::shot_penalty, 0.76, shooter(team_));
  }

  void goal_kick() {
    restart_ = Restart::none;
    const Slot& who = keeper(team_);
    const Pos start{rng_.uniform(1.0, 6.0), 34.0 + rng_.normal(0.0, 5.0)};
    const Pos end{rng_.uniform(20.0, 65.0), 34.0 + rng_.normal(0.0, 15.0)};
    const bool ok = rng_.bernoulli(0.6);
    emit(team_, who, ActionType::pass, start, end, ok ? ActionResult::success : ActionResult::fail,
         BodyPart::foot);
    if (ok) {
      ball_ = clamp(end);
    } else {
      turnover(end);
    }
  }

  // Shot by team_ from ball_; p_goal is the conversion chance.
  void shoot(ActionType type, double p_goal, const Slot& who) {
    const int att = team_;
    const Pos end{kPitchLength, 34.0 + rng_.normal(0.0, 2.5)};
    const BodyPart body =
        type == ActionType::shot && ball_.x > 94.0 && rng_.bernoulli(0.3) ? BodyPart::head : BodyPart::foot;
    if (rng_.bernoulli(p_goal)) {
      emit(att, who, type, ball_, end, ActionResult::success, body);
      goal_scored(att);
      return;
    }
    emit(att, who, type, ball_, end, ActionResult::fail, body);
    const int def = 1 - att;
    const double r = rng_.uniform();
    if (r < 0.35) {
      const Pos at{rng_.uniform(0.5, 3.0), 34.0 + rng_.normal(0.0, 2.0)};
      emit(def, keeper(def), ActionType::keeper_save, at, at, ActionResult::success, BodyPart::none,
           0.3);
      if (rng_.bernoulli(0.3)) {
        team_ = att;
        ball_ = {kPitchLength, rng_.bernoulli(0.5) ? 0.0 : kPitchWidth};
        restart_ = Restart::corner;
        stoppage(15.0);
      } else {
        team_ = def;
        ball_ = at;
        restart_ = Restart::goal_kick;
      }
    } else if (r < 0.55) {
      const Pos at = mirror(ball_);
      clearance(def, {at.x + 1.0, at.y});
    } else if (r < 0.65) {
      team_ = att;
      ball_ = {kPitchLength, rng_.bernoulli(0.5) ? 0.0 : kPitchWidth};
      restart_ = Restart::corner;
      stoppage(15.0);
    } else {
      team_ = def;
      ball_ = {5.5, 34.0};
      restart_ = Restart::goal_kick;
      stoppage(12.0);
    }
  }

  // Defender clears from `at` (defender frame). Inside the box there is a
  // small chance of an own goal.
  void clearance(int def, Pos at) {
    const Slot& who = pick_weighted(def, {0.0, 0.75, 0.2, 0.05});
    const bool near_goal = at.x < 16.5 && std::abs(at.y - kGoalY) < 20.16;
    if (near_goal && rng_.bernoulli(0.006 * cfg_.shot_rate)) {
      const Pos end{0.0, 34.0 + rng_.normal(0.0, 2.0)};
      emit(def, who, ActionType::clearance, at, end, ActionResult::own_goal, BodyPart::foot);
      goal_scored(1 - def);
      return;
    }
    const Pos end{at.x + rng_.uniform(20.0, 45.0), at.y + rng_.normal(0.0, 15.0)};
    emit(def, who, ActionType::clearance, at, end,
         ActionResult::success, rng_.bernoulli(0.4) ? BodyPart::head : BodyPart::foot);
    const Pos landed = clamp(end);
    if (landed.y <= 0.0 || landed.y >= kPitchWidth) {
      team_ = 1 - def;
      ball_ = mirror(landed);
      restart_ = Restart::throw_in;
      stoppage(10.0);
      return;
    }
    loose_ball(def, landed);
  }

  // A failed delivery into the box from team_; the defending side deals with it.
  void defend_cross(Pos end_in_att_frame) {
    const int def = 1 - team_;
    const Pos at = mirror(clamp(end_in_att_frame));
    const double r = rng_.uniform();
    if (r < 0.4) {
      const bool held = rng_.bernoulli(0.9);
      emit(def, keeper(def), ActionType::keeper_claim, at, at,
           held ? ActionResult::success : ActionResult::fail, BodyPart::none, 0.3);
      if (held) {
        team_ = def;
        ball_ = at;
        restart_ = Restart::goal_kick;
      } else {
        team_ = 1 - def;
        ball_ = mirror(at);
      }
    } else if (r < 0.85) {
      clearance(def, at);
    } else {
      const Pos end{at.x + rng_.uniform(15.0, 30.0), at.y + rng_.normal(0.0, 12.0)};
      emit(def, keeper(def), ActionType::keeper_punch, at, end, ActionResult::success,
           BodyPart::none, 0.3);
      loose_ball(def, end);
    }
  }

  double shot_hazard(Pos p) const {
    const double d = goal_distance(p);
    if (d > 32.0) return 0.0;
    const double angle = std::atan2(std::abs(p.y - kGoalY), std::max(kGoalX - p.x, 1e-9));
    return cfg_.shot_rate * 0.60 * std::exp(-std::max(d - 7.0, 0.0) / 8.0) *
           (1.0 - 0.6 * angle / (kPi / 2.0));
  }

  void open_play() {
    const int att = team_;
    const int def = 1 - att;
    const double skill = team_skill(att);

    if (rng_.bernoulli(shot_hazard(ball_))) {
      shoot(ActionType::shot, goal_probability(goal_distance(ball_)), shooter(att));
      return;
    }

    // Defensive interventions before the attacker acts.
    const double press = 0.012 + 0.01 * (ball_.x > 70.0);
    if (rng_.bernoulli(press)) {
      const Pos at = mirror(ball_);
      const Slot& who = pick_by_x(def, at.x);
      const double c = rng_.uniform();
      const ActionResult res =
          c < 0.88 ? ActionResult::fail : (c < 0.99 ? ActionResult::yellow_card : ActionResult::red_card);
      emit(def, who, ActionType::foul, at, at, res, BodyPart::foot, 0.2);
      stoppage(rng_.uniform(10.0, 25.0));
      if (in_box(ball_) && cfg_.shot_rate > 0.0 && rng_.bernoulli(0.4)) {
        restart_ = Restart::penalty;
      } else {
        if (in_box(ball_)) ball_.x = 86.0;
        restart_ = Restart::free_kick;
      }
      return;
    }
    if (rng_.bernoulli(0.02)) {
      const Pos at = mirror(ball_);
      const Slot& who = pick_by_x(def, at.x);
      if (rng_.bernoulli(0.55)) {
        emit(def, who, ActionType::tackle, at, at, ActionResult::success, BodyPart::foot, 0.4);
        team_ = def;
        ball_ = at;
      } else {
        emit(def, who, ActionType::tackle, at, at, ActionResult::fail, BodyPart::foot, 0.4);
      }
      return;
    }

    const Slot& who = pick_by_x(att, ball_.x);
    const double r = rng_.uniform();
    const bool wide = std::abs(ball_.y - kGoalY) > 14.0;
    if (r < 0.28) {
      const double len = rng_.uniform(3.0, 12.0);
      const double heading = rng_.normal(0.0, 0.7);
      const Pos end{ball_.x + len * std::cos(heading), ball_.y + len * std::sin(heading)};
      emit(att, who, ActionType::dribble, ball_, end, ActionResult::success, BodyPart::foot);
      ball_ = clamp(end);
    } else if (r < 0.315) {
      const bool ok = rng_.bernoulli(0.45 + 0.3 * (skill - 0.5) + 0.2 * (who.skill - 0.5));
      const Pos end{ball_.x + 3.0, ball_.y};
      emit(att, who, ActionType::take_on, ball_, end, ok ? ActionResult::success : ActionResult::fail,
           BodyPart::foot);
      if (ok) {
        ball_ = clamp(end);
      } else {
        const Pos at = mirror(ball_);
        emit(def, pick_by_x(def, at.x), ActionType::tackle, at, at, ActionResult::success,
             BodyPart::foot, 0.4);
        team_ = def;
        ball_ = at;
      }
    } else if (r < 0.327) {
      const Pos end{ball_.x + rng_.normal(0.0, 2.0), ball_.y + rng_.normal(0.0, 2.0)};
      emit(att, who, ActionType::bad_touch, ball_, end, ActionResult::fail, BodyPart::foot);
      turnover(end);
    } else if (ball_.x > 78.0 && wide && r < 0.5) {
      cross(who);
    } else {
      pass(who, skill);
    }
  }

  void cross(const Slot& who) {
    const Pos end{rng_.uniform(90.0, 102.0), 34.0 + rng_.normal(0.0, 7.0)};
    const bool ok = rng_.bernoulli(0.28);
    emit(team_, who, ActionType::cross, ball_, end, ok ? ActionResult::success : ActionResult::fail,
         BodyPart::foot);
    if (ok) {
      ball_ = clamp(end);
    } else {
      defend_cross(end);
    }
  }

  void pass(const Slot& who, double team_skill) {
    const double advance = std::max(ball_.x - 60.0, 0.0) / 45.0;
    const double p_ok = std::clamp(cfg_.pass_success_base + 0.15 * (team_skill - 0.5) +
                                       0.1 * (who.skill - 0.5) - 0.35 * advance,
                                   0.05, 0.98);
    double dx = rng_.normal(cfg_.drift_mean, cfg_.drift_sd);
    if (ball_.x + dx > 103.0) dx = rng_.uniform(-10.0, 103.0 - ball_.x);
    const Pos raw_end{ball_.x + dx, ball_.y + rng_.normal(0.0, 11.0)};
    const BodyPart body = rng_.bernoulli(0.06) ? BodyPart::head : BodyPart::foot;

    if (ball_.x > 55.0 && dx > 12.0 && rng_.bernoulli(0.04)) {
      emit(team_, who, ActionType::pass, ball_, raw_end, ActionResult::offside, body);
      const Pos spot = clamp(raw_end);
      team_ = 1 - team_;
      ball_ = mirror(spot);
      restart_ = Restart::free_kick;
      stoppage(12.0);
      return;
    }
    if (rng_.bernoulli(p_ok)) {
      emit(team_, who, ActionType::pass, ball_, raw_end, ActionResult::success, body);
      ball_ = clamp(raw_end);
      if (ball_.y <= 0.0 || ball_.y >= kPitchWidth) ball_.y = std::clamp(ball_.y, 2.0, kPitchWidth - 2.0);
      return;
    }
    emit(team_, who, ActionType::pass, ball_, raw_end, ActionResult::fail, body);
    if (raw_end.y < 0.0 || raw_end.y > kPitchWidth) {
      turnover(raw_end);
      restart_ = Restart::throw_in;
      stoppage(10.0);
      return;
    }
    const int def = 1 - team_;
    const Pos at = mirror(clamp(raw_end));
    if (at.x < 6.0 && std::abs(at.y - kGoalY) < 12.0 && rng_.bernoulli(0.6)) {
      emit(def, keeper(def), ActionType::keeper_pick_up, at, at, ActionResult::success,
           BodyPart::none, 0.3);
      team_ = def;
      ball_ = at;
      restart_ = Restart::goal_kick;
      return;
    }
    if (rng_.bernoulli(0.5)) {
      emit(def, pick_by_x(def, at.x), ActionType::interception, at, at, ActionResult::success,
           BodyPart::foot, 0.3);
    } else if (at.x < 20.0 && rng_.bernoulli(0.5)) {
      clearance(def, at);
      return;
    }
    team_ = def;
    ball_ = at;
  }

  const SynthConfig& cfg_;
  Rng rng_;
  GameMetadata meta_;
  std::array<std::vector<Slot>, 2> roster_;
  std::vector<Action> actions_;
  int period_ = 1;
  double clock_ = 0.0;
  double pace_ = 1.5;
  int team_ = 0;
  Pos ball_{52.5, 34.0};
  Restart restart_ = Restart::kickoff;
};

}  // namespace

void validate(const SynthConfig& cfg) {
  const auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw errors::invalid_argument("ingest", std::string(name) + " must lie in [0, 1]");
    }
  };
  prob(cfg.team_skill[0], "team_skill[home]");
  prob(cfg.team_skill[1], "team_skill[away]");
  prob(cfg.pass_success_base, "pass_success_base");
  if (!(cfg.shot_rate >= 0.0) || cfg.shot_rate > 3.0) {
    throw errors::invalid_argument("ingest", "shot_rate must lie in [0, 3]");
  }
  if (!(cfg.drift_sd >= 0.0) || !std::isfinite(cfg.drift_mean)) {
    throw errors::invalid_argument("ingest", "drift parameters must be finite, sd >= 0");
  }
  if (cfg.home_team_id == cfg.away_team_id) {
    throw errors::invalid_argument("ingest", "home and away team ids must differ");
  }
}

double goal_probability(double distance) { return 0.90 * std::exp(-std::max(distance, 0.0) / 4.5); }

Game generate_synthetic_game(const SynthConfig& cfg) {
  validate(cfg);
  return Simulator(cfg).run();
}

std::vector<Game> generate_corpus(const CorpusConfig& cfg) {
  if (cfg.n_teams < 2) throw errors::invalid_argument("ingest", "a corpus needs at least two teams");
  Rng league(stream_seed(cfg.seed, 0xfeed));
  std::vector<double> skills(cfg.n_teams);
  for (auto& s : skills) s = league.uniform(0.3, 0.7);

  std::vector<Game> games;
  games.reserve(cfg.n_games);
  for (std::size_t g = 0; g < cfg.n_games; ++g) {
    const std::size_t n = cfg.n_teams;
    const std::size_t round = g / n;
    const std::size_t home = g % n;
    const std::size_t away = (home + 1 + round % (n - 1)) % n;
    SynthConfig sc;
    sc.seed = stream_seed(cfg.seed, g);
    sc.n_actions = cfg.n_actions;
    sc.shot_rate = cfg.shot_rate;
    sc.team_skill = {skills[home], skills[away]};
    char id[16];
    std::snprintf(id, sizeof id, "g%04zu", g + 1);
    sc.game_id = id;
    sc.home_team_id = "T" + two_digits(int(home + 1));
    sc.away_team_id = "T" + two_digits(int(away + 1));
    games.push_back(generate_synthetic_game(sc));
  }
  return games;
}

}  // namespace vaep::synth
