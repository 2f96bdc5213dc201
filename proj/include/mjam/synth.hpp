#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mjam/geometry.hpp"

namespace mjam::synth {

constexpr double kDt = 0.5;       // 2 Hz sampling
constexpr int kHistorySteps = 5;  // t_h = 2 s, current sample included
constexpr int kFutureSteps = 12;  // t_f = 6 s

// Kinematic state of one agent at one timestep, in the target frame.
struct AgentState {
  double x = 0.0;
  double y = 0.0;
  double v = 0.0;         // m/s
  double a = 0.0;         // m/s^2
  double yaw_rate = 0.0;  // rad/s
};

enum class AgentClass { kVehicle = 0, kPedestrian = 1 };

const char* to_string(AgentClass c);
AgentClass agent_class_from_string(const std::string& s);

struct AgentHistory {
  int agent_id = 0;
  AgentClass agent_class = AgentClass::kVehicle;
  std::vector<AgentState> states;  // kHistorySteps entries, oldest first
};

// One prediction instance: scene plus histories plus the future to predict.
struct Episode {
  geom::VectorScene scene;       // global frame
  geom::Pose2 target_pose;       // global frame, at the prediction instant
  AgentHistory target_history;   // target frame
  std::vector<AgentHistory> neighbor_histories;
  std::vector<geom::Vec2> ground_truth_future;  // kFutureSteps points, target frame
};

enum class Layout { kStraight = 0, kTIntersection = 1, kFourWay = 2, kCurve = 3 };

const char* to_string(Layout l);
Layout layout_from_string(const std::string& s);
// Number of future branches a target can take in this layout.
int layout_branch_count(Layout l);

struct ScenarioSpec {
  Layout layout = Layout::kFourWay;
  int min_vehicles = 1;
  int max_vehicles = 4;
  int min_pedestrians = 0;
  int max_pedestrians = 2;
  double min_speed = 5.0;   // m/s
  double max_speed = 12.0;  // m/s
  std::vector<double> branch_probabilities;  // one per exit, sums to 1
  double noise = 0.1;          // kinematic noise amplitude, 0 disables
  double p_interaction = 0.5;  // chance of a lead-vehicle or crossing-pedestrian story

  static ScenarioSpec for_layout(Layout l);
  void validate() const;  // throws std::invalid_argument naming the field
};

// Extra information about a generated episode, for diagnostics and tests.
struct EpisodeDebug {
  int branch = 0;
  std::string story;  // "", "lead_vehicle" or "pedestrian_yield"
};

// Deterministic for a fixed (spec, seed). Agents follow lane centerlines with
// bounded kinematic noise; the target's future follows one sampled branch.
Episode generate_episode(const ScenarioSpec& spec, uint64_t seed, EpisodeDebug* debug = nullptr);

struct Kinematics {
  std::vector<AgentState> states;
  std::vector<double> headings;  // unwrapped, radians from +y toward +x
};

// Derive speed, acceleration and yaw rate from a position track sampled at
// dt. Central differences inside, one-sided at the endpoints; yaw is
// unwrapped before differencing. Throws on fewer than 3 positions.
Kinematics derive_kinematics(const std::vector<geom::Vec2>& positions, double dt = kDt);

// Drop neighbors whose position at the prediction instant lies outside the
// interaction space (closed region: boundary agents are kept).
void filter_to_interaction_space(Episode& episode, const geom::InteractionSpace& space);

// JSONL dataset: a versioned header line followed by one episode per line.
void write_dataset(const std::string& path, const std::vector<Episode>& episodes);
std::vector<Episode> read_dataset(const std::string& path);

std::string episode_to_json(const Episode& e);
Episode episode_from_json(const std::string& line);

}  // namespace mjam::synth
