#include "synthetic.hpp"

#include <algorithm>
#include <cmath>

namespace searchlab {

namespace {

double hash_unit(std::uint64_t h) { return (h >> 11) * 0x1.0p-53; }

double uniform3(std::uint64_t h) {
  switch (h % 3) {
    case 0: return -1.0;
    case 1: return 0.0;
    default: return 1.0;
  }
}

// Mean -> distribution over leaf values: 0 means uniform on {-1, 0, +1},
// anything else a two-point draw on {-1, +1} with P(+1) = (1 + mean) / 2.
double draw_with_mean(std::uint64_t h, double mean) {
  if (mean == 0.0) return uniform3(h);
  return hash_unit(h) < (1.0 + mean) / 2.0 ? 1.0 : -1.0;
}

}  // namespace

PathTreeGame::PathTreeGame(int depth) : depth_(depth) {
  require(depth >= 1 && depth <= 48, ErrorCode::InvalidArgument,
          "tree depth must be in [1, 48]");
}

GameState PathTreeGame::initial_state() const { return tag(GameState{}); }

void PathTreeGame::legal_actions(const GameState& s, std::vector<Action>& out) const {
  check_owned(s);
  out.clear();
  if (static_cast<int>(s.ply) < depth_) {
    out.push_back(0);
    out.push_back(1);
  }
}

GameState PathTreeGame::apply_action(const GameState& s, Action a) const {
  check_owned(s);
  require(static_cast<int>(s.ply) < depth_, ErrorCode::IllegalAction,
          "tree game: move below a leaf");
  require(a == 0 || a == 1, ErrorCode::IllegalAction,
          "tree game: actions are 0 and 1");
  GameState n = s;
  n.words[0] |= static_cast<std::uint64_t>(a) << s.ply;
  n.ply = s.ply + 1;
  return n;
}

bool PathTreeGame::is_terminal(const GameState& s) const {
  check_owned(s);
  return static_cast<int>(s.ply) == depth_;
}

double PathTreeGame::terminal_reward(const GameState& s) const {
  check_owned(s);
  require(static_cast<int>(s.ply) == depth_, ErrorCode::NotTerminal,
          "tree game: reward of an interior node");
  return leaf_value_at(s.words[0]);
}

// ---------------------------------------------------------------------------

KStepGame::KStepGame(KStepSpec spec)
    : PathTreeGame(spec.depth), spec_(std::move(spec)) {
  require(spec_.depth % 2 == 0, ErrorCode::InvalidArgument,
          "kstep: depth must be even");
  require(!spec_.critical_depths.empty(), ErrorCode::InvalidArgument,
          "kstep: at least one critical depth required");
  if (spec_.correct_actions.empty())
    spec_.correct_actions.assign(spec_.critical_depths.size(), 0);
  require(spec_.correct_actions.size() == spec_.critical_depths.size(),
          ErrorCode::InvalidArgument,
          "kstep: correct_actions must match critical_depths");
  int prev = -1;
  for (std::size_t i = 0; i < spec_.critical_depths.size(); ++i) {
    int d = spec_.critical_depths[i];
    require(d > prev, ErrorCode::InvalidArgument,
            "kstep: critical depths must be strictly increasing");
    require(d % 2 == 0 && d >= 0 && d < spec_.depth, ErrorCode::InvalidArgument,
            "kstep: critical depths must be even and below the leaf depth");
    int a = spec_.correct_actions[i];
    require(a == 0 || a == 1, ErrorCode::InvalidArgument,
            "kstep: correct actions are 0 or 1");
    critical_mask_ |= 1ULL << d;
    correct_bits_ |= static_cast<std::uint64_t>(a) << d;
    prev = d;
  }
  draw_seed_ = mix64(spec_.seed);
}

std::string KStepGame::name() const { return "kstep-tree"; }

double KStepGame::leaf_value_at(std::uint64_t path) const {
  if ((path & critical_mask_) == correct_bits_) return 1.0;
  return uniform3(hash_combine(draw_seed_, path));
}

// ---------------------------------------------------------------------------

DualGame::DualGame(DualSpec spec)
    : PathTreeGame(spec.depth), spec_(spec) {
  require(spec_.depth % 2 == 0 && spec_.depth >= 4, ErrorCode::InvalidArgument,
          "dual: depth must be even and at least 4");
  require(spec_.max_criticals[0] == 0, ErrorCode::InvalidArgument,
          "dual: the first Max critical is the root (0)");
  int x2 = spec_.max_criticals[1];
  require(x2 % 2 == 0 && x2 >= 2 && x2 <= spec_.depth - 2,
          ErrorCode::InvalidArgument,
          "dual: x2 must be even and in [2, depth-2]");
  auto [y1, y2] = spec_.min_criticals;
  require(y1 % 2 == 1 && y2 % 2 == 1 && y1 >= 1 && y2 <= spec_.depth - 1 &&
              y1 < y2,
          ErrorCode::InvalidArgument,
          "dual: min criticals must be odd, increasing, in [1, depth-1]");
  require(spec_.leaf_mean_a > -1.0 && spec_.leaf_mean_a < 1.0 &&
              spec_.leaf_mean_b > -1.0 && spec_.leaf_mean_b < 1.0,
          ErrorCode::InvalidArgument, "dual: leaf means must be in (-1, 1)");
  draw_seed_ = mix64(spec_.seed);
}

std::string DualGame::name() const { return "dual-tree"; }

double DualGame::leaf_value_at(std::uint64_t path) const {
  std::uint64_t h = hash_combine(draw_seed_, path);
  if ((path & 1) == 0) {
    // Subtree A: Max wins by moving left again at x2.
    if (((path >> spec_.max_criticals[1]) & 1) == 0) return 1.0;
    return draw_with_mean(h, spec_.leaf_mean_a);
  }
  // Subtree B: Min wins by moving left at y1 and y2.
  if (((path >> spec_.min_criticals[0]) & 1) == 0 &&
      ((path >> spec_.min_criticals[1]) & 1) == 0)
    return -1.0;
  return draw_with_mean(h, spec_.leaf_mean_b);
}

// ---------------------------------------------------------------------------

ScenarioGame::Region ScenarioGame::make_region(std::uint64_t prefix,
                                               int prefix_len, int depth,
                                               double frac,
                                               std::uint64_t draw_seed) {
  Region r{prefix, prefix_len, false, false, {0, 0}};
  int suffix_bits = depth - prefix_len;
  std::uint64_t n = 1ULL << suffix_bits;
  auto k = static_cast<std::uint64_t>(std::floor(frac * static_cast<double>(n)));
  if (k == 0) return r;  // no +1 leaves
  if (k >= n) {
    r.constant = true;
    return r;
  }
  // Rank all leaf hashes; the k lowest (hash, path) pairs are the +1 leaves.
  std::vector<std::array<std::uint64_t, 2>> keys;
  keys.reserve(n);
  for (std::uint64_t suffix = 0; suffix < n; ++suffix) {
    std::uint64_t path = prefix | (suffix << prefix_len);
    keys.push_back({hash_combine(draw_seed, path), path});
  }
  std::nth_element(keys.begin(), keys.begin() + k, keys.end());
  r.any_plus = true;
  r.threshold = keys[k];
  return r;
}

ScenarioGame::ScenarioGame(ScenarioSpec spec)
    : PathTreeGame(spec.subtree_depth + (spec.kind == 'A' ? 1 : 3)),
      spec_(spec) {
  require(spec_.kind == 'A' || spec_.kind == 'B', ErrorCode::InvalidArgument,
          "scenario: kind must be A or B");
  int max_sub = spec_.kind == 'A' ? 20 : 18;  // keeps region tables <= 2^20
  require(spec_.subtree_depth >= 1 && spec_.subtree_depth <= max_sub,
          ErrorCode::InvalidArgument,
          "scenario: subtree_depth out of the supported range");
  require(spec_.p >= 0.0 && spec_.p <= 1.0, ErrorCode::InvalidArgument,
          "scenario: p must be in [0, 1]");
  require(spec_.q >= 0.0 && spec_.q <= 1.0, ErrorCode::InvalidArgument,
          "scenario: q must be in [0, 1]");
  draw_seed_ = mix64(spec_.seed);

  if (spec_.kind == 'A') {
    // Left: all +1. Right: exact fraction p.
    regions_.push_back(Region{0, 1, true, true, {0, 0}});
    regions_.push_back(make_region(1, 1, depth_, spec_.p, draw_seed_));
  } else {
    // Path bit 0 = root move, bit 1 = level-1 (Min) move, bit 2 = level-2
    // (Max) move. Left-left at levels 0 and 2 is the implanted win.
    regions_.push_back(make_region(1, 1, depth_, spec_.q, draw_seed_));
    for (std::uint64_t mid : {0ULL, 1ULL}) {
      std::uint64_t win = mid << 1;          // b0=0, b2=0
      std::uint64_t frac = (mid << 1) | 4;   // b0=0, b2=1
      regions_.push_back(Region{win, 3, true, true, {0, 0}});
      regions_.push_back(make_region(frac, 3, depth_, spec_.p, draw_seed_));
    }
  }
}

std::string ScenarioGame::name() const {
  return spec_.kind == 'A' ? "scenario-a-tree" : "scenario-b-tree";
}

const ScenarioGame::Region& ScenarioGame::region_of(std::uint64_t path) const {
  for (const Region& r : regions_) {
    std::uint64_t mask = (1ULL << r.prefix_len) - 1;
    if ((path & mask) == r.prefix) return r;
  }
  fail(ErrorCode::InvalidArgument, "scenario: path outside any region");
}

double ScenarioGame::leaf_value_at(std::uint64_t path) const {
  const Region& r = region_of(path);
  if (r.constant) return 1.0;
  if (!r.any_plus) return -1.0;
  std::array<std::uint64_t, 2> key{hash_combine(draw_seed_, path), path};
  return key < r.threshold ? 1.0 : -1.0;
}

// ---------------------------------------------------------------------------

std::shared_ptr<PathTreeGame> build_kstep_tree(const KStepSpec& spec) {
  return std::make_shared<KStepGame>(spec);
}
std::shared_ptr<PathTreeGame> build_dual_tree(const DualSpec& spec) {
  return std::make_shared<DualGame>(spec);
}
std::shared_ptr<PathTreeGame> build_scenario_tree(const ScenarioSpec& spec) {
  return std::make_shared<ScenarioGame>(spec);
}

}  // namespace searchlab
