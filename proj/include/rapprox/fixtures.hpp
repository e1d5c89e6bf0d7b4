#pragma once

// Frozen verification fixtures shared by the unit tests, the CLI verify
// command, and the acceptance gate: cone duality across every preset,
// printed intersection tables, the bitmask blowup pairing, fiber-tree
// comparison laws on randomized configurations, and the subcone winner
// conclusions for every studied point position.  Each check reports its own
// result so a failure names exactly the fixture that broke.

#include <cstddef>
#include <string>
#include <vector>

namespace rapprox {
namespace fix {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // empty on pass, diagnostic on failure
};

// Effective/nef duality is bit-exact on every preset, including the
// documented extremal ray counts.
std::vector<CheckResult> check_dual_pairs();

// Pairing tables of the named classes match the frozen integer tables.
std::vector<CheckResult> check_intersection_tables();

// D_alpha . D_beta = n - alpha.beta over all bit vectors, k < n <= 6.
std::vector<CheckResult> check_blowup_duality();

// Randomized fiber configurations: tracked multiplicities match the lattice
// solution, every ancestor pair satisfies the comparison laws, and the dual
// classes pull back correctly under every legal contraction.
std::vector<CheckResult> check_fiber_trees(unsigned seed = 42, int trees = 50);

// Predictor subcone conclusions: for every studied point position, the named
// curve has minimal degree on its displayed cone, strictly wins at an
// interior sample, and where the display is the exact minimal-degree cell the
// computed cell matches ray for ray.
std::vector<CheckResult> check_subcone_conclusions();

// Every group in order.
std::vector<CheckResult> run_all_checks();

size_t count_failures(const std::vector<CheckResult>& results);

}  // namespace fix
}  // namespace rapprox
