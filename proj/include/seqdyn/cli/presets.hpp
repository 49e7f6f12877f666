#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace seqdyn::cli {

struct Preset {
  std::string name;
  std::string description;
  std::string anchor;
  std::string config;
};

inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> all{
      {"bernoulli-progression", "fair 2-symbol shift, progression families L(j) = j: every h_j is 1 bit",
       "entropy blow-up for Bernoulli systems (independence of T^(nj) xi)",
       "name = bernoulli-progression\n"
       "experiment = entropy-trace\n"
       "system = bernoulli\n"
       "masses = 1/2 1/2\n"
       "partition = cylinder\n"
       "depth = 1\n"
       "family = progression\n"
       "growth = j\n"
       "j = 1 2 4 8 16\n"},
      {"golden-rotation-decay", "golden convergent rotation F40/F41, halves, L(j) = j: h_j decays",
       "entropy decay for interval exchanges and rotations",
       "name = golden-rotation-decay\n"
       "experiment = entropy-trace\n"
       "system = rotation\n"
       "golden = 40\n"
       "partition = halves\n"
       "family = progression\n"
       "growth = j\n"
       "j = 1 2 4 8 16 32\n"},
      {"geom-2n-family", "geometric families {2^j, ..., 2^min(j^2, 12)} on the fair shift",
       "sequence entropy along A_j = {2^j, ..., 2^(j^2)}",
       "name = geom-2n-family\n"
       "experiment = entropy-trace\n"
       "system = bernoulli\n"
       "partition = cylinder\n"
       "depth = 1\n"
       "family = geometric\n"
       "cap = 12\n"
       "j = 2 3 4\n"},
      {"rect-boundary-ledger", "vertical swap with the quadrant partition, exact boundary lengths B(0..20)",
       "linear boundary growth for rectangle exchanges",
       "name = rect-boundary-ledger\n"
       "experiment = boundary-growth\n"
       "system = vertical-swap\n"
       "partition = quadrants\n"
       "steps = 20\n"},
      {"product-rotation-ledger", "product rotation (610/987, 377/610) with its source partition, B(0..50)",
       "linear boundary growth for rectangle exchanges",
       "name = product-rotation-ledger\n"
       "experiment = boundary-growth\n"
       "system = product-rotation\n"
       "alpha = 610/987\n"
       "beta = 377/610\n"
       "partition = sources\n"
       "steps = 50\n"},
      {"golden-rigidity-scan", "rigidity times of the golden rotation F45/F46 up to m = 50000",
       "partial rigidity of interval exchanges (w(T^m, I) small along convergents)",
       "name = golden-rigidity-scan\n"
       "experiment = rigidity-scan\n"
       "system = rotation\n"
       "golden = 45\n"
       "test_depth = 6\n"
       "threshold = 1/500\n"
       "m_cap = 50000\n"},
      {"golden-mixing-scan", "distance of T^m to Theta for the golden rotation, m <= 1000",
       "mixing-time scan min(T, j)",
       "name = golden-mixing-scan\n"
       "experiment = mixing-scan\n"
       "system = rotation\n"
       "golden = 40\n"
       "test_depth = 6\n"
       "threshold = 1/20\n"
       "scan_j = 0\n"
       "m_cap = 1000\n"},
      {"baker-mixing-scan", "distance of T^m to Theta for the baker map, depth-4 rectangles",
       "mixing-time scan min(T, j)",
       "name = baker-mixing-scan\n"
       "experiment = mixing-scan\n"
       "system = baker\n"
       "test_depth = 4\n"
       "threshold = 1/20\n"
       "scan_j = 0\n"
       "m_cap = 100\n"},
      {"baker-triple", "triple correlations of the left half under the baker map, 1 <= m, n <= 20",
       "triple-correlation asymmetry limits (mu + 2 mu^3)/3 and mu^2",
       "name = baker-triple\n"
       "experiment = triple-correlation\n"
       "system = baker\n"
       "set = 0 0 1/2 1\n"
       "m = 1..19\n"
       "n = 2..20\n"},
      {"rotation-asymmetry", "entropy asymmetry ratio for the golden rotation, N = 8, m = 3, n = 5",
       "entropy asymmetry of forward and backward joins",
       "name = rotation-asymmetry\n"
       "experiment = asymmetry-ratio\n"
       "system = rotation\n"
       "golden = 40\n"
       "partition = halves\n"
       "steps = 8\n"
       "m = 3\n"
       "n = 5\n"},
      {"baker-mc-entropy", "Monte Carlo join entropy of the baker map, vertical halves, F = {1..10}",
       "Monte Carlo sequence entropy for planar maps",
       "name = baker-mc-entropy\n"
       "experiment = mc-entropy\n"
       "system = baker\n"
       "partition = vertical-halves\n"
       "family = explicit\n"
       "members = 1..10\n"
       "samples = 10000\n"
       "seed = 1\n"},
      {"bernoulli-sup-envelope", "dyadic cylinder library up to width 2 on the fair shift",
       "sup over partitions via a finite dyadic library",
       "name = bernoulli-sup-envelope\n"
       "experiment = sup-envelope\n"
       "system = bernoulli\n"
       "library_depth = 2\n"
       "family = progression\n"
       "growth = j\n"
       "j = 1 2 4\n"},
  };
  return all;
}

inline std::optional<Preset> find_preset(std::string_view name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  return std::nullopt;
}

}  // namespace seqdyn::cli
