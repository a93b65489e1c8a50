// Regenerates the bundled calibrated scenario under data/bundled/.
// The series are a synthetic reconstruction shaped like an APX trading
// day; the EUR figures it produces are calibration, not market data.

#include <cstdio>
#include <string>

#include "flexcap/scenario.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 2024;
  std::string out = "data/bundled";
  if (argc > 1) seed = std::stoull(argv[1]);
  if (argc > 2) out = argv[2];

  flexcap::scenario::Scenario sc = flexcap::scenario::synthesize_apx_like(seed);
  sc.name = "bundled";
  flexcap::scenario::save_scenario(sc, out);
  std::printf("wrote %s (seed %llu)\n", out.c_str(),
              static_cast<unsigned long long>(seed));
  return 0;
}
