// Copyright 2026 The ac3mpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Regenerates the frozen golden evaluation profiles under assets/profiles/.

#include <cstdio>
#include <filesystem>
#include <vector>

#include "ac3mpc/csv.hpp"
#include "ac3mpc/scenarios.hpp"

int main(int argc, char** argv) {
  const std::string out_dir = argc > 1 ? argv[1] : "assets/profiles";
  std::filesystem::create_directories(out_dir);
  for (int terrain : {1, 2, 3}) {
    for (int seed : {1, 2, 3}) {
      const ac3mpc::SpeedProfileSpec spec = ac3mpc::golden_varying_spec(terrain, seed);
      const ac3mpc::SpeedProfile p = ac3mpc::SpeedProfile::generate(spec);
      std::vector<double> t, v;
      for (int i = 0; i <= 1200; ++i) {
        t.push_back(i * 0.05);
        v.push_back(p(i * 0.05));
      }
      const std::string path = out_dir + "/golden_T" + std::to_string(terrain) + "_s" +
                               std::to_string(seed) + ".csv";
      ac3mpc::write_profile_csv(t, v, path);
      std::printf("wrote %s (hash %016llx)\n", path.c_str(),
                  static_cast<unsigned long long>(ac3mpc::profile_hash(p, 60.0, 0.05)));
    }
  }
  return 0;
}
