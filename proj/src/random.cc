//
// Copyright 2026 The Anonhist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "src/random.h"

#include <cstdint>
#include <random>

namespace anonhist {

uint64_t SampleBinomial(CounterRng& rng, uint64_t trials, double prob) {
  if (trials == 0 || prob <= 0.0) return 0;
  if (prob >= 1.0) return trials;
  std::binomial_distribution<uint64_t> dist(trials, prob);
  return dist(rng);
}

}  // namespace anonhist
