// Copyright 2026 The evpark Authors
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

#ifndef EVPARK_GOLDEN_SECTION_H_
#define EVPARK_GOLDEN_SECTION_H_

namespace evpark::internal {

// Maximizer of f on [lo, hi] to within `tolerance`, assuming f is unimodal
// there.
template <typename F>
double GoldenSectionMax(F&& f, double lo, double hi, double tolerance) {
  constexpr double kInverseGolden = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double x1 = b - kInverseGolden * (b - a);
  double x2 = a + kInverseGolden * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tolerance) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInverseGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInverseGolden * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace evpark::internal

#endif  // EVPARK_GOLDEN_SECTION_H_
