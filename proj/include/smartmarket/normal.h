// Copyright 2026 The Smartmarket Authors
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

#ifndef SMARTMARKET_NORMAL_H_
#define SMARTMARKET_NORMAL_H_

namespace smartmarket {

// Standard normal density.
double NormalPdf(double z);

// Standard normal CDF, accurate in both tails.
double NormalCdf(double z);

// Upper tail 1 - NormalCdf(z) without cancellation.
double NormalSurvival(double z);

// Inverse standard normal CDF. Returns -inf / +inf at 0 / 1.
double NormalQuantile(double p);

// E|a + b Z| for Z ~ N(0, 1) (folded normal mean).
double FoldedNormalMean(double a, double b);

}  // namespace smartmarket

#endif  // SMARTMARKET_NORMAL_H_
