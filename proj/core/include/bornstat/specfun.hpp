// Copyright 2026 The bornstat Authors
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

#pragma once

namespace bornstat {

/// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s).
///
/// Power series when x < s + 1, Lentz continued fraction for the upper
/// function otherwise. Absolute accuracy about 1e-14 for s up to a few hundred.
/// Requires s > 0 and x >= 0; throws DomainError otherwise.
double regularized_gamma_p(double s, double x);

/// Regularized upper incomplete gamma Q(s, x) = 1 - P(s, x), computed
/// directly so that small tails keep their relative accuracy.
double regularized_gamma_q(double s, double x);

}  // namespace bornstat
