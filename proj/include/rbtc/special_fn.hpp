/*
 * Copyright 2026 the rbtc authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef RBTC_SPECIAL_FN_HPP
#define RBTC_SPECIAL_FN_HPP

namespace rbtc {

// Real branches of the Lambert W function (solutions of w * e^w = z).
enum class WBranch { Principal, MinusOne };

// Evaluates W(z) on the requested branch by Halley iteration with a
// branch-point series start near z = -1/e.  Residual |w e^w - z| is driven
// below 1e-14 relative.  Throws std::domain_error when z < -1/e, or when
// branch == MinusOne and z >= 0 (that branch lives on [-1/e, 0)).
double lambert_w(double z, WBranch branch);

// log(1 - e^a) for a < 0, switching between log(-expm1(a)) and
// log1p(-exp(a)) at a = -log 2 to keep full precision at both ends.
// Throws std::domain_error for a >= 0.
double log1mexp(double a);

// Kolmogorov limiting survival function
//   Q(lambda) = 2 * sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2),
// truncated when a term drops below 1e-12, clamped to [0, 1].
// Returns 1 for lambda <= 0.
double kolmogorov_sf(double lambda);

}  // namespace rbtc

#endif  // RBTC_SPECIAL_FN_HPP
