/*
 * Copyright 2026 The locinfer Authors
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
 *
 */

#pragma once

namespace locinfer {

/// Modified Bessel function of the second kind K_nu(x) for real order
/// nu >= 0 and x > 0. Uses Temme's series for x < 2 and Steed's continued
/// fraction otherwise, followed by upward recurrence in the order.
/// Throws InputError for x <= 0, nu < 0 or non-finite arguments.
double bessel_k(double nu, double x);

} // namespace locinfer
