// SPDX-License-Identifier: Apache-2.0
//
// iaqsmpa: importance-aware quantization, subcarrier mapping and power allocation
// Copyright (C) 2026 The iaqsmpa authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "iaqsmpa/bisection.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace iaqsmpa
{

Bracket bisect_decreasing_positive(const std::function<double(double)> &g, double guess,
                                   const SolverSettings &settings, const std::string &what)
{
    if (!(guess > 0.0) || !std::isfinite(guess))
        guess = 1.0;

    double lo = guess;
    double hi = guess;
    int expansions = 0;
    if (g(guess) >= 0.0)
    {
        // Root lies above the guess.
        while (g(hi) > 0.0)
        {
            lo = hi;
            hi *= settings.expand_factor;
            if (++expansions > settings.max_expansions || !std::isfinite(hi))
            {
                std::ostringstream msg;
                msg << what << ": no sign change found in [" << guess << ", " << hi << "]";
                throw InfeasibleError(msg.str(), guess, hi);
            }
        }
    }
    else
    {
        while (g(lo) < 0.0)
        {
            hi = lo;
            lo /= settings.expand_factor;
            if (++expansions > settings.max_expansions || lo == 0.0)
            {
                std::ostringstream msg;
                msg << what << ": no sign change found in [" << lo << ", " << guess << "]";
                throw InfeasibleError(msg.str(), lo, guess);
            }
        }
    }

    for (int step = 0; step < settings.max_bisections && hi - lo > settings.rel_tol * hi; ++step)
    {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) >= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi};
}

Bracket bisect_increasing(const std::function<double(double)> &h, double lo, double hi,
                          const SolverSettings &settings)
{
    for (int step = 0; step < settings.max_bisections; ++step)
    {
        const double scale = std::max({std::abs(lo), std::abs(hi), 1.0});
        if (hi - lo <= settings.rel_tol * scale)
            break;
        const double mid = 0.5 * (lo + hi);
        if (h(mid) <= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi};
}

} // namespace iaqsmpa
