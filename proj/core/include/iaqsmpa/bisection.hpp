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

#ifndef IAQSMPA_BISECTION_HPP
#define IAQSMPA_BISECTION_HPP

#include <functional>
#include <stdexcept>
#include <string>

namespace iaqsmpa
{

struct SolverSettings
{
    double rel_tol = 1e-12;    // stop when bracket width <= rel_tol * |upper end|
    int max_bisections = 200;
    double expand_factor = 10.0;
    int max_expansions = 60;
};

// Raised when a root bracket cannot be established or the budget cannot be met.
class InfeasibleError : public std::runtime_error
{
public:
    InfeasibleError(const std::string &what, double lo = 0.0, double hi = 0.0)
        : std::runtime_error(what), lo_(lo), hi_(hi)
    {
    }
    double bracket_lo() const { return lo_; }
    double bracket_hi() const { return hi_; }

private:
    double lo_;
    double hi_;
};

struct Bracket
{
    double lo;
    double hi;
};

// For a strictly decreasing g on (0, inf), find [lo, hi] with g(lo) >= 0 >= g(hi) by geometric
// expansion from `guess`, then bisect. Returns the final bracket.
Bracket bisect_decreasing_positive(const std::function<double(double)> &g, double guess,
                                   const SolverSettings &settings, const std::string &what);

// Bisection on an already valid bracket of a non-decreasing h: h(lo) <= 0 <= h(hi).
Bracket bisect_increasing(const std::function<double(double)> &h, double lo, double hi,
                          const SolverSettings &settings);

} // namespace iaqsmpa

#endif
