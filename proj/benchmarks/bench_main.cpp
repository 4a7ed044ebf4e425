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

#include "iaqsmpa/allocator_fbl.hpp"
#include "iaqsmpa/allocator_ideal.hpp"
#include "iaqsmpa/link_model.hpp"
#include "iaqsmpa/quantizer.hpp"

#include "support/oracle.hpp"

#include <benchmark/benchmark.h>

namespace
{

using namespace iaqsmpa;

AllocProblem bench_problem(int g)
{
    Rng rng = Rng(5).split(streams::test_data);
    auto pb = testing::random_small_problem(rng, g, 64, 0.5, 3.0);
    pb.sigma2 = 0.05;
    pb.block_size = 16;
    return pb;
}

void BM_bcd_solve(benchmark::State &state)
{
    const auto pb = bench_problem(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(bcd_solve(pb));
}
BENCHMARK(BM_bcd_solve)->Arg(16)->Arg(196);

void BM_bcd_solve_fbl(benchmark::State &state)
{
    const auto pb = bench_problem(static_cast<int>(state.range(0)));
    const auto fbl = FblParams::uniform(0.01, 800.0, pb.g());
    for (auto _ : state)
        benchmark::DoNotOptimize(bcd_solve_fbl(pb, fbl));
}
BENCHMARK(BM_bcd_solve_fbl)->Arg(16)->Arg(196);

void BM_generate_channel(benchmark::State &state)
{
    LinkConfig link;
    link.n_tx = link.n_rx = link.n_s = static_cast<int>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(generate_channel(link, ++seed));
}
BENCHMARK(BM_generate_channel)->Arg(4)->Arg(8);

void BM_quantize(benchmark::State &state)
{
    Rng rng(9);
    std::vector<double> v(224 * 224 * 3);
    for (auto &x : v)
        x = rng.uniform();
    const auto img = make_patch_image(224, 224, 3, 16, std::move(v));
    const std::vector<int> bits(static_cast<std::size_t>(img.g()), static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(pack_codes(quantize(img, bits)));
}
BENCHMARK(BM_quantize)->Arg(4)->Arg(8);

} // namespace

BENCHMARK_MAIN();
