// Copyright 2026 The optkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>

#include "optkit/error.hpp"
#include "optkit/numeric.hpp"
#include "optkit/rng.hpp"

using namespace optkit;

TEST_CASE("construction") {
    CHECK_THROWS_AS(ParamVector(0), ConfigError);
    CHECK_THROWS_AS(ParamVector(std::vector<double>{}), ConfigError);
    const ParamVector z(3);
    CHECK(z.dim() == 3);
    CHECK(z == ParamVector{0.0, 0.0, 0.0});
    CHECK(ParamVector(2, 1.5) == ParamVector{1.5, 1.5});
    CHECK(ones(4) == ParamVector{1.0, 1.0, 1.0, 1.0});
}

TEST_CASE("finiteness queries") {
    ParamVector v{1.0, 2.0, 3.0};
    CHECK(v.all_finite());
    CHECK(v.first_non_finite() == 3);
    v[1] = std::nan("");
    CHECK_FALSE(v.all_finite());
    CHECK(v.first_non_finite() == 1);
    v[0] = INFINITY;
    CHECK(v.first_non_finite() == 0);
}

TEST_CASE("hadamard") {
    CHECK(hadamard({1, 2, 3}, {4, 5, 6}) == ParamVector{4, 10, 18});
    const ParamVector x{0.3, -7.25, 1e-300};
    CHECK(hadamard(x, ones(3)) == x);
    CHECK(hadamard({0.5, -2}, {-2, 0.5}) == ParamVector{-1, -1});
    CHECK_THROWS_AS(hadamard({1, 2}, {1, 2, 3}), DimensionMismatch);
}

TEST_CASE("hadamard is commutative and associative on exact values") {
    const ParamVector a{1, -2, 0.5, 4};
    const ParamVector b{3, 0.25, -8, 2};
    const ParamVector c{-0.5, 16, 2, 0.125};
    CHECK(hadamard(a, b) == hadamard(b, a));
    CHECK(hadamard(hadamard(a, b), c) == hadamard(a, hadamard(b, c)));
}

TEST_CASE("elementwise_sqrt") {
    CHECK(elementwise_sqrt({4, 9, 0}) == ParamVector{2, 3, 0});
    CHECK(elementwise_sqrt(ones(5)) == ones(5));
    const double eps = 0.1;
    CHECK(elementwise_sqrt({eps * eps, eps * eps}) == ParamVector{0.1, 0.1});
    try {
        (void)elementwise_sqrt({1.0, 4.0, -1.0});
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        CHECK(e.index() == 2);
    }
}

TEST_CASE("sqrt of a squared epsilon recovers epsilon exactly") {
    for (double eps : {1e-8, 1e-6, 1e-4, 1e-3, 0.1, 0.3}) {
        CHECK(std::sqrt(eps * eps) == eps);
    }
}

TEST_CASE("norms") {
    CHECK(l2_norm({3, 4}) == 5.0);
    CHECK(l2_norm(ParamVector(6)) == 0.0);
    CHECK(l2_norm({1, 1, 1, 1}) == 2.0);
    CHECK(l2_norm_sq({3, 4}) == 25.0);
    CHECK(l1_norm({1, -2, 3}) == 6.0);
    CHECK(l1_norm(ParamVector(2)) == 0.0);
    CHECK(l1_norm({-0.5, -0.5}) == 1.0);
    CHECK(linf_norm({1, -7, 3}) == 7.0);
    CHECK(dot({1, 2, 3}, {4, -5, 6}) == 12.0);
    CHECK(min_entry({2, -1, 5}) == -1.0);
    CHECK(max_entry({2, -1, 5}) == 5.0);
    CHECK_THROWS_AS(dot({1}, {1, 2}), DimensionMismatch);
}

TEST_CASE("l2_norm is absolutely homogeneous") {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        ParamVector a(1 + rng.uniform_index(30));
        for (std::size_t j = 0; j < a.dim(); ++j) {
            a[j] = rng.normal();
        }
        const double c = 10.0 * rng.normal();
        const double lhs = l2_norm(scale(c, a));
        const double rhs = std::abs(c) * l2_norm(a);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
    }
}

TEST_CASE("axpy and siblings") {
    CHECK(axpy(2, {1, 1}, {0, 1}) == ParamVector{2, 3});
    const ParamVector a{1.5, -3};
    const ParamVector b{0.1, 0.7};
    CHECK(axpy(0, a, b) == b);
    CHECK(elementwise_max({1, 5}, {3, 2}) == ParamVector{3, 5});
    CHECK(scale(-2, a) == ParamVector{-3, 6});
    CHECK(add(a, b) == ParamVector{1.5 + 0.1, -3 + 0.7});
    CHECK(subtract(a, b) == ParamVector{1.5 - 0.1, -3 - 0.7});
    CHECK(reciprocal({2, -4}) == ParamVector{0.5, -0.25});
    CHECK_THROWS_AS(axpy(1, {1, 2}, {1}), DimensionMismatch);
    CHECK_THROWS_AS(elementwise_max({1, 2}, {1}), DimensionMismatch);
    CHECK_THROWS_AS(subtract({1, 2}, {1}), DimensionMismatch);
}

TEST_CASE("elementwise_max dominates both operands") {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        ParamVector a(8);
        ParamVector b(8);
        for (std::size_t j = 0; j < 8; ++j) {
            a[j] = rng.normal();
            b[j] = trial % 2 == 0 ? a[j] : rng.normal();
        }
        const ParamVector m = elementwise_max(a, b);
        for (std::size_t j = 0; j < 8; ++j) {
            CHECK(m[j] >= a[j]);
            CHECK(m[j] >= b[j]);
        }
    }
}

TEST_CASE("operations are deterministic") {
    Rng rng(99);
    ParamVector a(50);
    ParamVector b(50);
    for (std::size_t j = 0; j < 50; ++j) {
        a[j] = rng.normal();
        b[j] = rng.normal();
    }
    CHECK(l2_norm(a) == l2_norm(ParamVector(a)));
    CHECK(axpy(0.3, a, b) == axpy(0.3, a, b));
    CHECK(dot(a, b) == dot(a, b));
}

TEST_CASE("reductions accumulate left to right") {
    // Summation order is observable when terms cancel.
    const ParamVector v{1e8, 1.0, 1.0};
    double expected = 0.0;
    for (double x : v) {
        expected += x * x;
    }
    CHECK(l2_norm_sq(v) == expected);
    const ParamVector w{1e16, 1.0, 1.0, -1e16};
    const ParamVector one = ones(4);
    CHECK(dot(w, one) == ((1e16 + 1.0) + 1.0) - 1e16);
}
