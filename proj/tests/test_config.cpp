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

#include <filesystem>
#include <fstream>

#include "optkit/config.hpp"
#include "optkit/error.hpp"

using namespace optkit;

TEST_CASE("parse key-value text") {
    const Config c = Config::parse(
        "# comment\n"
        "objective.name = quadratic   # trailing\n"
        "\n"
        "  optimizer.gamma=1e-3\r\n"
        "run.seeds = 1, 2 ,3\n"
        "optimizer.gamma = 2e-3\n");
    CHECK(c.get_string("objective.name", "") == "quadratic");
    CHECK(c.get_double("optimizer.gamma", 0.0) == 2e-3);
    CHECK(c.get_uint_list("run.seeds").value() == std::vector<std::uint64_t>{1, 2, 3});
    CHECK(c.entries().size() == 3);
    CHECK(c.has("run.seeds"));
    CHECK_FALSE(c.has("run.steps"));
    CHECK(c.get_uint("run.steps", 42) == 42);
}

TEST_CASE("syntax errors carry the line number") {
    try {
        (void)Config::parse("a = 1\nnot a pair\n", "exp.cfg");
        FAIL("expected a parse error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("exp.cfg:2") != std::string::npos);
    }
    CHECK_THROWS_AS(Config::parse("bad key = 1\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse(".x = 1\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse(" = 1\n"), ConfigError);
}

TEST_CASE("typed getters") {
    Config c = Config::parse(
        "r = +1.5e2\n"
        "i = 17\n"
        "t = yes\n"
        "f = off\n"
        "l = 0.5, -1, 2\n"
        "junk = 12abc\n"
        "neg = -3\n");
    CHECK(c.get_double("r", 0) == 150.0);
    CHECK(c.get_uint("i", 0) == 17);
    CHECK(c.get_bool("t", false));
    CHECK_FALSE(c.get_bool("f", true));
    CHECK(c.get_double_list("l").value() == std::vector<double>{0.5, -1.0, 2.0});
    CHECK_FALSE(c.get_optional_double("missing").has_value());
    CHECK(c.get_optional_double("r").value() == 150.0);
    CHECK_THROWS_AS(c.get_double("junk", 0), ConfigError);
    CHECK_THROWS_AS(c.get_uint("neg", 0), ConfigError);
    CHECK_THROWS_AS(c.get_uint("r", 0), ConfigError);
    CHECK_THROWS_AS(c.get_bool("i", false), ConfigError);
    c.set("empty", "");
    CHECK_THROWS_AS(c.get_double("empty", 0), ConfigError);
    c.set("badlist", "1,,2");
    CHECK_THROWS_AS(c.get_double_list("badlist"), ConfigError);
}

TEST_CASE("error messages name the key") {
    const Config c = Config::parse("optimizer.gamma = fast\n");
    try {
        (void)c.get_double("optimizer.gamma", 0);
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("optimizer.gamma") != std::string::npos);
    }
}

TEST_CASE("overrides are last-writer-wins") {
    Config c = Config::parse("run.steps = 10\n");
    c.apply_override("run.steps=20");
    c.apply_override(" run.batch_size = 4 ");
    CHECK(c.get_uint("run.steps", 0) == 20);
    CHECK(c.get_uint("run.batch_size", 0) == 4);
    CHECK_THROWS_AS(c.apply_override("run.steps"), ConfigError);
    c.erase("run.steps");
    CHECK_FALSE(c.has("run.steps"));
}

TEST_CASE("unknown keys are rejected") {
    const Config c = Config::parse("a.b = 1\nc = 2\n");
    CHECK_NOTHROW(c.require_known({"a.b", "c"}));
    try {
        c.require_known({"a.b"});
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("'c'") != std::string::npos);
    }
}

TEST_CASE("load from file") {
    const auto path = std::filesystem::temp_directory_path() / "optkit_test_config.cfg";
    {
        std::ofstream out(path);
        out << "x = 3\n";
    }
    CHECK(Config::load(path).get_uint("x", 0) == 3);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(Config::load(path), ConfigError);
}
