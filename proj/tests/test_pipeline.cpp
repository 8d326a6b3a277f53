#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "buresnum/common.hpp"
#include "buresnum/kernels.hpp"
#include "buresnum/numbers.hpp"
#include "buresnum/pipeline.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <string>

using namespace buresnum;

TEST_CASE("n = 2 constant, all integration routes") {
    const double expect = 2.0 / kPi;
    PipelineConfig cfg;
    cfg.rel_tol = 1e-11;

    auto a = hall_constant(2, cfg, "adaptive");
    CHECK(a.converged);
    CHECK(a.constant == doctest::Approx(expect).epsilon(1e-10));
    CHECK(a.integral == doctest::Approx(0.5 * kPi).epsilon(1e-10));
    CHECK(a.method == "adaptive-ordered");

    auto b = hall_constant(2, cfg, "adaptive-fullbox");
    CHECK(b.converged);
    CHECK(b.constant == doctest::Approx(expect).epsilon(1e-10));
    // the two routes agree to quadrature accuracy
    CHECK(a.constant == doctest::Approx(b.constant).epsilon(1e-9));

    PipelineConfig qcfg;
    qcfg.qmc_points = 2000000;
    qcfg.rel_tol = 5e-4;
    auto c = hall_constant(2, qcfg, "qmc");
    CHECK(c.converged);
    CHECK(c.constant == doctest::Approx(expect).epsilon(5e-4));
    // qmc is deterministic: a repeat gives bit-identical output
    auto c2 = hall_constant(2, qcfg, "qmc");
    CHECK(c.constant == c2.constant);
    CHECK(c.evaluations == c2.evaluations);

    PipelineConfig tcfg;
    tcfg.tensor_points = 64;
    auto d = hall_constant(2, tcfg, "tensor");
    CHECK(d.constant == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("n = 3 constant, ordered and full-box routes") {
    const double expect = 35.0 / kPi;
    PipelineConfig cfg;
    cfg.rel_tol = 1e-9;
    auto a = hall_constant(3, cfg, "adaptive");
    CHECK(a.converged);
    CHECK(a.constant == doctest::Approx(expect).epsilon(1e-8));
    CHECK(a.integral == doctest::Approx(kPi / 35.0).epsilon(1e-8));

    auto b = hall_constant(3, cfg, "adaptive-fullbox");
    CHECK(b.constant == doctest::Approx(expect).epsilon(1e-8));
    CHECK(a.constant == doctest::Approx(b.constant).epsilon(1e-6));

    // nesting order of the full-box iteration is irrelevant
    PipelineConfig swapped = cfg;
    swapped.level_order = {1, 0};
    auto c = hall_constant(3, swapped, "adaptive-fullbox");
    CHECK(c.constant == doctest::Approx(b.constant).epsilon(1e-8));
}

TEST_CASE("exponent variants, n = 3: gamma-route odd exponents") {
    struct Case {
        int beta;
        double num, den;
    };
    const Case cases[] = {{1, 1.0, 4.0},
                          {3, 105.0, 128.0},
                          {5, 15015.0, 8192.0},
                          {7, 969969.0, 262144.0}};
    for (const auto& c : cases) {
        auto r = variant_constant(3, c.beta);
        CHECK(r.constant == doctest::Approx(c.num / (c.den * kPi)).epsilon(1e-12));
        CHECK(r.method == "closed-form-gamma");
        CHECK(!r.note.empty());
        CHECK(r.converged);
    }
}

TEST_CASE("exponent variants, n = 3: integrated even exponents") {
    PipelineConfig cfg;
    cfg.rel_tol = 1e-8;
    auto r4 = variant_constant(3, 4, cfg);
    CHECK(r4.converged);
    CHECK(r4.constant == doctest::Approx(1616615.0 / (226.0 * kPi)).epsilon(1e-7));
    CHECK(r4.method == "adaptive-ordered");
    auto r6 = variant_constant(3, 6, cfg);
    CHECK(r6.converged);
    CHECK(r6.constant == doctest::Approx(100280245065.0 / (88252.0 * kPi)).epsilon(1e-7));
    // beta = 2 reduces to the base constant
    auto r2 = variant_constant(3, 2, cfg);
    CHECK(r2.constant == doctest::Approx(35.0 / kPi).epsilon(1e-7));
}

TEST_CASE("exponent variants, n = 2: Wallis values and divergences") {
    PipelineConfig cfg;
    cfg.rel_tol = 1e-11;
    struct Case {
        int beta;
        double expect;
    };
    const Case cases[] = {{4, 8.0 / (3.0 * kPi)},
                          {6, 16.0 / (5.0 * kPi)},
                          {8, 128.0 / (35.0 * kPi)}};
    for (const auto& c : cases) {
        auto r = variant_constant(2, c.beta, cfg);
        CHECK(r.converged);
        CHECK(r.constant == doctest::Approx(c.expect).epsilon(1e-10));
    }
    CHECK_THROWS_AS(variant_constant(2, 1), DivergenceError);
    CHECK_THROWS_AS(variant_constant(2, 3), DivergenceError);
    CHECK_THROWS_AS(variant_constant(2, 5), DivergenceError);
    CHECK_THROWS_AS(variant_constant(5, 2), std::invalid_argument);
    CHECK_THROWS_AS(variant_constant(3, 0), std::invalid_argument);
}

TEST_CASE("identric-mean denominators") {
    PipelineConfig cfg;
    cfg.rel_tol = 1e-10;
    auto q2 = quasi_constant(2, cfg);
    CHECK(q2.converged);
    CHECK(q2.integral == doctest::Approx(kQuasi2PairIntegral).epsilon(1e-9));
    CHECK(q2.constant == doctest::Approx(1.0 / kQuasi2PairIntegral).epsilon(1e-9));
    CHECK(q2.mean == PairMean::identric);

    PipelineConfig cfg3;
    cfg3.rel_tol = 1e-9;
    auto q3 = quasi_constant(3, cfg3);
    CHECK(q3.converged);
    CHECK(q3.integral == doctest::Approx(kQuasi3PairIntegral).epsilon(1e-7));
}

TEST_CASE("average entropy, n = 2 and n = 3: exact targets and rational fits") {
    PipelineConfig cfg;
    cfg.rel_tol = 1e-10;
    auto e2 = average_entropy(2, cfg);
    CHECK(e2.converged);
    CHECK(e2.entropy ==
          doctest::Approx(2.0 * std::log(2.0) - 7.0 / 6.0).epsilon(1e-9));
    CHECK(e2.fit == BigRational(7, 6));
    CHECK(e2.fit_residual < 1e-9);
    CHECK(e2.fit_target == doctest::Approx(7.0 / 6.0).epsilon(1e-9));

    auto e3 = average_entropy(3, cfg);
    CHECK(e3.converged);
    CHECK(e3.entropy == doctest::Approx(32.0 / 63.0).epsilon(1e-8));
    CHECK(e3.fit == BigRational(3917, 1405));
    CHECK(e3.fit_residual < 1e-8);
}

TEST_CASE("average entropy, n = 4 and n = 5: tensor route") {
    auto e4 = average_entropy(4);
    CHECK(e4.method == "tensor-gl");
    CHECK(e4.entropy == doctest::Approx(0.751770551596026).epsilon(5e-10));
    // the best fit under the denominator cap stays close to the target...
    CHECK(std::fabs(e4.fit.get_d() - e4.fit_target) < 1e-7);
    CHECK(e4.fit.get_den() <= 10000);
    CHECK(e4.fit == BigRational(34316, 7159));
    // ...and it is strictly closer than the ratio 32135/6704
    CHECK(e4.fit != BigRational(32135, 6704));
    CHECK(std::fabs(e4.fit.get_d() - e4.fit_target) <
          std::fabs(BigRational(32135, 6704).get_d() - e4.fit_target));

    PipelineConfig cfg5;
    cfg5.tensor_points = 48;
    auto e5 = average_entropy(5, cfg5);
    CHECK(e5.entropy == doctest::Approx(0.954102502689873).epsilon(1e-6));
    CHECK(e5.fit != BigRational(40045, 5648));
}

TEST_CASE("expected ordered eigenvalues") {
    PipelineConfig cfg;
    cfg.rel_tol = 1e-11;
    auto r2 = expected_eigenvalues(2, cfg);
    CHECK(r2.converged);
    REQUIRE(r2.values.size() == 2);
    CHECK(r2.values[0] ==
          doctest::Approx(0.5 + 4.0 / (3.0 * kPi)).epsilon(1e-9));
    CHECK(r2.values[1] ==
          doctest::Approx(0.5 - 4.0 / (3.0 * kPi)).epsilon(1e-9));
    CHECK(r2.values[0] + r2.values[1] == doctest::Approx(1.0).epsilon(1e-10));

    PipelineConfig cfg3;
    cfg3.rel_tol = 1e-9;
    auto r3 = expected_eigenvalues(3, cfg3);
    CHECK(r3.converged);
    REQUIRE(r3.values.size() == 3);
    CHECK(r3.values[0] == doctest::Approx(0.8023925073673442).epsilon(1e-6));
    CHECK(r3.values[1] == doctest::Approx(0.1818775579604843).epsilon(1e-6));
    CHECK(r3.values[2] == doctest::Approx(0.01572993467217136).epsilon(1e-6));
    CHECK(r3.values[0] + r3.values[1] + r3.values[2] ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r3.values[0] > r3.values[1]);
    CHECK(r3.values[1] > r3.values[2]);
}

TEST_CASE("redundancy summaries and the marginal crossover") {
    CHECK(redundancy_quasi_prior() ==
          doctest::Approx(-1.770617517752249519937).epsilon(1e-14));
    CHECK(redundancy_quasi_prior(4.0) ==
          doctest::Approx(-1.770617517752249519937 + 1.5 * std::log(4.0)).epsilon(1e-14));
    CHECK(redundancy_bures_prior_average() ==
          doctest::Approx(-1.774208647355272567637).epsilon(1e-10));
    // analytic identity for the averaged value: log(pi/2)/2 - 2
    CHECK(redundancy_bures_prior_average() ==
          doctest::Approx(0.5 * std::log(0.5 * kPi) - 2.0).epsilon(1e-10));

    double c = marginal_crossover_n2();
    CHECK(c == doctest::Approx(0.4439779626941740700169).epsilon(1e-10));
    CHECK(bures_marginal_theta_n2(c) ==
          doctest::Approx(quasi_marginal_theta_n2(c)).epsilon(1e-9));
    // the identric-family marginal dominates below the crossover, trails above
    CHECK(quasi_marginal_theta_n2(c - 0.1) > bures_marginal_theta_n2(c - 0.1));
    CHECK(quasi_marginal_theta_n2(c + 0.1) < bures_marginal_theta_n2(c + 0.1));
}

TEST_CASE("result cache: second call replays the stored record") {
    const char* path = "/tmp/buresnum_test_cache.jsonl";
    std::remove(path);
    PipelineConfig cfg;
    cfg.rel_tol = 1e-9;
    cfg.cache_path = path;

    auto first = hall_constant(2, cfg, "adaptive");
    CHECK_FALSE(first.from_cache);
    auto second = hall_constant(2, cfg, "adaptive");
    CHECK(second.from_cache);
    CHECK(second.constant == first.constant);
    CHECK(second.integral == first.integral);
    CHECK(second.evaluations == first.evaluations);
    CHECK(second.method == first.method);

    // a different request gets its own entry, not a stale replay
    auto other = hall_constant(3, cfg, "adaptive");
    CHECK_FALSE(other.from_cache);
    CHECK(other.constant == doctest::Approx(35.0 / kPi).epsilon(1e-7));

    // changed tolerance means a different key
    PipelineConfig loose = cfg;
    loose.rel_tol = 1e-6;
    auto relaxed = hall_constant(2, loose, "adaptive");
    CHECK_FALSE(relaxed.from_cache);
    std::remove(path);
}

TEST_CASE("json serialization round-trips the fields") {
    PipelineConfig cfg;
    cfg.rel_tol = 1e-9;
    auto r = hall_constant(2, cfg, "adaptive");
    auto j = nlohmann::json::parse(to_json_string(r));
    CHECK(j.at("n").get<int>() == 2);
    CHECK(j.at("beta").get<int>() == 2);
    CHECK(j.at("constant").get<double>() == r.constant);
    CHECK(j.at("integral").get<double>() == r.integral);
    CHECK(j.at("method").get<std::string>() == "adaptive-ordered");
    CHECK(j.at("converged").get<bool>());

    auto e = average_entropy(2, cfg);
    auto je = nlohmann::json::parse(to_json_string(e));
    CHECK(je.at("entropy").get<double>() == e.entropy);
    CHECK(je.at("fit").get<std::string>() == "7/6");

    auto v = expected_eigenvalues(2, cfg);
    auto jv = nlohmann::json::parse(to_json_string(v));
    CHECK(jv.at("values").size() == 2);
    CHECK(jv.at("values")[0].get<double>() == v.values[0]);
}

TEST_CASE("per-size tolerance defaults are sane") {
    CHECK(default_rel_tol(2) <= 1e-8);
    CHECK(default_rel_tol(3) <= 1e-8);
    CHECK(default_rel_tol(4) <= 1e-6);
    CHECK(default_rel_tol(5) <= 1e-4);
}
