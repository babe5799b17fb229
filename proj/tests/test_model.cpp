#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tsam/errors.hpp"
#include "tsam/model.hpp"

#include "helpers.hpp"

using namespace tsam;

namespace {

ModelBundle ref_bundle() {
    return ModelBundle{ref::net(), ref::pop(), ref::design(), SchemeConfig{2, 1e6}};
}

bool mentions(const std::vector<std::string>& issues, const std::string& needle) {
    return std::any_of(issues.begin(), issues.end(), [&](const std::string& s) {
        return s.find(needle) != std::string::npos;
    });
}

} // namespace

TEST_CASE("zipf popularity pinned values") {
    SUBCASE("single file") {
        const Popularity p = zipf_popularity(1, 2.0);
        REQUIRE(p.n_files() == 1);
        CHECK(p.a[0] == 1.0);
    }
    SUBCASE("exponent zero is uniform") {
        const Popularity p = zipf_popularity(5, 0.0);
        for (double v : p.a) CHECK(std::fabs(v - 0.2) <= 1e-15);
    }
    SUBCASE("five files, exponent two") {
        const Popularity p = zipf_popularity(5, 2.0);
        const double z = 1.0 + 0.25 + 1.0 / 9.0 + 0.0625 + 0.04;
        const double want[5] = {1.0 / z, 0.25 / z, (1.0 / 9.0) / z, 0.0625 / z, 0.04 / z};
        for (int n = 0; n < 5; ++n) CHECK(p.a[n] == doctest::Approx(want[n]).epsilon(1e-13));
        CHECK(std::fabs(p.a[0] - 0.6832) <= 5e-5);
        CHECK(std::fabs(p.a[1] - 0.1708) <= 5e-5);
        CHECK(std::fabs(p.a[2] - 0.0759) <= 5e-5);
        CHECK(std::fabs(p.a[3] - 0.0427) <= 5e-5);
        CHECK(std::fabs(p.a[4] - 0.0273) <= 5e-5);
    }
}

TEST_CASE("zipf popularity invariants across sizes and exponents") {
    std::mt19937_64 gen(0xbadc0ffee);
    std::uniform_int_distribution<int> nd(1, 64);
    std::uniform_real_distribution<double> gd(0.0, 4.0);
    for (int it = 0; it < 120; ++it) {
        const int n = nd(gen);
        const Popularity p = zipf_popularity(n, gd(gen));
        REQUIRE(p.n_files() == n);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            CHECK(p.a[i] > 0.0);
            CHECK(p.a[i] <= 1.0);
            if (i > 0) CHECK(p.a[i] <= p.a[i - 1]);
            sum += p.a[i];
        }
        CHECK(std::fabs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("zipf popularity rejects bad arguments") {
    CHECK_THROWS_AS(zipf_popularity(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(zipf_popularity(3, -0.5), std::invalid_argument);
}

TEST_CASE("binomial coefficients") {
    CHECK(binomial(2, 2) == 1);
    CHECK(binomial(3, 2) == 3);
    CHECK(binomial(5, 4) == 5);
    CHECK(binomial(12, 6) == 924);
    CHECK(binomial(4, 0) == 1);
    CHECK(binomial(4, 5) == 0);
    CHECK(binomial(40, 20) == 137846528820ULL);
}

TEST_CASE("combination enumeration is lexicographic") {
    SUBCASE("two files, full cache") {
        const CombinationSet s = enumerate_combinations(2, 2);
        REQUIRE(s.size() == 1);
        CHECK(s.combos[0] == std::vector<int>{0, 1});
    }
    SUBCASE("three files, pairs") {
        const CombinationSet s = enumerate_combinations(3, 2);
        REQUIRE(s.size() == 3);
        CHECK(s.combos[0] == std::vector<int>{0, 1});
        CHECK(s.combos[1] == std::vector<int>{0, 2});
        CHECK(s.combos[2] == std::vector<int>{1, 2});
    }
    SUBCASE("five files, quadruples") {
        const CombinationSet s = enumerate_combinations(5, 4);
        REQUIRE(s.size() == 5);
        CHECK(s.combos[0] == std::vector<int>{0, 1, 2, 3});
        CHECK(s.combos[1] == std::vector<int>{0, 1, 2, 4});
        CHECK(s.combos[2] == std::vector<int>{0, 1, 3, 4});
        CHECK(s.combos[3] == std::vector<int>{0, 2, 3, 4});
        CHECK(s.combos[4] == std::vector<int>{1, 2, 3, 4});
    }
}

TEST_CASE("combination enumeration rejects bad shapes and oversized families") {
    CHECK_THROWS_AS(enumerate_combinations(3, 0), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_combinations(3, 4), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_combinations(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_combinations(30, 15, 1000), std::invalid_argument);
}

TEST_CASE("combination families: size, distinctness, membership") {
    std::mt19937_64 gen(7);
    for (int it = 0; it < 40; ++it) {
        const int n = 1 + static_cast<int>(gen() % 12);
        const int k = 1 + static_cast<int>(gen() % static_cast<std::uint64_t>(n));
        const CombinationSet s = enumerate_combinations(n, k);
        REQUIRE(s.size() == binomial(n, k));
        std::set<std::vector<int>> seen;
        for (const auto& c : s.combos) {
            REQUIRE(static_cast<int>(c.size()) == k);
            CHECK(std::is_sorted(c.begin(), c.end()));
            CHECK(c.front() >= 0);
            CHECK(c.back() < n);
            seen.insert(c);
        }
        CHECK(seen.size() == s.size());
        CHECK(std::is_sorted(s.combos.begin(), s.combos.end()));
    }
}

TEST_CASE("hit probabilities: pinned examples") {
    SUBCASE("everything cached everywhere") {
        const auto hit = hit_probabilities(enumerate_combinations(2, 2), {1.0});
        REQUIRE(hit.size() == 2);
        CHECK(hit[0] == 1.0);
        CHECK(hit[1] == 1.0);
    }
    SUBCASE("uniform design gives K/N") {
        const CombinationSet s = enumerate_combinations(6, 3);
        const std::vector<double> p(s.size(), 1.0 / static_cast<double>(s.size()));
        for (double h : hit_probabilities(s, p)) CHECK(std::fabs(h - 0.5) <= 1e-12);
    }
    SUBCASE("reference design") {
        const auto hit = hit_probabilities(enumerate_combinations(5, 4),
                                           {0.7, 0.2, 0.06, 0.02, 0.02});
        const double want[5] = {0.98, 0.98, 0.94, 0.80, 0.30};
        double total = 0.0;
        for (int n = 0; n < 5; ++n) {
            CHECK(std::fabs(hit[n] - want[n]) <= 1e-12);
            total += hit[n];
        }
        CHECK(std::fabs(total - 4.0) <= 1e-12);
    }
    SUBCASE("length mismatch is rejected") {
        CHECK_THROWS_AS(hit_probabilities(enumerate_combinations(3, 2), {0.5, 0.5}),
                        std::invalid_argument);
    }
}

TEST_CASE("hit probabilities sum to the cache size on random designs") {
    std::mt19937_64 gen(99);
    std::exponential_distribution<double> ed(1.0);
    for (int it = 0; it < 120; ++it) {
        const int n = 2 + static_cast<int>(gen() % 7);
        const int k = 1 + static_cast<int>(gen() % static_cast<std::uint64_t>(n));
        const CombinationSet s = enumerate_combinations(n, k);
        std::vector<double> p(s.size());
        double total = 0.0;
        for (auto& v : p) {
            v = ed(gen);
            total += v;
        }
        for (auto& v : p) v /= total;
        const auto hit = hit_probabilities(s, p);
        double hsum = 0.0;
        for (double h : hit) hsum += h;
        CHECK(std::fabs(hsum - static_cast<double>(k)) <= 1e-12);
    }
}

TEST_CASE("sparse designs sort members and reject malformed support") {
    const CacheDesign d =
        make_cache_design_sparse(4, 2, {{{2, 0}, 0.5}, {{1, 3}, 0.5}});
    REQUIRE(d.combos.size() == 2);
    CHECK(d.combos.combos[0] == std::vector<int>{0, 2});
    CHECK(d.combos.combos[1] == std::vector<int>{1, 3});
    CHECK(d.hit[0] == 0.5);
    CHECK(d.hit[3] == 0.5);

    CHECK_THROWS_AS(make_cache_design_sparse(4, 2, {}), std::invalid_argument);
    CHECK_THROWS_AS(make_cache_design_sparse(4, 2, {{{0, 1, 2}, 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_cache_design_sparse(4, 2, {{{1, 1}, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_cache_design_sparse(4, 2, {{{0, 4}, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(make_cache_design_sparse(4, 2, {{{0, 1}, 0.5}, {{1, 0}, 0.5}}),
                    std::invalid_argument);
}

TEST_CASE("validation accepts the reference bundle") {
    const ModelBundle b = ref_bundle();
    CHECK(validation_issues(b.net, b.pop, b.design, b.scheme).empty());
    CHECK_NOTHROW(validate_inputs(b.net, b.pop, b.design, b.scheme));
}

TEST_CASE("validation rejects the pathloss boundary, naming the constraint") {
    ModelBundle b = ref_bundle();
    b.net.alpha = 2.0;
    const auto issues = validation_issues(b.net, b.pop, b.design, b.scheme);
    REQUIRE(!issues.empty());
    CHECK(mentions(issues, "alpha > 2"));
    CHECK_THROWS_AS(validate_inputs(b.net, b.pop, b.design, b.scheme), ValidationError);
}

TEST_CASE("validation rejects popularity that does not sum to one") {
    ModelBundle b = ref_bundle();
    b.pop.a = {0.5, 0.2, 0.1, 0.06, 0.04};
    const auto issues = validation_issues(b.net, b.pop, b.design, b.scheme);
    REQUIRE(!issues.empty());
    CHECK(mentions(issues, "sum to 1"));
}

TEST_CASE("validation rejects zero popularity entries") {
    ModelBundle b = ref_bundle();
    b.pop.a = {0.6, 0.2, 0.1, 0.1, 0.0};
    const auto issues = validation_issues(b.net, b.pop, b.design, b.scheme);
    CHECK(mentions(issues, "(0,1]"));
}

TEST_CASE("validation rejects never-cached files") {
    const CacheDesign d = make_cache_design_sparse(3, 2, {{{0, 1}, 1.0}});
    const auto issues =
        validation_issues(ref::net(), zipf_popularity(3, 1.0), d, SchemeConfig{});
    CHECK(mentions(issues, "never cached"));
}

TEST_CASE("validation collects every violation at once") {
    ModelBundle b = ref_bundle();
    b.net.alpha = 1.0;
    b.net.lambda_b = 0.0;
    b.scheme.period_t = 0;
    b.scheme.rate_theta = -1.0;
    try {
        validate_inputs(b.net, b.pop, b.design, b.scheme);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.issues.size() >= 4);
        CHECK(mentions(e.issues, "alpha"));
        CHECK(mentions(e.issues, "lambda_b"));
        CHECK(mentions(e.issues, "period_t"));
        CHECK(mentions(e.issues, "rate_theta"));
    }
}
