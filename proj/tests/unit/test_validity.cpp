#include <cmath>

#include "doctest.h"
#include "exfrac/validity.hpp"
#include "support/oracles.hpp"
#include "support/test_rng.hpp"

using namespace exfrac;
using testsupport::TestRng;

namespace {

EstimationParams params_with_angle(double phi) {
    EstimationParams p;
    p.max_angle_deg = phi;
    return p;
}

Vec2 random_vector(TestRng& rng, double reach) {
    return {rng.range(-reach, reach), rng.range(-reach, reach)};
}

// Rejects samples sitting within eps of any of the three decision
// boundaries, where rounding legitimately decides the outcome.
bool near_boundary(Vec2 f, Vec2 k, const EstimationParams& p, double eps) {
    const double nf = norm(f);
    const double nk = norm(k);
    if (std::abs(nf - p.min_magnitude) < eps || std::abs(nk - p.min_magnitude) < eps) return true;
    if (std::abs(nk - nf) < eps) return true;
    if (nf > 0.0 && nk > 0.0) {
        const double cosine = std::abs(dot(f, k)) / (nf * nk);
        if (std::abs(cosine - p.cos_max_angle()) < eps) return true;
    }
    return false;
}

}  // namespace

TEST_SUITE("validity") {

TEST_CASE("collinear modulo pi passes") {
    CHECK(pixel_valid({10, 0}, {-3, 0}, params_with_angle(5.0)));
}

TEST_CASE("orthogonal vectors fail the angle constraint") {
    CHECK_FALSE(pixel_valid({10, 0}, {0, 3}, params_with_angle(5.0)));
}

TEST_CASE("blur longer than flow fails") {
    CHECK_FALSE(pixel_valid({2, 0}, {3, 0}, params_with_angle(5.0)));
}

TEST_CASE("blur at or below the magnitude floor fails for any angle") {
    CHECK_FALSE(pixel_valid({10, 0}, {0.5, 0}, params_with_angle(5.0)));
    CHECK_FALSE(pixel_valid({10, 0}, {0.5, 0}, params_with_angle(89.0)));
    // exactly 1.0 is still out: the floor is strict
    CHECK_FALSE(pixel_valid({10, 0}, {1.0, 0}, params_with_angle(5.0)));
}

TEST_CASE("zero vectors are rejected without forming the cosine") {
    CHECK_FALSE(pixel_valid({0, 0}, {0, 0}, params_with_angle(5.0)));
    CHECK_FALSE(pixel_valid({10, 0}, {0, 0}, params_with_angle(5.0)));
}

TEST_CASE("blur equal to flow is kept, so alpha = 1 stays representable") {
    CHECK(pixel_valid({10, 0}, {10, 0}, params_with_angle(5.0)));
}

TEST_CASE("uniform agreeing fields give an all-true mask") {
    const auto flow = Vec2Field::constant(4, 4, {10, 0});
    const auto blur = Vec2Field::constant(4, 4, {2.4, 0});
    const ValidityMask mask = compute_validity(flow, blur, params_with_angle(5.0));
    for (std::uint8_t bit : mask.bits) CHECK(bit == 1);
}

TEST_CASE("all-zero blur gives an all-false mask") {
    const auto flow = Vec2Field::constant(4, 4, {10, 0});
    const auto blur = Vec2Field::constant(4, 4, {0, 0});
    const ValidityMask mask = compute_validity(flow, blur, params_with_angle(5.0));
    for (std::uint8_t bit : mask.bits) CHECK(bit == 0);
}

TEST_CASE("dimension mismatch raises a shape error") {
    const auto flow = Vec2Field::constant(4, 4, {10, 0});
    const auto blur = Vec2Field::constant(4, 3, {2.4, 0});
    CHECK_THROWS_AS(compute_validity(flow, blur, params_with_angle(5.0)), ShapeError);
}

TEST_CASE("mask equals the independent scalar predicate on random fields") {
    TestRng rng(11);
    const EstimationParams p = params_with_angle(5.0);
    for (int trial = 0; trial < 100; ++trial) {
        Vec2Field flow(16, 16);
        Vec2Field blur(16, 16);
        for (std::size_t i = 0; i < flow.data.size(); ++i) {
            flow.data[i] = rng.unit() < 0.05 ? Vec2{0, 0} : random_vector(rng, 8.0);
            blur.data[i] = rng.unit() < 0.05 ? Vec2{0, 0} : random_vector(rng, 8.0);
        }
        const ValidityMask mask = compute_validity(flow, blur, p);
        for (int y = 0; y < 16; ++y) {
            for (int x = 0; x < 16; ++x) {
                REQUIRE(mask.at(x, y) == testsupport::oracle::pixel_valid(
                                             flow.at(x, y), blur.at(x, y), p.max_angle_deg,
                                             p.min_magnitude));
            }
        }
    }
}

TEST_CASE("flipping the blur sign never changes validity") {
    TestRng rng(12);
    const EstimationParams p = params_with_angle(5.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const Vec2 f = random_vector(rng, 10.0);
        const Vec2 k = random_vector(rng, 10.0);
        CHECK(pixel_valid(f, k, p) == pixel_valid(f, -k, p));
    }
}

TEST_CASE("joint rotation preserves validity away from decision boundaries") {
    TestRng rng(13);
    const EstimationParams p = params_with_angle(5.0);
    int checked = 0;
    while (checked < 500) {
        const Vec2 f = random_vector(rng, 10.0);
        const Vec2 k = random_vector(rng, 10.0);
        if (near_boundary(f, k, p, 1e-6)) continue;
        const double angle = rng.range(0.0, 6.283185307179586);
        CHECK(pixel_valid(f, k, p) == pixel_valid(rotate(f, angle), rotate(k, angle), p));
        ++checked;
    }
}

TEST_CASE("upscaling both vectors never invalidates a valid pair") {
    TestRng rng(14);
    const EstimationParams p = params_with_angle(5.0);
    int checked = 0;
    while (checked < 500) {
        const Vec2 f = random_vector(rng, 10.0);
        const Vec2 k = random_vector(rng, 10.0);
        if (near_boundary(f, k, p, 1e-6) || !pixel_valid(f, k, p)) continue;
        const double s = rng.range(1.0 + 1e-3, 8.0);
        CHECK(pixel_valid(s * f, s * k, p));
        ++checked;
    }
}

TEST_CASE("validity is monotone in the angle threshold") {
    TestRng rng(15);
    for (int trial = 0; trial < 1000; ++trial) {
        const Vec2 f = random_vector(rng, 10.0);
        const Vec2 k = random_vector(rng, 10.0);
        const double phi_small = rng.range(1.0, 40.0);
        const double phi_large = phi_small + rng.range(0.5, 45.0);
        if (pixel_valid(f, k, params_with_angle(phi_small))) {
            CHECK(pixel_valid(f, k, params_with_angle(phi_large)));
        }
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(pixel_valid({1, 0}, {1, 0}, EstimationParams{0, 5.0, 1.0}), ParamError);
    CHECK_THROWS_AS(pixel_valid({1, 0}, {1, 0}, EstimationParams{30, 0.0, 1.0}), ParamError);
    CHECK_THROWS_AS(pixel_valid({1, 0}, {1, 0}, EstimationParams{30, 90.0, 1.0}), ParamError);
    CHECK_THROWS_AS(pixel_valid({1, 0}, {1, 0}, EstimationParams{30, 5.0, -1.0}), ParamError);
}

}  // TEST_SUITE
