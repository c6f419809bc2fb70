#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gbgm/baselines.hpp"
#include "gbgm/rng.hpp"

using namespace gbgm;

namespace {

Image random_image(std::uint64_t seed, int w, int h, int channels = 1) {
    RngStream rng(RngStream::mix(seed));
    std::vector<double> px(static_cast<std::size_t>(w) * h * channels);
    // Keep pixels strictly positive so zeroed pixels are unambiguous.
    for (auto& v : px) v = rng.uniform(0.1, 1.0);
    return Image(w, h, channels, std::move(px));
}

// Fraction of pixels whose channels are all zero.
double zero_fraction(const Image& img) {
    int zeros = 0;
    const int npx = img.width() * img.height();
    for (int i = 0; i < npx; ++i) {
        bool all = true;
        for (int c = 0; c < img.channels(); ++c) {
            all = all && img.pixels()[static_cast<std::size_t>(i) * img.channels() + c] == 0.0;
        }
        zeros += all;
    }
    return static_cast<double>(zeros) / npx;
}

}  // namespace

TEST_SUITE_BEGIN("baselines");

TEST_CASE("random_erasing is identity at probability zero") {
    const Image img = random_image(1, 32, 32);
    RandomErasingParams params;
    params.probability = 0.0;
    RngStream rng = derive_stream(0, 0);
    CHECK(random_erasing(img, rng, params).pixels() == img.pixels());
}

TEST_CASE("random_erasing erases the exact deterministic rectangle") {
    const Image img = random_image(2, 32, 32);
    RandomErasingParams params;
    params.probability = 1.0;
    params.area_lo = params.area_hi = 0.25;
    params.aspect_lo = params.aspect_hi = 1.0;
    RngStream rng = derive_stream(4, 0);
    const Image out = random_erasing(img, rng, params);
    // sqrt(0.25 * 1024) = 16, so a 16x16 rectangle: 256 pixels.
    CHECK(zero_fraction(out) == doctest::Approx(256.0 / 1024.0));
}

TEST_CASE("random_erasing stays inside the image and erases one rectangle") {
    RandomErasingParams params;
    params.probability = 1.0;
    const Image img = random_image(3, 48, 40);
    for (int trial = 0; trial < 200; ++trial) {
        RngStream rng = derive_stream(31, trial);
        const Image out = random_erasing(img, rng, params);
        int min_x = 48, max_x = -1, min_y = 40, max_y = -1, changed = 0;
        for (int y = 0; y < 40; ++y) {
            for (int x = 0; x < 48; ++x) {
                if (out.at(y, x, 0) != img.at(y, x, 0)) {
                    CHECK(out.at(y, x, 0) == 0.0);
                    min_x = std::min(min_x, x);
                    max_x = std::max(max_x, x);
                    min_y = std::min(min_y, y);
                    max_y = std::max(max_y, y);
                    ++changed;
                }
            }
        }
        if (changed > 0) {
            // Changed pixels fill their bounding box: one solid rectangle.
            CHECK(changed == (max_x - min_x + 1) * (max_y - min_y + 1));
        }
    }
}

TEST_CASE("random_erasing empirical area matches p * E[area]") {
    RandomErasingParams params;
    params.probability = 1.0;
    params.area_lo = 0.05;
    params.area_hi = 0.20;
    params.aspect_lo = params.aspect_hi = 1.0;
    const Image img = random_image(5, 64, 64);
    double total = 0.0;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        RngStream rng = derive_stream(77, i);
        total += zero_fraction(random_erasing(img, rng, params));
    }
    CHECK(std::abs(total / trials - 0.125) <= 0.02);
}

TEST_CASE("gridmask identity at keep ratio one") {
    const Image img = random_image(6, 32, 32);
    GridMaskParams params;
    params.d_min = 8;
    params.d_max = 8;
    params.keep_ratio = 1.0;
    RngStream rng = derive_stream(0, 0);
    CHECK(gridmask(img, rng, params).pixels() == img.pixels());
}

TEST_CASE("gridmask zeroes exactly the hole fraction") {
    const Image img = random_image(7, 32, 32);
    const Image out = gridmask_with_offset(img, 8, 0.5, 0, 0);
    CHECK(zero_fraction(out) == doctest::Approx(0.25));

    // Any phase keeps the fraction exact when d divides both dimensions.
    for (int trial = 0; trial < 50; ++trial) {
        RngStream rng = derive_stream(81, trial);
        GridMaskParams params;
        params.d_min = params.d_max = 8;
        params.keep_ratio = 0.5;
        CHECK(zero_fraction(gridmask(img, rng, params)) == doctest::Approx(0.25));
    }
}

TEST_CASE("gridmask pattern is d-periodic") {
    const Image img = random_image(8, 64, 64, 1);
    // Make every pixel nonzero and distinct from zero, then compare holes.
    const int d = 16;
    const Image out = gridmask_with_offset(img, d, 0.6, 5, 9);
    for (int y = 0; y < 64 - d; ++y) {
        for (int x = 0; x < 64 - d; ++x) {
            const bool hole_here = out.at(y, x, 0) == 0.0;
            CHECK(hole_here == (out.at(y + d, x, 0) == 0.0));
            CHECK(hole_here == (out.at(y, x + d, 0) == 0.0));
        }
    }
}

TEST_CASE("hide_and_seek forced probabilities") {
    const Image img = random_image(9, 32, 32);
    RngStream rng = derive_stream(0, 0);
    HideAndSeekParams params;
    params.patch_size = 4;

    params.hide_probability = 0.0;
    CHECK(hide_and_seek(img, rng, params).pixels() == img.pixels());

    params.hide_probability = 1.0;
    CHECK(zero_fraction(hide_and_seek(img, rng, params)) == 1.0);

    params.patch_size = 5;
    CHECK_THROWS_AS(hide_and_seek(img, rng, params), std::invalid_argument);
}

TEST_CASE("hide_and_seek hides half the patches on average") {
    const Image img = random_image(10, 32, 32);
    HideAndSeekParams params;
    params.patch_size = 4;  // 8x8 grid
    params.hide_probability = 0.5;
    double total = 0.0;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        RngStream rng = derive_stream(91, i);
        total += zero_fraction(hide_and_seek(img, rng, params));
    }
    CHECK(std::abs(total / trials - 0.5) <= 0.02);
}

TEST_CASE("random_patch_mask zeroes exactly k patches") {
    const Image img = random_image(11, 32, 32);
    for (int trial = 0; trial < 100; ++trial) {
        RngStream rng = derive_stream(101, trial);
        const Image out = random_patch_mask(img, 4, 0.10, rng);
        CHECK(zero_fraction(out) == doctest::Approx(6.0 / 64.0));
    }

    // k = N wipes the image: round(0.9 * 4) = 4 patches of a 2x2 grid.
    RngStream rng = derive_stream(0, 0);
    const Image img4 = random_image(12, 8, 8);
    CHECK(zero_fraction(random_patch_mask(img4, 4, 0.9, rng)) == 1.0);
}

TEST_CASE("random_patch_mask picks patches uniformly") {
    const Image img = random_image(13, 16, 16);
    const int trials = 10000;
    std::vector<int> hits(16, 0);
    for (int i = 0; i < trials; ++i) {
        RngStream rng = derive_stream(111, i);
        const Image out = random_patch_mask(img, 4, 0.10, rng);  // k = 2 of 16
        for (int patch = 0; patch < 16; ++patch) {
            const int y = (patch / 4) * 4, x = (patch % 4) * 4;
            if (out.at(y, x, 0) == 0.0) hits[patch] += 1;
        }
    }
    for (int patch = 0; patch < 16; ++patch) {
        CHECK(std::abs(hits[patch] / static_cast<double>(trials) - 2.0 / 16.0) <= 0.02);
    }
}

TEST_CASE("baselines preserve shape and range and are seed deterministic") {
    const Image img = random_image(14, 32, 32, 3);
    RandomErasingParams re;
    GridMaskParams gm;
    gm.d_min = 8;
    gm.d_max = 16;
    const auto check = [&](auto&& fn) {
        RngStream a = derive_stream(7, 3);
        RngStream b = derive_stream(7, 3);
        const Image out_a = fn(a);
        const Image out_b = fn(b);
        CHECK(out_a.pixels() == out_b.pixels());
        CHECK(out_a.width() == img.width());
        CHECK(out_a.height() == img.height());
        CHECK(out_a.channels() == img.channels());
        for (double v : out_a.pixels()) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    };
    check([&](RngStream& r) { return random_erasing(img, r, re); });
    check([&](RngStream& r) { return gridmask(img, r, gm); });
    check([&](RngStream& r) {
        return hide_and_seek(img, r, HideAndSeekParams{4, 0.5});
    });
    check([&](RngStream& r) { return random_patch_mask(img, 4, 0.2, r); });
}

TEST_SUITE_END();
