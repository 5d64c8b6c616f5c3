#include "voicepilot/error.hpp"
#include "voicepilot/lpcc_features.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace voicepilot;
namespace oracle = voicepilot::testing::oracle;

TEST_CASE("autocorrelation hand cases") {
    const std::vector<double> zero(16, 0.0);
    for (double r : autocorrelate(zero, 4)) CHECK(r == 0.0);

    std::vector<double> impulse(8, 0.0);
    impulse[0] = 1.0;
    CHECK(autocorrelate(impulse, 2) == std::vector<double>{1.0, 0.0, 0.0});

    const std::vector<double> ones = {1, 1, 1, 1};
    CHECK(autocorrelate(ones, 1) == std::vector<double>{4.0, 3.0});

    try {
        autocorrelate(ones, 4);
        FAIL("expected FrameTooShort");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::FrameTooShort);
    }
}

TEST_CASE("Hamming window endpoints and centre") {
    const std::vector<double> ones(5, 1.0);
    const auto w = apply_window(ones, WindowKind::Hamming);
    CHECK(w[0] == doctest::Approx(0.08));
    CHECK(w[2] == doctest::Approx(1.0));
    CHECK(w[4] == doctest::Approx(0.08));
    CHECK(apply_window(ones, WindowKind::Rectangular) == ones);
}

TEST_CASE("Levinson-Durbin hand cases") {
    std::vector<double> white(13, 0.0);
    white[0] = 1.0;
    const auto lpc = levinson_durbin(white);
    CHECK(lpc.order() == 12);
    for (double a : lpc.a) CHECK(a == 0.0);
    CHECK_FALSE(lpc.degenerate);

    try {
        levinson_durbin(std::vector<double>{0.0, 0.0, 0.0});
        FAIL("expected ZeroEnergyFrame");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ZeroEnergyFrame);
    }

    // Order 1: a(1) = r(1) / r(0).
    CHECK(levinson_durbin(std::vector<double>{4.0, 3.0}).a[0] == doctest::Approx(0.75));
}

TEST_CASE("perfectly predictable input stops early and flags it") {
    // r(k) = 1 for all k: a constant signal, predicted exactly at order 1.
    const auto lpc = levinson_durbin(std::vector<double>(6, 1.0));
    CHECK(lpc.degenerate);
    CHECK(lpc.order() == 5);
    CHECK(lpc.a[0] == doctest::Approx(1.0));
    for (std::size_t k = 1; k < lpc.a.size(); ++k) CHECK(lpc.a[k] == 0.0);
}

TEST_CASE("AR(2) coefficients are recovered with the predictor sign convention") {
    const auto x = oracle::ar2_process(0.75, -0.5, 4096, 99);
    const auto r = autocorrelate(x, 2);
    const auto lpc = levinson_durbin(r);
    CHECK(lpc.a[0] == doctest::Approx(0.75).epsilon(0.05 / 0.75));
    CHECK(lpc.a[1] == doctest::Approx(-0.5).epsilon(0.05 / 0.5));
}

TEST_CASE("solution satisfies the normal equations") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> frame(256);
        for (double& v : frame) v = g(rng);
        const auto r = autocorrelate(apply_window(frame, WindowKind::Hamming), 12);
        const auto lpc = levinson_durbin(r);
        REQUIRE_FALSE(lpc.degenerate);
        CHECK(oracle::toeplitz_relative_residual(r, lpc.a) <= 1e-6);
    }
}

TEST_CASE("LPCC recursion hand cases") {
    CHECK(lpc_to_lpcc({std::vector<double>(12, 0.0), false}).c == std::vector<double>(12, 0.0));

    const double a1 = 0.7, a2 = -0.2;
    const auto c = lpc_to_lpcc({{a1, a2, 0.0, 0.0}, false}).c;
    CHECK(c[0] == a1);
    CHECK(c[1] == a1 * a1 / 2 + a2);

    const auto c3 = lpc_to_lpcc({{1.0, 0.0, 0.0}, false}).c;
    CHECK(c3[0] == doctest::Approx(1.0));
    CHECK(c3[1] == doctest::Approx(0.5));
    CHECK(c3[2] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("LPCC recursion agrees with the direct-sum oracle") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t p = 1 + trial % 12;
        LpcCoeffs lpc;
        for (std::size_t k = 0; k < p; ++k) lpc.a.push_back(u(rng));
        const auto got = lpc_to_lpcc(lpc).c;
        const auto want = oracle::lpcc_direct(lpc.a);
        REQUIRE(got.size() == want.size());
        for (std::size_t n = 0; n < p; ++n) {
            CHECK(oracle::relative_error(got[n], want[n]) <= 1e-9);
        }
        // Same bits in, same bits out.
        CHECK(lpc_to_lpcc(lpc).c == got);
    }
}

TEST_CASE("frame features are scale invariant") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 300.0);
    std::vector<std::int16_t> frame(256), doubled(256);
    for (std::size_t i = 0; i < frame.size(); ++i) {
        frame[i] = static_cast<std::int16_t>(std::round(g(rng)));
        doubled[i] = static_cast<std::int16_t>(2 * frame[i]);
    }
    const auto a = frame_lpcc(frame, {});
    const auto b = frame_lpcc(doubled, {});
    for (std::size_t n = 0; n < a.c.size(); ++n) {
        CHECK(oracle::relative_error(a.c[n], b.c[n]) <= 1e-9);
    }
}

TEST_CASE("feature extraction covers the segment and flags silent frames") {
    SampleBuffer b;
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 500.0);
    for (int i = 0; i < 256 * 8; ++i) {
        b.samples.push_back(i < 256 * 4 ? static_cast<std::int16_t>(g(rng)) : std::int16_t{0});
    }
    const auto frames = frame_signal(b);
    const auto five = extract_features(frames, {1, 5});
    CHECK(five.frame_count() == 5);
    CHECK(five.order() == 12);
    CHECK(five.zero_energy == std::vector<bool>{false, false, false, true, true});

    const auto silent = extract_features(frames, {4, 7});
    for (std::size_t j = 0; j < silent.frame_count(); ++j) {
        CHECK(silent.zero_energy[j]);
        CHECK(silent.vectors[j].c == std::vector<double>(12, 0.0));
    }

    CHECK_THROWS_AS(extract_features(frames, {6, 8}), Error);
    FeatureParams p20{20, WindowKind::Hamming};
    CHECK(extract_features(frames, {0, 1}, p20).order() == 20);
    FeatureParams too_big{kMaxLpcOrder + 1, WindowKind::Hamming};
    CHECK_THROWS_AS(extract_features(frames, {0, 1}, too_big), Error);
}

TEST_CASE("frame pipeline agrees with the independent implementation") {
    std::mt19937_64 rng(23);
    std::normal_distribution<double> g(0.0, 800.0);
    for (int trial = 0; trial < 20; ++trial) {
        // Colour the noise so the LPC is non-trivial.
        std::vector<std::int16_t> frame(256);
        double prev = 0.0;
        for (auto& s : frame) {
            prev = 0.9 * prev + g(rng);
            s = static_cast<std::int16_t>(std::clamp(std::round(prev), -32768.0, 32767.0));
        }
        const auto got = frame_lpcc(frame, {}).c;
        const auto want = oracle::frame_lpcc_reference(frame, 12);
        for (std::size_t n = 0; n < got.size(); ++n) {
            CHECK(oracle::relative_error(got[n], want[n]) <= 1e-9);
        }
    }
}
