#include "voicepilot/error.hpp"
#include "voicepilot/template_store.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

using namespace voicepilot;
using voicepilot::testing::TempDir;

namespace {

Template make(std::string label, std::size_t p, std::size_t m, double seed_value) {
    Template t{std::move(label), KeyFeatures(p, m), 4};
    double v = seed_value;
    for (double& x : t.features.values()) {
        x = v;
        v = v * -1.5 + 0.25;
    }
    return t;
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

ErrorKind decode_error(const std::vector<std::uint8_t>& bytes) {
    try {
        decode_vocabulary(bytes);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("decode accepted damaged bytes");
    return ErrorKind::InvalidArgument;
}

// The set frozen in fixtures/golden.avtp (written by make_golden.py).
std::vector<Template> golden_set() {
    Template down{"down", KeyFeatures(3, 2), 4};
    Template up{"up", KeyFeatures(3, 2), 4};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t k = 0; k < 2; ++k) {
            down.features.at(i, k) = 0.5 * static_cast<double>(i) - static_cast<double>(k);
            up.features.at(i, k) = 0.125 * static_cast<double>(i + 1) * static_cast<double>(k + 1);
        }
    }
    return {down, up};
}

} // namespace

TEST_CASE("save then load returns the same set") {
    TempDir dir;
    const std::vector<Template> set = {make("up", 12, 8, 0.1), make("down", 12, 8, -0.3),
                                       make("left roll", 12, 8, 1e-300)};
    save_vocabulary(set, dir / "v.avtp");
    CHECK(load_vocabulary(dir / "v.avtp") == set);
    CHECK_FALSE(std::filesystem::exists(dir / "v.avtp.tmp"));
}

TEST_CASE("encoder rejects sets it cannot represent") {
    TempDir dir;
    const std::vector<Template> mixed = {make("up", 12, 8, 0.1), make("down", 10, 8, 0.1)};
    try {
        save_vocabulary(mixed, dir / "v.avtp");
        FAIL("expected MixedDimensions");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MixedDimensions);
    }
    CHECK_THROWS_AS(save_vocabulary(std::vector<Template>{}, dir / "v.avtp"), Error);
    const std::vector<Template> dup = {make("up", 12, 8, 0.1), make("up", 12, 8, 0.2)};
    CHECK_THROWS_AS(save_vocabulary(dup, dir / "v.avtp"), Error);
    CHECK_FALSE(std::filesystem::exists(dir / "v.avtp"));
}

TEST_CASE("a failed save leaves the previous file intact") {
    TempDir dir;
    const std::vector<Template> first = {make("up", 12, 8, 0.1)};
    save_vocabulary(first, dir / "v.avtp");
    const std::vector<Template> bad = {make("up", 12, 8, 0.1), make("down", 12, 16, 0.1)};
    CHECK_THROWS_AS(save_vocabulary(bad, dir / "v.avtp"), Error);
    CHECK(load_vocabulary(dir / "v.avtp") == first);

    // Writing into a missing directory fails without touching anything else.
    CHECK_THROWS_AS(save_vocabulary(first, dir / "no" / "such" / "v.avtp"), Error);
}

TEST_CASE("truncation and version checks") {
    const auto bytes = encode_vocabulary(std::vector<Template>{make("up", 12, 8, 0.5)});
    for (std::size_t cut : {std::size_t{0}, std::size_t{3}, std::size_t{11}, std::size_t{12},
                            bytes.size() / 2, bytes.size() - 1}) {
        const std::vector<std::uint8_t> truncated(bytes.begin(), bytes.begin() + static_cast<long>(cut));
        CHECK(decode_error(truncated) == ErrorKind::CorruptEntry);
    }
    auto v99 = bytes;
    v99[4] = 99;
    v99[5] = 0;
    CHECK(decode_error(v99) == ErrorKind::UnsupportedVersion);

    auto trailing = bytes;
    trailing.push_back(0);
    CHECK(decode_error(trailing) == ErrorKind::CorruptEntry);
}

TEST_CASE("every single-byte flip is detected") {
    const auto bytes = encode_vocabulary(
        std::vector<Template>{make("up", 4, 2, 0.5), make("reset", 4, 2, -2.0)});
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        auto damaged = bytes;
        damaged[i] ^= 0x5A;
        const ErrorKind kind = decode_error(damaged);
        CHECK((kind == ErrorKind::CorruptEntry || kind == ErrorKind::UnsupportedVersion));
    }
}

TEST_CASE("golden fixture decodes to the known two-template set") {
    const auto bytes = read_bytes(std::filesystem::path(VOICEPILOT_FIXTURE_DIR) / "golden.avtp");
    REQUIRE(bytes.size() == 128);
    CHECK(decode_vocabulary(bytes) == golden_set());
    CHECK(encode_vocabulary(golden_set()) == bytes);
}

TEST_CASE("missing file is an I/O error") {
    TempDir dir;
    try {
        load_vocabulary(dir / "absent.avtp");
        FAIL("expected IoFailure");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::IoFailure);
    }
}

TEST_CASE("text export lists every template") {
    std::ostringstream out;
    export_text(golden_set(), out);
    const std::string s = out.str();
    CHECK(s.find("down") != std::string::npos);
    CHECK(s.find("up") != std::string::npos);
    CHECK(s.find("-1") != std::string::npos);
}

TEST_CASE("random vocabularies round-trip bit-exactly") {
    TempDir dir;
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<std::uint64_t> bits;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t p = 1 + trial % 24;
        const std::size_t m = trial % 2 ? 8 : 16;
        std::vector<Template> set;
        for (int n = 0; n <= trial % 5; ++n) {
            Template t{"w" + std::to_string(n), KeyFeatures(p, m), static_cast<unsigned>(1 + n)};
            for (double& v : t.features.values()) {
                // Any finite bit pattern, including subnormals and signed zero.
                do {
                    const std::uint64_t b = bits(rng);
                    std::memcpy(&v, &b, sizeof v);
                } while (!std::isfinite(v));
            }
            set.push_back(std::move(t));
        }
        save_vocabulary(set, dir / "r.avtp");
        const auto back = load_vocabulary(dir / "r.avtp");
        REQUIRE(back.size() == set.size());
        for (std::size_t i = 0; i < set.size(); ++i) {
            CHECK(back[i].label == set[i].label);
            CHECK(std::memcmp(back[i].features.values().data(), set[i].features.values().data(),
                              set[i].features.values().size_bytes()) == 0);
        }
    }
}
