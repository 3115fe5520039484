#include "levyedge/errors.hpp"
#include "levyedge/model_io.hpp"
#include "levyedge/rng.hpp"

#include <doctest.h>

#include <cstdio>
#include <limits>

using namespace levyedge;

namespace {

LevyTriplet sample_model() {
    LevyMeasure m;
    m.atoms.push_back({1.0, 5.0});
    m.atoms.push_back({-0.25, 0.125});
    DensityPiece uni;
    uni.lo = 0.0;
    uni.hi = 1.0;
    uni.poly = {5.0};
    m.density_pieces.push_back(uni);
    DensityPiece tail;
    tail.lo = 1.0;
    tail.hi = std::numeric_limits<double>::infinity();
    tail.poly = {0.5};
    tail.exp_poly = {0.0, 0.0, -1.0};
    tail.power = 2.0;
    m.density_pieces.push_back(tail);
    DensityPiece tab;
    tab.kind = PieceKind::tabulated;
    tab.xs = {2.0, 2.5, 3.0};
    tab.values = {0.1, 0.4, 0.0};
    tab.lo = 2.0;
    tab.hi = 3.0;
    tab.monotone_tail = true;
    m.density_pieces.push_back(tab);
    return LevyTriplet(0.75, -0.5, std::move(m), true);
}

} // namespace

TEST_CASE("serialize -> parse -> serialize is byte-identical") {
    const auto model = sample_model();
    const std::string first = serialize_model(model);
    const auto reparsed = parse_model(first);
    const std::string second = serialize_model(reparsed);
    CHECK(first == second);
    CHECK(reparsed.sigma2() == model.sigma2());
    CHECK(reparsed.rho() == model.rho());
    CHECK(reparsed.cramer_declared() == model.cramer_declared());
    REQUIRE(reparsed.measure().atoms.size() == 2);
    REQUIRE(reparsed.measure().density_pieces.size() == 3);
    CHECK(reparsed.measure().density_pieces[1].hi == std::numeric_limits<double>::infinity());
    CHECK(reparsed.measure().density_pieces[2].monotone_tail);
}

TEST_CASE("parse accepts minimal models") {
    const auto gauss = parse_model(R"({"sigma2": 1.0, "rho": 0.0})");
    CHECK(gauss.sigma2() == 1.0);
    CHECK(gauss.measure().atoms.empty());
    CHECK_FALSE(gauss.cramer_declared());

    const auto piece = parse_model(R"({
      "sigma2": 0.0, "rho": 0.0,
      "density_pieces": [{"kind": "polyexp", "support": [0.01, "inf"],
                          "params": {"poly": [1.0], "exp_poly": [0.0, -1.0], "power": -1.0}}]
    })");
    CHECK(piece.measure().density_pieces[0].hi == std::numeric_limits<double>::infinity());
    CHECK(piece.measure().density_pieces[0].power == -1.0);
}

TEST_CASE("parse rejects malformed input") {
    CHECK_THROWS_AS(parse_model("{"), config_error);
    CHECK_THROWS_AS(parse_model("[]"), config_error);
    CHECK_THROWS_AS(parse_model(R"({"rho": 0.0})"), config_error);
    CHECK_THROWS_AS(parse_model(R"({"sigma2": "x", "rho": 0.0})"), config_error);
    CHECK_THROWS_AS(parse_model(R"({"sigma2": 1.0, "rho": 0.0,
        "atoms": [{"x": 0.0, "mass": 1.0}]})"),
                    config_error);
    CHECK_THROWS_AS(parse_model(R"({"sigma2": 1.0, "rho": 0.0,
        "density_pieces": [{"kind": "nope", "support": [0, 1], "params": {}}]})"),
                    config_error);
    CHECK_THROWS_AS(parse_model(R"({"sigma2": 1.0, "rho": 0.0,
        "density_pieces": [{"kind": "polyexp", "support": [-1, 1],
                            "params": {"poly": [1.0]}}]})"),
                    config_error);
}

TEST_CASE("round trip is byte-identical for randomized models") {
    levyedge::Xoshiro256pp rng(123);
    for (int rep = 0; rep < 25; ++rep) {
        LevyMeasure m;
        const int n_atoms = static_cast<int>(rng.next() % 4);
        for (int i = 0; i < n_atoms; ++i)
            m.atoms.push_back({rng.uniform_in(0.05, 3.0) * (rng.next() % 2 ? 1.0 : -1.0),
                               rng.uniform_in(0.1, 5.0)});
        if (rng.next() % 2) {
            DensityPiece piece;
            piece.lo = 0.0;
            piece.hi = rng.uniform_in(0.5, 2.0);
            piece.poly = {rng.uniform_in(0.1, 4.0), rng.uniform_in(0.0, 1.0)};
            piece.exp_poly = {0.0, -rng.uniform_in(0.0, 2.0)};
            m.density_pieces.push_back(std::move(piece));
        }
        const LevyTriplet model(rng.uniform_in(0.0, 2.0), rng.uniform_in(-1.0, 1.0), std::move(m),
                                rng.next() % 2 == 0);
        const std::string once = serialize_model(model);
        CHECK(serialize_model(parse_model(once)) == once);
    }
}

TEST_CASE("save and load round trip through a file") {
    const auto model = sample_model();
    const std::string path = "levyedge_model_io_test.json";
    save_model(model, path);
    const auto loaded = load_model(path);
    CHECK(serialize_model(loaded) == serialize_model(model));
    std::remove(path.c_str());
}
