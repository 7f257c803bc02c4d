#include "doctest.h"

#include "scispace/rca.hpp"

#include <cmath>
#include <cstring>

#include "oracles.hpp"

using namespace scispace;

namespace {

Panel two_by_two(double c1i, double c1j, double c2i, double c2j) {
    return oracle::make_panel({{"c1", "i", 2000, c1i, 10 * c1i},
                               {"c1", "j", 2000, c1j, 10 * c1j},
                               {"c2", "i", 2000, c2i, 10 * c2i},
                               {"c2", "j", 2000, c2j, 10 * c2j}});
}

bool bit_equal(double a, double b) {
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

} // namespace

TEST_CASE("balassa index on a two country, two discipline panel") {
    Panel panel = two_by_two(20, 80, 30, 70);
    RcaSlice slice = rca(totals(panel, 2000, Metric::documents), panel);
    const int c1 = panel.catalogs()->country("c1");
    const int c2 = panel.catalogs()->country("c2");
    const int i = panel.catalogs()->discipline("i");
    const int j = panel.catalogs()->discipline("j");

    CHECK(slice.values(c1, i) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(slice.values(c1, j) == doctest::Approx(80.0 / 75.0).epsilon(1e-12));
    CHECK(slice.values(c2, i) == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(slice.values(c2, j) == doctest::Approx(70.0 / 75.0).epsilon(1e-12));
    CHECK(slice.year == 2000);
    CHECK(slice.metric == Metric::documents);

    RcaFlags flags = rca_flag(slice);
    CHECK_FALSE(flags.flags(c1, i));
    CHECK(flags.flags(c1, j));
    CHECK(flags.flags(c2, i));
    CHECK_FALSE(flags.flags(c2, j));
    CHECK(flags.year == 2000);
    CHECK(flags.metric == Metric::documents);
}

TEST_CASE("flag threshold includes exactly 1.0") {
    // A single-country world makes every published RCA exactly 1.
    Panel panel = oracle::make_panel(
        {{"solo", "a", 1999, 7, 1}, {"solo", "b", 1999, 3, 1}, {"solo", "c", 1999, 0, 0}});
    RcaSlice slice = rca(totals(panel, 1999, Metric::documents), panel);
    const auto& cat = *panel.catalogs();
    CHECK(slice.values(0, cat.discipline("a")) == 1.0);
    CHECK(slice.values(0, cat.discipline("b")) == 1.0);

    RcaFlags flags = rca_flag(slice);
    CHECK(flags.flags(0, cat.discipline("a")));
    CHECK(flags.flags(0, cat.discipline("b")));
    CHECK_FALSE(flags.flags(0, cat.discipline("c")));
}

TEST_CASE("zero numerator with positive denominators gives zero, not missing") {
    Panel panel = two_by_two(0, 10, 5, 5);
    RcaSlice slice = rca(totals(panel, 2000, Metric::documents), panel);
    const int c1 = panel.catalogs()->country("c1");
    const int i = panel.catalogs()->discipline("i");
    CHECK(slice.defined(c1, i));
    CHECK(slice.values(c1, i) == 0.0);
    CHECK_FALSE(rca_flag(slice).flags(c1, i));
}

TEST_CASE("zero country total blanks the whole row") {
    // "c1" exists in the catalog through 2001 but publishes nothing in 2000.
    Panel panel = oracle::make_panel({{"c1", "i", 2001, 5, 5},
                                      {"c2", "i", 2000, 5, 5},
                                      {"c2", "j", 2000, 5, 5}});
    RcaSlice slice = rca(totals(panel, 2000, Metric::documents), panel);
    const int c1 = panel.catalogs()->country("c1");
    const int c2 = panel.catalogs()->country("c2");
    CHECK_FALSE(slice.defined(c1, 0));
    CHECK_FALSE(slice.defined(c1, 1));
    CHECK(slice.defined(c2, 0));
    CHECK(slice.defined(c2, 1));

    RcaFlags flags = rca_flag(slice);
    CHECK_FALSE(flags.flags(c1, 0));
    CHECK_FALSE(flags.flags(c1, 1));
}

TEST_CASE("zero world discipline total blanks the whole column") {
    Panel panel = oracle::make_panel({{"c1", "i", 2000, 5, 5},
                                      {"c2", "i", 2000, 5, 5},
                                      {"c1", "j", 2001, 5, 5}});
    RcaSlice slice = rca(totals(panel, 2000, Metric::documents), panel);
    const int j = panel.catalogs()->discipline("j");
    CHECK_FALSE(slice.defined(0, j));
    CHECK_FALSE(slice.defined(1, j));
    const int i = panel.catalogs()->discipline("i");
    CHECK(slice.values(0, i) == 1.0);
    CHECK(slice.values(1, i) == 1.0);
}

TEST_CASE("year with no publications at all is fully missing and unflagged") {
    Panel panel = oracle::make_panel({{"c1", "i", 1996, 5, 5}, {"c2", "j", 2000, 5, 5}});
    RcaSlice slice = rca(totals(panel, 1998, Metric::documents), panel);
    CHECK_FALSE(slice.defined(0, 0));
    CHECK_FALSE(slice.defined(0, 1));
    CHECK_FALSE(slice.defined(1, 0));
    CHECK_FALSE(slice.defined(1, 1));
    CHECK_FALSE(rca_flag(slice).flags.any());
}

TEST_CASE("doubling every count leaves the index bit-identical") {
    Panel base = two_by_two(20, 80, 30, 70);
    Panel doubled = two_by_two(40, 160, 60, 140);
    RcaSlice a = rca(totals(base, 2000, Metric::documents), base);
    RcaSlice b = rca(totals(doubled, 2000, Metric::documents), doubled);
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < 2; ++i) CHECK(bit_equal(a.values(c, i), b.values(c, i)));
}

TEST_CASE("documents and citations run through the same arithmetic") {
    // Swapping the two count columns swaps the two metrics' results exactly.
    Panel a = oracle::make_panel(
        {{"c1", "i", 2000, 20, 7}, {"c1", "j", 2000, 80, 3}, {"c2", "i", 2000, 30, 11}});
    Panel b = oracle::make_panel(
        {{"c1", "i", 2000, 7, 20}, {"c1", "j", 2000, 3, 80}, {"c2", "i", 2000, 11, 30}});
    RcaSlice cites = rca(totals(a, 2000, Metric::citations), a);
    RcaSlice docs = rca(totals(b, 2000, Metric::documents), b);
    CHECK(cites.metric == Metric::citations);
    CHECK(docs.metric == Metric::documents);
    for (int c = 0; c < 2; ++c)
        for (int i = 0; i < 2; ++i) {
            CHECK(cites.defined(c, i) == docs.defined(c, i));
            if (cites.defined(c, i)) CHECK(bit_equal(cites.values(c, i), docs.values(c, i)));
        }
}

TEST_CASE("world-share weighted index sums to one per publishing country") {
    oracle::Rng rng(20240811);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<oracle::Cell> cells;
        const int C = 3 + static_cast<int>(rng.uniform() * 4);
        const int D = 4 + static_cast<int>(rng.uniform() * 6);
        for (int c = 0; c < C; ++c)
            for (int d = 0; d < D; ++d) {
                const double u = rng.uniform();
                const double docs = u < 0.25 ? 0.0 : std::floor(u * 400.0);
                cells.push_back({"country" + std::to_string(c),
                                 "disc" + std::to_string(d), 2010, docs, docs});
            }
        Panel panel = oracle::make_panel(cells);
        Totals t = totals(panel, 2010, Metric::documents);
        if (t.world_total <= 0.0) continue;
        RcaSlice slice = rca(t, panel);
        for (int c = 0; c < C; ++c) {
            if (t.country_totals(c) <= 0.0) continue;
            double share_sum = 0.0;
            for (int d = 0; d < D; ++d) {
                if (!slice.defined(c, d)) continue;
                share_sum += slice.values(c, d) * (t.discipline_totals(d) / t.world_total);
            }
            CHECK(share_sum == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("totals must come from the same panel") {
    Panel a = two_by_two(20, 80, 30, 70);
    Panel other = oracle::make_panel({{"x", "y", 2000, 5, 5}});
    Totals foreign = totals(other, 2000, Metric::documents);
    CHECK_THROWS_AS(rca(foreign, a), Error);
    try {
        rca(foreign, a);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InconsistentInputs);
    }

    Totals stale = totals(a, 2000, Metric::documents);
    stale.year = 1980;
    try {
        rca(stale, a);
        FAIL("expected an out-of-range year to be rejected");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InconsistentInputs);
    }
}
