#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "randns/checkpoint.hpp"
#include "randns/datum.hpp"
#include "randns/errors.hpp"
#include "randns/fft.hpp"
#include "randns/grid.hpp"
#include "randns/rng.hpp"
#include "randns/spectral.hpp"

using namespace randns;

TEST(GridSpec, Validation) {
    EXPECT_NO_THROW(GridSpec(2, 1).validate());
    EXPECT_NO_THROW(GridSpec(3, 4).validate());
    EXPECT_THROW(GridSpec(1, 4).validate(), std::invalid_argument);
    EXPECT_THROW(GridSpec(4, 4).validate(), std::invalid_argument);
    EXPECT_THROW(GridSpec(2, 0).validate(), std::invalid_argument);
    EXPECT_THROW(GridSpec(2, 4, 0.5).validate(), std::invalid_argument);
}

TEST(GridSpec, EvaluationGridsAreLargeEnough) {
    for (int M = 1; M <= 40; ++M) {
        GridSpec g(2, M);
        EXPECT_GE(g.product_points(), 3 * M + 2);
        for (int p : {2, 4, 6, 8}) EXPECT_GE(g.lp_points(p), p * M + 2);
        EXPECT_GE(g.sup_points(), 4 * (2 * M + 1));
        EXPECT_EQ(g.product_points() % 2, 0);
    }
}

TEST(GridSpec, FftFriendlySize) {
    EXPECT_EQ(fft_friendly_size(1), 2);
    EXPECT_EQ(fft_friendly_size(11), 12);
    EXPECT_EQ(fft_friendly_size(22), 24);
    EXPECT_EQ(fft_friendly_size(98), 98);
    for (int n = 2; n < 500; ++n) {
        int m = fft_friendly_size(n);
        EXPECT_GE(m, n);
        EXPECT_EQ(m % 2, 0);
        for (int p : {2, 3, 5, 7}) {
            while (m % p == 0) m /= p;
        }
        EXPECT_EQ(m, 1);
    }
}

TEST(Lattice, OrderMirrorAndCanonical) {
    for (int d : {2, 3}) {
        const Lattice& lat = lattice(GridSpec(d, 3));
        ASSERT_EQ(lat.size(), static_cast<std::size_t>(std::pow(7, d)));
        EXPECT_EQ(lat.n.front()[0], -3);
        EXPECT_EQ(lat.n.back()[0], 3);
        for (int j = 0; j < d; ++j) EXPECT_EQ(lat.n[lat.center][j], 0);
        std::size_t canonical = 0;
        for (std::size_t i = 0; i < lat.size(); ++i) {
            const auto& n = lat.n[i];
            const auto& m = lat.n[lat.mirror(i)];
            for (int j = 0; j < d; ++j) EXPECT_EQ(m[j], -n[j]);
            EXPECT_EQ(lat.index_of(n), i);
            if (lat.canonical(i)) ++canonical;
            if (i != lat.center) EXPECT_NE(lat.canonical(i), lat.canonical(lat.mirror(i)));
            double n2 = 0;
            for (int j = 0; j < d; ++j) n2 += n[j] * n[j];
            EXPECT_EQ(lat.norm2[i], n2);
        }
        EXPECT_EQ(canonical, (lat.size() + 1) / 2);
    }
}

TEST(Lattice, SiteCodeIndependentOfM) {
    std::set<std::uint64_t> codes;
    const Lattice& a = lattice(GridSpec(2, 4));
    const Lattice& b = lattice(GridSpec(2, 7));
    for (std::size_t i = 0; i < a.size(); ++i) {
        codes.insert(site_code(a.n[i], 2));
        EXPECT_EQ(site_code(a.n[i], 2), site_code(b.n[b.index_of(a.n[i])], 2));
    }
    EXPECT_EQ(codes.size(), a.size());
}

TEST(Field, ArithmeticAndGridMismatch) {
    GridSpec g(2, 3);
    std::mt19937_64 rng(1);
    SpectralField a = oracle::random_field(g, rng), b = oracle::random_field(g, rng);
    SpectralField c = a + b;
    c -= b;
    EXPECT_LT(oracle::rel_diff(c, a), 1e-15);
    SpectralField d = a;
    d.axpy(2.0, b);
    EXPECT_LT(oracle::rel_diff(d, a + 2.0 * b), 1e-15);
    EXPECT_THROW(a + SpectralField(GridSpec(2, 4)), GridMismatch);
    EXPECT_THROW(inner(a, SpectralField(GridSpec(3, 3))), GridMismatch);
}

TEST(Field, Defects) {
    GridSpec g(2, 4);
    std::mt19937_64 rng(2);
    SpectralField f = oracle::random_field(g, rng);
    EXPECT_EQ(f.hermitian_defect(), 0.0);
    EXPECT_EQ(f.mean_defect(), 0.0);
    EXPECT_GT(f.divergence_defect(), 0.1);
    const Lattice& lat = lattice(g);
    f.at(0, lat.center + 1) += cplx(0, 1e-3);
    EXPECT_NEAR(f.hermitian_defect(), 1e-3, 1e-12);
    f.at(1, lat.center) = 0.5;
    EXPECT_EQ(f.mean_defect(), 0.5);
    EXPECT_LT(leray_project(oracle::random_field(g, rng)).divergence_defect(), 1e-14);
}

TEST(Transform, SynthesizeMatchesDirectEvaluation) {
    for (int d : {2, 3}) {
        GridSpec g(d, 3);
        std::mt19937_64 rng(3 + d);
        SpectralField f = oracle::random_field(g, rng);
        const int N = 10;
        PhysicalGrid pg(d, N);
        std::vector<double> vals(pg.size()), dvals(pg.size());
        const Lattice& lat = lattice(g);
        pg.synthesize(f.component(1), lat, vals);
        pg.synthesize(f.component(1), lat, dvals, 0);
        for (std::size_t p = 0; p < pg.size(); p += 37) {
            double x[3] = {0, 0, 0};
            std::size_t r = p;
            for (int j = d - 1; j >= 0; --j) {
                x[j] = 2 * M_PI * static_cast<double>(r % N) / N;
                r /= N;
            }
            EXPECT_NEAR(vals[p], oracle::evaluate(f, x)[1], 1e-12);
        }
        SpectralField back(g);
        pg.analyze(vals, lat, back.component(1));
        for (std::size_t i = 0; i < lat.size(); ++i) {
            EXPECT_LT(std::abs(back.at(1, i) - f.at(1, i)), 1e-13);
        }
        SpectralField dback(g);
        pg.analyze(dvals, lat, dback.component(1));
        for (std::size_t i = 0; i < lat.size(); ++i) {
            const cplx expect = cplx(0, lat.n[i][0]) * f.at(1, i);
            EXPECT_LT(std::abs(dback.at(1, i) - expect), 1e-12);
        }
        EXPECT_EQ(dback.hermitian_defect(), 0.0);
    }
}

TEST(Checkpoint, RoundTripBitExact) {
    for (int d : {2, 3}) {
        GridSpec g(d, 3);
        std::mt19937_64 rng(5);
        SpectralField f = oracle::random_divfree(g, rng);
        std::stringstream ss;
        write_checkpoint(ss, f);
        const std::string bytes = ss.str();
        EXPECT_EQ(bytes.substr(0, 4), "SNSF");
        EXPECT_EQ(bytes.size(), 4 + 16 + f.coeffs().size() * 16);
        SpectralField g2 = read_checkpoint(ss);
        EXPECT_TRUE(g2 == f);
        EXPECT_TRUE(g2.divergence_free());
    }
}

TEST(Checkpoint, RejectsCorruptInput) {
    SpectralField f = taylor_green(GridSpec(2, 2));
    std::stringstream ss;
    write_checkpoint(ss, f);
    std::string bytes = ss.str();
    {
        std::stringstream bad(std::string("XXXX") + bytes.substr(4));
        EXPECT_THROW(read_checkpoint(bad), std::runtime_error);
    }
    {
        std::stringstream bad(bytes.substr(0, bytes.size() - 5));
        EXPECT_THROW(read_checkpoint(bad), std::runtime_error);
    }
    {
        std::string v = bytes;
        v[4] = 9;
        std::stringstream bad(v);
        EXPECT_THROW(read_checkpoint(bad), std::runtime_error);
    }
}

TEST(Philox, KnownAnswers) {
    Philox4x32 zero(0);
    auto a = zero({0, 0, 0, 0});
    EXPECT_EQ(a[0], 0x6627e8d5u);
    EXPECT_EQ(a[1], 0xe169c58du);
    EXPECT_EQ(a[2], 0xbc57ac4cu);
    EXPECT_EQ(a[3], 0x9b00dbd8u);
    Philox4x32 ones(~0ull);
    auto b = ones({~0u, ~0u, ~0u, ~0u});
    EXPECT_EQ(b[0], 0x408f276du);
    EXPECT_EQ(b[1], 0x41c83b0eu);
    EXPECT_EQ(b[2], 0xa20bc7c6u);
    EXPECT_EQ(b[3], 0x6d5451fdu);
}

TEST(Philox, StreamsSeparate) {
    auto a = draw_words(7, Stream::Multiplier, 0, 11);
    EXPECT_EQ(a, draw_words(7, Stream::Multiplier, 0, 11));
    EXPECT_NE(a, draw_words(7, Stream::Datum, 0, 11));
    EXPECT_NE(a, draw_words(7, Stream::Multiplier, 1, 11));
    EXPECT_NE(a, draw_words(7, Stream::Multiplier, 0, 12));
    EXPECT_NE(a, draw_words(8, Stream::Multiplier, 0, 11));
}

TEST(Datum, ExactFieldsAreDivergenceFree) {
    SpectralField tg = taylor_green(GridSpec(2, 4));
    EXPECT_LT(tg.divergence_defect(), 1e-14);
    EXPECT_NEAR(sobolev_norm(tg, 0.0), std::sqrt(0.5), 1e-14);
    SpectralField abc = abc_flow(GridSpec(3, 3));
    EXPECT_LT(abc.divergence_defect(), 1e-14);
    EXPECT_NEAR(sobolev_norm(abc, 0.0), std::sqrt(3.0), 1e-14);
    // curl u = u, so -Δu = u: every populated mode has |n| = 1
    const Lattice& lat = lattice(abc.grid());
    for (std::size_t i = 0; i < lat.size(); ++i) {
        for (int c = 0; c < 3; ++c) {
            if (std::abs(abc.at(c, i)) > 1e-12) EXPECT_EQ(lat.norm2[i], 1.0);
        }
    }
}

TEST(Datum, RoughDatumNestedAcrossM) {
    const double decay = rough_decay(2, 0.3);
    SpectralField a = rough_datum(GridSpec(2, 6), decay, 42);
    SpectralField b = rough_datum(GridSpec(2, 10), decay, 42);
    EXPECT_LT(a.divergence_defect(), 1e-13);
    EXPECT_EQ(a.hermitian_defect(), 0.0);
    EXPECT_EQ(a.mean_defect(), 0.0);
    const Lattice& la = lattice(a.grid());
    const Lattice& lb = lattice(b.grid());
    for (std::size_t i = 0; i < la.size(); ++i) {
        const std::size_t j = lb.index_of(la.n[i]);
        for (int c = 0; c < 2; ++c) EXPECT_EQ(a.at(c, i), b.at(c, j));
    }
    // H^{-alpha} norm converges while L^2 keeps growing with M
    SpectralField c = rough_datum(GridSpec(2, 40), decay, 42);
    EXPECT_GT(sobolev_norm(c, 0.0), 1.2 * sobolev_norm(a, 0.0));
    EXPECT_LT(sobolev_norm(c, -0.3) / sobolev_norm(a, -0.3), sobolev_norm(c, 0.0) / sobolev_norm(a, 0.0));
}
