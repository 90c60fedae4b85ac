#include <doctest.h>

#include <framelab/constructors.hpp>
#include <framelab/measures.hpp>

#include "test_util.hpp"

using namespace framelab;
using testutil::mb_frame;

namespace {
const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);
}

TEST_CASE("total coherence") {
    SUBCASE("ONB-padded frame has TC = 0") {
        CHECK(total_coherence(onb_padded(5, 3)) <= 1e-15);
    }
    SUBCASE("MB frame: 6 ordered pairs x 1/3 = 2 = sqrt(N(M-N)(M-1))") {
        CHECK(total_coherence(mb_frame()) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(std::sqrt(2.0 * 1.0 * 2.0) == doctest::Approx(2.0));
    }
    SUBCASE("simplex ETF (4,3): 12 pairs x 1/4 = 3 = sqrt(3*1*3)") {
        CHECK(total_coherence(simplex_etf(3)) == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("matches the raw-loop oracle on random frames") {
        for (std::uint64_t seed : {3u, 4u}) {
            const Frame f = random_parseval(6, 3, ScalarField::Complex, seed);
            CHECK(total_coherence(f) ==
                  doctest::Approx(testutil::naive_tc(f)).epsilon(1e-12));
        }
    }
}

TEST_CASE("equiangular constants") {
    SUBCASE("(3,2): c = 1/3") {
        const auto c = equiangular_constants(3, 2, {1, 2});
        CHECK(c.c_mn == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
        CHECK(c.tc_upper == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(c.tc_lower == doctest::Approx(2.0));
    }
    SUBCASE("(7,3): c = sqrt2/7") {
        CHECK(equiangular_constants(7, 3, {}).c_mn ==
              doctest::Approx(kSqrt2 / 7.0).epsilon(1e-15));
    }
    SUBCASE("(3,2,k=2): c_mnk = sqrt(1/3)") {
        const auto c = equiangular_constants(3, 2, {2});
        REQUIRE(c.per_k.at(2).c_mnk.has_value());
        CHECK(*c.per_k.at(2).c_mnk ==
              doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-15));
    }
    SUBCASE("k = 1 constant is sqrt(N/M)") {
        const auto c = equiangular_constants(5, 3, {1});
        CHECK(*c.per_k.at(1).c_mnk == doctest::Approx(std::sqrt(0.6)).epsilon(1e-15));
    }
    SUBCASE("v2^2 = N^2/M^2 - c_mn^2 links the k=2 constant to c_mn") {
        const auto c = equiangular_constants(7, 3, {2});
        const double v2 = *c.per_k.at(2).c_mnk;
        CHECK(v2 * v2 == doctest::Approx(9.0 / 49.0 - c.c_mn * c.c_mn).epsilon(1e-13));
    }
    SUBCASE("per-k bounds and identities") {
        const auto c = equiangular_constants(6, 3, {2, 3, 4});
        CHECK(*c.per_k.at(2).vk_upper ==
              doctest::Approx(std::sqrt(15.0 * 3.0)).epsilon(1e-14));
        CHECK(*c.per_k.at(2).vk_lower == doctest::Approx(3.0));
        CHECK_FALSE(c.per_k.at(2).cvk_upper.has_value());
        CHECK_FALSE(c.per_k.at(4).c_mnk.has_value());
        REQUIRE(c.per_k.at(4).cvk_upper.has_value());
        CHECK(*c.per_k.at(4).cvk_upper ==
              doctest::Approx(std::sqrt(15.0 * 3.0)).epsilon(1e-14));
        CHECK(c.per_k.at(3).ne_sum_sq == doctest::Approx(3.0 * 10.0));
    }
    SUBCASE("square shapes are rejected") {
        CHECK_THROWS_AS(equiangular_constants(3, 3, {}), InvalidShape);
    }
}

TEST_CASE("equiangular distance") {
    SUBCASE("MB frame is equiangular: EAD = 0") {
        CHECK(equiangular_distance(mb_frame()) <= 1e-14);
    }
    SUBCASE("ONB-padded (5,3): norm sum 1.2 + angle sum 1.2 = 2.4") {
        CHECK(equiangular_distance(onb_padded(5, 3)) ==
              doctest::Approx(2.4).epsilon(1e-12));
    }
    SUBCASE("closed form on random Parseval frames") {
        for (std::uint64_t seed : {7u, 8u, 9u}) {
            const Frame f = random_parseval(6, 3, ScalarField::Complex, seed);
            const double c = welch_constant(6, 3);
            const double closed =
                3.0 - 9.0 / 6.0 + 6.0 * 5.0 * c * c - 2.0 * c * total_coherence(f);
            CHECK(std::abs(equiangular_distance(f) - closed) <= 1e-8);
        }
    }
    SUBCASE("square shapes are rejected") {
        CHECK_THROWS_AS(equiangular_distance(Frame::real(Eigen::MatrixXd::Identity(2, 2))),
                        InvalidShape);
    }
}

TEST_CASE("gram variance") {
    SUBCASE("MB frame: v = 0, c_phi = 1/3") {
        const auto gv = gram_variance(mb_frame());
        CHECK(gv.v <= 1e-14);
        CHECK(gv.c_phi == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("ONB-padded (5,3): v = N(M-N)/M = 1.2, c_phi = 0") {
        const auto gv = gram_variance(onb_padded(5, 3));
        CHECK(gv.v == doctest::Approx(1.2).epsilon(1e-12));
        CHECK(gv.c_phi <= 1e-15);
    }
    SUBCASE("identity v = N(M-N)/M - TC^2/(M(M-1)) on random Parseval frames") {
        for (std::uint64_t seed : {21u, 22u, 23u}) {
            const Frame f = random_parseval(7, 3, ScalarField::Real, seed);
            const double tc = total_coherence(f);
            const double closed = 3.0 * 4.0 / 7.0 - tc * tc / (7.0 * 6.0);
            CHECK(std::abs(gram_variance(f).v - closed) <= 1e-8);
        }
    }
}

TEST_CASE("angular deviation") {
    SUBCASE("MB frame: 0") {
        CHECK(angular_deviation(mb_frame()) <= 1e-14);
    }
    SUBCASE("ONB-padded (5,3): 20 c^2 = 1.2") {
        CHECK(angular_deviation(onb_padded(5, 3)) == doctest::Approx(1.2).epsilon(1e-12));
    }
    SUBCASE("AD = EAD exactly on equal-norm frames") {
        const Frame f = random_equal_norm(6, 3, ScalarField::Complex, 31);
        CHECK(std::abs(angular_deviation(f) - equiangular_distance(f)) <= 1e-12);
    }
}

TEST_CASE("volume") {
    SUBCASE("every MB pair has volume sqrt(1/3)") {
        for (const auto& s : all_subsets(3, 2)) {
            CHECK(volume(mb_frame(), s) ==
                  doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-12));
        }
    }
    SUBCASE("collinear pair has volume 0") {
        Eigen::MatrixXd entries(2, 2);
        entries << 1.0, 2.0,
                   1.0, 2.0;
        CHECK(volume(Frame::real(entries), SubsetSelector(2, {1, 2})) <= 1e-12);
    }
    SUBCASE("optimal (4,2) frame, K = {1,2} -> sqrt2/4") {
        CHECK(volume(optimal_4_2(), SubsetSelector(4, {1, 2})) ==
              doctest::Approx(kSqrt2 / 4.0).epsilon(1e-14));
    }
    SUBCASE("|K| > N is rejected") {
        CHECK_THROWS_AS(volume(mb_frame(), SubsetSelector(3, {1, 2, 3})), InvalidShape);
    }
    SUBCASE("agrees with the Laplace determinant oracle") {
        const Frame f = random_parseval(5, 3, ScalarField::Complex, 17);
        for (const auto& s : all_subsets(5, 3)) {
            const Matrix sub = columns(f.entries(), s);
            const Matrix g = sub.adjoint() * sub;
            const double oracle =
                std::sqrt(std::max(testutil::laplace_det(testutil::to_rows(g)).real(), 0.0));
            CHECK(volume(f, s) == doctest::Approx(oracle).epsilon(1e-10));
        }
    }
}

TEST_CASE("total volume and sum of squares") {
    SUBCASE("MB frame, k=2: V2 = sqrt3, sum of squares = C(2,2) = 1") {
        CHECK(total_volume(mb_frame(), 2) == doctest::Approx(kSqrt3).epsilon(1e-12));
        CHECK(sum_sq_volume(mb_frame(), 2) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("optimal (4,2), k=2: V2 = 1 + sqrt2") {
        CHECK(total_volume(optimal_4_2(), 2) ==
              doctest::Approx(1.0 + kSqrt2).epsilon(1e-14));
    }
    SUBCASE("ONB-padded (5,3), k=2: V2 = C(3,2) = 3 (the lower bound)") {
        CHECK(total_volume(onb_padded(5, 3), 2) == doctest::Approx(3.0).epsilon(1e-14));
    }
}

TEST_CASE("volume variance") {
    SUBCASE("MB frame: all pair volumes equal, variance 0") {
        CHECK(volume_variance(mb_frame(), 2) <= 1e-14);
    }
    SUBCASE("ONB-padded (5,3), k=2: 3 - 9/C(5,2) = 2.1") {
        CHECK(volume_variance(onb_padded(5, 3), 2) ==
              doctest::Approx(2.1).epsilon(1e-12));
    }
    SUBCASE("optimal (4,2), k=2: 1 - (1+sqrt2)^2/6") {
        CHECK(volume_variance(optimal_4_2(), 2) ==
              doctest::Approx(1.0 - (1.0 + kSqrt2) * (1.0 + kSqrt2) / 6.0)
                  .epsilon(1e-12));
    }
    SUBCASE("Parseval identity Var_k = C(N,k) - V_k^2/C(M,k)") {
        for (std::uint64_t seed : {41u, 42u}) {
            const Frame f = random_parseval(6, 3, ScalarField::Real, seed);
            const double vk = total_volume(f, 2);
            CHECK(std::abs(volume_variance(f, 2) - (3.0 - vk * vk / 15.0)) <= 1e-8);
        }
    }
}

TEST_CASE("complementary volume") {
    SUBCASE("full Parseval frame: cv_M = 1") {
        const Frame f = simplex_etf(3);
        CHECK(comp_volume(f, SubsetSelector(4, {1, 2, 3, 4})) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("square case k = N matches volume") {
        const SubsetSelector s(3, {1, 2});
        CHECK(comp_volume(mb_frame(), s) ==
              doctest::Approx(volume(mb_frame(), s)).epsilon(1e-12));
    }
    SUBCASE("optimal (4,2), k=3: Cauchy-Binet gives sum of cv^2 = C(2,1) = 2") {
        double sum_sq = 0.0;
        for (const auto& s : all_subsets(4, 3)) {
            const double cv = comp_volume(optimal_4_2(), s);
            sum_sq += cv * cv;
        }
        CHECK(sum_sq == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("|K| < N is rejected") {
        CHECK_THROWS_AS(comp_volume(onb_padded(5, 3), SubsetSelector(5, {1, 2})),
                        InvalidShape);
    }
}

TEST_CASE("nuclear energy") {
    SUBCASE("k=1 on an equal-norm frame: NE_1 = M sqrt(N/M)") {
        const Frame f = random_equal_norm(6, 3, ScalarField::Real, 51);
        CHECK(nuclear_energy(f, 1) ==
              doctest::Approx(6.0 * std::sqrt(0.5)).epsilon(1e-12));
    }
    SUBCASE("k=M on a Parseval frame: NE_M = N") {
        const Frame f = random_parseval(5, 2, ScalarField::Complex, 52);
        CHECK(nuclear_energy(f, 5) == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("MB frame, k=2: each pair has nuclear norm 1 + 1/sqrt3") {
        for (const auto& s : all_subsets(3, 2)) {
            const double nn = singular_values(columns(mb_frame().entries(), s)).sum();
            CHECK(nn == doctest::Approx(1.0 + 1.0 / kSqrt3).epsilon(1e-12));
            CHECK(nn == doctest::Approx(std::sqrt(4.0 / 3.0 + 2.0 * std::sqrt(1.0 / 3.0)))
                            .epsilon(1e-12));
        }
        CHECK(nuclear_energy(mb_frame(), 2) ==
              doctest::Approx(3.0 + kSqrt3).epsilon(1e-12));
    }
}

TEST_CASE("nuclear variance") {
    SUBCASE("MB frame, k=2: NVar = 2 - sqrt3 with mean sigma (3+sqrt3)/6") {
        const auto nv = nuclear_variance(mb_frame(), 2);
        CHECK(nv.n_phi_k == doctest::Approx((3.0 + kSqrt3) / 6.0).epsilon(1e-12));
        CHECK(nv.d_phi_k == doctest::Approx((3.0 + kSqrt3) / 3.0).epsilon(1e-12));
        CHECK(nv.nvar == doctest::Approx(2.0 - kSqrt3).epsilon(1e-10));
    }
    SUBCASE("Parseval identity NVar = N C(M-1,k-1) - NE^2/(min(N,k) C(M,k))") {
        for (std::uint64_t seed : {61u, 62u}) {
            const Frame f = random_parseval(6, 3, ScalarField::Complex, seed);
            for (int k : {1, 2, 3, 4}) {
                const double ne = nuclear_energy(f, k);
                const double expected =
                    3.0 * binomial_d(5, k - 1) -
                    ne * ne / (std::min(3, k) * binomial_d(6, k));
                CHECK(std::abs(nuclear_variance(f, k).nvar - expected) <= 1e-8);
            }
        }
    }
}

TEST_CASE("sum of squared singular values") {
    SUBCASE("Parseval: N C(M-1,k-1)") {
        const Frame f = random_parseval(6, 3, ScalarField::Real, 71);
        for (int k = 1; k <= 5; ++k) {
            CHECK(std::abs(sum_sq_singular(f, k) - 3.0 * binomial_d(5, k - 1)) <= 1e-9);
        }
    }
    SUBCASE("equal norm: (kN/M) C(M,k)") {
        const Frame f = random_equal_norm(6, 3, ScalarField::Complex, 72);
        for (int k = 1; k <= 5; ++k) {
            CHECK(std::abs(sum_sq_singular(f, k) - 0.5 * k * binomial_d(6, k)) <= 1e-9);
        }
    }
}

TEST_CASE("spark") {
    SUBCASE("orthonormal basis of R^3: no dependent subset, spark = M+1 = 4") {
        CHECK(spark(Frame::real(Eigen::MatrixXd::Identity(3, 3))) == 4);
    }
    SUBCASE("zero column gives spark 1") {
        Eigen::MatrixXd entries(2, 3);
        entries << 1, 0, 0,
                   0, 1, 0;
        CHECK(spark(Frame::real(entries)) == 1);
    }
    SUBCASE("MB frame: any 2 independent, all 3 dependent -> 3") {
        CHECK(spark(mb_frame()) == 3);
    }
    SUBCASE("cap") {
        CHECK_THROWS_AS(spark(random_equal_norm(25, 3, ScalarField::Real, 1)),
                        CapExceeded);
    }
}

TEST_CASE("plucker") {
    SUBCASE("optimal (4,2) coordinates in lexicographic order") {
        const auto coords = plucker(optimal_4_2());
        REQUIRE(coords.size() == 6);
        const double q = kSqrt2 / 4.0;
        const std::vector<double> expected{q, 0.5, q, q, 0.5, q};
        for (std::size_t i = 0; i < 6; ++i) {
            CHECK(coords[i].real() == doctest::Approx(expected[i]).epsilon(1e-14));
            CHECK(std::abs(coords[i].imag()) <= 1e-15);
        }
        CHECK(std::abs(plucker_relation_42(coords)) <= 1e-15);
    }
    SUBCASE("matches the Laplace determinant oracle") {
        const Frame f = random_parseval(5, 2, ScalarField::Complex, 81);
        const auto coords = plucker(f);
        std::size_t idx = 0;
        for (const auto& s : all_subsets(5, 2)) {
            const Complex oracle =
                testutil::laplace_det(testutil::to_rows(columns(f.entries(), s)));
            CHECK(std::abs(coords[idx] - oracle) <= 1e-12);
            ++idx;
        }
    }
    SUBCASE("unitary row action preserves coordinate magnitudes") {
        const Frame f = random_parseval(5, 2, ScalarField::Complex, 82);
        const Matrix u = testutil::random_unitary(2, 83);
        const Frame g(ScalarField::Complex, u * f.entries());
        const auto a = plucker(f);
        const auto b = plucker(g);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(std::abs(std::abs(a[i]) - std::abs(b[i])) <= 1e-10);
        }
    }
    SUBCASE("row scaling multiplies coordinates by det(A)") {
        const Frame f = random_parseval(4, 2, ScalarField::Complex, 84);
        GaussianSampler gauss(85);
        Matrix a(2, 2);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) a(i, j) = gauss.next_complex();
        }
        const Complex det_a = a.determinant();
        const auto before = plucker(f);
        const auto after = plucker(Frame(ScalarField::Complex, a * f.entries()));
        for (std::size_t i = 0; i < before.size(); ++i) {
            CHECK(std::abs(after[i] - det_a * before[i]) <= 1e-12);
        }
    }
    SUBCASE("wrong coordinate count is rejected") {
        CHECK_THROWS_AS(plucker_relation_42({1.0, 2.0}), InvalidShape);
    }
}

TEST_CASE("coherence") {
    SUBCASE("orthonormal basis: 0") {
        CHECK(coherence(Frame::real(Eigen::MatrixXd::Identity(3, 3))) <= 1e-15);
    }
    SUBCASE("simplex ETF (4,3): 1/3, attaining the Welch bound sqrt(1/9)") {
        const double c = coherence(simplex_etf(3));
        CHECK(c == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        CHECK(c == doctest::Approx(std::sqrt((4.0 - 3.0) / (3.0 * 3.0))).epsilon(1e-12));
    }
    SUBCASE("harmonic ETF (7,3): sqrt(2/9)") {
        CHECK(coherence(harmonic_frame(7, {1, 2, 4})) ==
              doctest::Approx(std::sqrt(2.0 / 9.0)).epsilon(1e-12));
    }
    SUBCASE("zero column raises") {
        CHECK_THROWS_AS(coherence(onb_padded(5, 3)), ZeroVector);
    }
}

TEST_CASE("bound and identity properties on random frames") {
    SUBCASE("sum of squared k-volumes equals C(N,k) on Parseval frames") {
        for (int m : {5, 8, 10}) {
            for (int n : {2, 3}) {
                const Frame f = random_parseval(m, n, ScalarField::Complex,
                                                static_cast<std::uint64_t>(m * 100 + n));
                for (int k = 1; k <= n; ++k) {
                    CHECK(std::abs(sum_sq_volume(f, k) - binomial_d(n, k)) <= 1e-9);
                }
            }
        }
    }
    SUBCASE("TC bounds on Parseval frames") {
        for (std::uint64_t seed : {91u, 92u, 93u}) {
            const Frame f = random_parseval(6, 3, ScalarField::Real, seed);
            CHECK(total_coherence(f) <= std::sqrt(3.0 * 3.0 * 5.0) + 1e-9);
        }
    }
    SUBCASE("volume bounds C(N,k) <= V_k <= sqrt(C(M,k) C(N,k))") {
        for (std::uint64_t seed : {94u, 95u}) {
            const Frame f = random_parseval(6, 3, ScalarField::Complex, seed);
            for (int k = 1; k <= 3; ++k) {
                const double vk = total_volume(f, k);
                CHECK(vk >= binomial_d(3, k) - 1e-9);
                CHECK(vk <= std::sqrt(binomial_d(6, k) * binomial_d(3, k)) + 1e-9);
            }
        }
    }
    SUBCASE("equal-norm frames: sum of squared volumes strictly below C(N,k)") {
        for (std::uint64_t seed : {96u, 97u}) {
            const Frame f = random_equal_norm(6, 3, ScalarField::Real, seed);
            for (int k = 2; k <= 3; ++k) {
                CHECK(binomial_d(3, k) - sum_sq_volume(f, k) > 1e-12);
            }
        }
    }
    SUBCASE("volwelch: min volume below the equal-volume constant") {
        for (std::uint64_t seed : {98u, 99u}) {
            const Frame f = random_equal_norm(6, 3, ScalarField::Complex, seed);
            for (int k = 1; k <= 3; ++k) {
                CHECK(min_volume(f, k) <= equal_volume_constant(6, 3, k) + 1e-9);
            }
        }
    }
    SUBCASE("CV bound on equal-norm frames") {
        for (std::uint64_t seed : {100u, 101u}) {
            const Frame f = random_equal_norm(6, 3, ScalarField::Real, seed);
            for (int k = 3; k <= 5; ++k) {
                CHECK(total_comp_volume(f, k) <=
                      std::sqrt(binomial_d(6, k) * binomial_d(3, 6 - k)) + 1e-9);
            }
        }
    }
}
