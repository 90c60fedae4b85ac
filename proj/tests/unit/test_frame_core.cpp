#include <doctest.h>

#include <framelab/combinatorics.hpp>
#include <framelab/constructors.hpp>
#include <framelab/frame.hpp>

#include "test_util.hpp"

using namespace framelab;
using testutil::mb_frame;

TEST_CASE("gram of identity frame is identity") {
    const Frame id = Frame::real(Eigen::MatrixXd::Identity(2, 2));
    const GramMatrix g = gram(id);
    CHECK((g.entries() - Matrix::Identity(2, 2)).norm() == doctest::Approx(0.0));
}

TEST_CASE("gram of Mercedes-Benz frame") {
    const GramMatrix g = gram(mb_frame());
    for (int i = 0; i < 3; ++i) {
        CHECK(g.entries()(i, i).real() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            CHECK(std::abs(g.entries()(i, j)) ==
                  doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("gram of the optimal (4,2) frame has diagonal 1/2") {
    const GramMatrix g = gram(optimal_4_2());
    for (int i = 0; i < 4; ++i) {
        CHECK(g.entries()(i, i).real() == doctest::Approx(0.5).epsilon(1e-14));
    }
}

TEST_CASE("partial_frame selection") {
    const Frame mb = mb_frame();
    SUBCASE("full selector returns the frame itself") {
        const Frame full = partial_frame(mb, SubsetSelector(3, {1, 2, 3}));
        CHECK((full.entries() - mb.entries()).norm() == 0.0);
    }
    SUBCASE("first two columns") {
        const Frame sub = partial_frame(mb, SubsetSelector(3, {1, 2}));
        CHECK(sub.n_vecs() == 2);
        CHECK((sub.entries().col(0) - mb.entries().col(0)).norm() == 0.0);
        CHECK((sub.entries().col(1) - mb.entries().col(1)).norm() == 0.0);
    }
    SUBCASE("single column K = {2} is (-sqrt6/6, sqrt2/2)") {
        const Frame sub = partial_frame(mb, SubsetSelector(3, {2}));
        CHECK(sub.entries()(0, 0).real() ==
              doctest::Approx(-std::sqrt(6.0) / 6.0).epsilon(1e-14));
        CHECK(sub.entries()(1, 0).real() ==
              doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
    }
    SUBCASE("selector over the wrong ground set is rejected") {
        CHECK_THROWS_AS(partial_frame(mb, SubsetSelector(4, {1, 2})), InvalidShape);
    }
    SUBCASE("out-of-range index is rejected at selector construction") {
        CHECK_THROWS_AS(SubsetSelector(3, {1, 4}), IndexOutOfRange);
    }
}

TEST_CASE("singular values") {
    SUBCASE("identity") {
        const Eigen::VectorXd sv = singular_values(Frame::real(Eigen::MatrixXd::Identity(2, 2)));
        CHECK(sv(0) == doctest::Approx(1.0));
        CHECK(sv(1) == doctest::Approx(1.0));
    }
    SUBCASE("full Parseval frame has N unit singular values") {
        const Frame f = random_parseval(6, 3, ScalarField::Complex, 42);
        const Eigen::VectorXd sv = singular_values(f);
        REQUIRE(sv.size() == 3);
        for (int i = 0; i < 3; ++i) {
            CHECK(sv(i) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("MB pair: sigma1^2 + sigma2^2 = 4/3 and sigma1 sigma2 = sqrt(1/3)") {
        const Frame pair = partial_frame(mb_frame(), SubsetSelector(3, {1, 2}));
        const Eigen::VectorXd sv = singular_values(pair);
        CHECK(sv(0) * sv(0) + sv(1) * sv(1) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
        CHECK(sv(0) * sv(1) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-12));
    }
}

TEST_CASE("singular values of partial frames match the eigenvalue route") {
    // dual route: Jacobi SVD of Phi_K vs sqrt of Hermitian eigenvalues of its Gram
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const Frame f = random_parseval(6, 3, ScalarField::Complex, seed);
        for (int k = 1; k <= 4; ++k) {
            for_each_subset(6, k, [&](const SubsetSelector& s) {
                const Matrix sub = columns(f.entries(), s);
                const Eigen::VectorXd sv = singular_values(sub);
                Eigen::SelfAdjointEigenSolver<Matrix> es(sub.adjoint() * sub);
                const Eigen::VectorXd evals = es.eigenvalues();
                for (int i = 0; i < sv.size(); ++i) {
                    const double from_eig =
                        std::sqrt(std::max(evals(sv.size() - 1 - i), 0.0));
                    CHECK(std::abs(sv(i) - from_eig) <= 1e-10);
                }
            });
        }
    }
}

TEST_CASE("Parseval frames have trace(gram) = N") {
    for (std::uint64_t seed : {5u, 6u}) {
        const Frame f = random_parseval(7, 4, ScalarField::Real, seed);
        CHECK(std::abs(gram_raw(f).trace().real() - 4.0) <= 1e-10);
    }
}

TEST_CASE("predicates") {
    SUBCASE("orthonormal basis of R^3") {
        const auto p = predicates(Frame::real(Eigen::MatrixXd::Identity(3, 3)));
        CHECK(p.is_frame);
        CHECK(p.is_parseval);
        CHECK(p.is_equal_norm);
        CHECK_FALSE(p.is_equiangular); // N = M, no angle constant defined
    }
    SUBCASE("MB frame is equiangular") {
        const auto p = predicates(mb_frame());
        CHECK(p.is_parseval);
        CHECK(p.is_equal_norm);
        CHECK(p.is_equiangular);
        CHECK(p.residuals.at("equiangular") <= 1e-12);
    }
    SUBCASE("raw Gaussian 2x5 is almost surely not Parseval") {
        GaussianSampler gauss(99);
        Eigen::MatrixXd raw(2, 5);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 5; ++j) raw(i, j) = gauss.next();
        }
        CHECK_FALSE(predicates(Frame::real(raw)).is_parseval);
    }
    SUBCASE("rank-deficient set is not a frame") {
        Eigen::MatrixXd flat(2, 3);
        flat << 1, 2, 3,
                0, 0, 0;
        CHECK_FALSE(predicates(Frame::real(flat)).is_frame);
    }
}

TEST_CASE("subset enumeration") {
    SUBCASE("(3,2) in lexicographic order") {
        const auto subs = all_subsets(3, 2);
        REQUIRE(subs.size() == 3);
        CHECK(subs[0].indices == std::vector<int>{1, 2});
        CHECK(subs[1].indices == std::vector<int>{1, 3});
        CHECK(subs[2].indices == std::vector<int>{2, 3});
    }
    SUBCASE("(4,2) yields 6 subsets") {
        CHECK(all_subsets(4, 2).size() == 6);
    }
    SUBCASE("(20,10) yields C(20,10) = 184756 subsets") {
        std::uint64_t count = 0;
        for_each_subset(20, 10, [&](const SubsetSelector&) { ++count; });
        CHECK(count == 184756);
    }
    SUBCASE("exhaustive coverage and distinctness") {
        for (int m = 2; m <= 12; m += 5) {
            for (int k = 1; k <= m; k += 2) {
                std::vector<std::vector<int>> seen;
                for_each_subset(m, k, [&](const SubsetSelector& s) {
                    seen.push_back(s.indices);
                });
                CHECK(seen.size() == testutil::pascal_binomial(m, k));
                std::sort(seen.begin(), seen.end());
                CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
            }
        }
    }
    SUBCASE("cap exceeded carries the subset count") {
        try {
            for_each_subset(20, 10, [](const SubsetSelector&) {}, 1000);
            FAIL("expected CapExceeded");
        } catch (const CapExceeded& e) {
            CHECK(e.count() == 184756);
        }
    }
    SUBCASE("invalid shapes") {
        CHECK_THROWS_AS(all_subsets(3, 0), InvalidShape);
        CHECK_THROWS_AS(all_subsets(3, 4), InvalidShape);
    }
    SUBCASE("complement") {
        CHECK(SubsetSelector(5, {2, 4}).complement() == std::vector<int>{1, 3, 5});
    }
}

TEST_CASE("binomial matches Pascal's triangle") {
    for (int n = 0; n <= 30; ++n) {
        for (int k = 0; k <= n; ++k) {
            CHECK(binomial(n, k) == testutil::pascal_binomial(n, k));
            CHECK(binomial_d(n, k) ==
                  doctest::Approx(static_cast<double>(testutil::pascal_binomial(n, k)))
                      .epsilon(1e-12));
        }
    }
}

TEST_CASE("inv_sqrt_psd") {
    SUBCASE("identity") {
        CHECK((inv_sqrt_psd(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)).norm() <=
              1e-14);
    }
    SUBCASE("diag(4,1) -> diag(1/2,1)") {
        Matrix a = Matrix::Zero(2, 2);
        a(0, 0) = 4.0;
        a(1, 1) = 1.0;
        const Matrix s = inv_sqrt_psd(a);
        CHECK(s(0, 0).real() == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(s(1, 1).real() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(s(0, 1)) <= 1e-14);
    }
    SUBCASE("2I -> I/sqrt2") {
        const Matrix s = inv_sqrt_psd(2.0 * Matrix::Identity(2, 2));
        CHECK(s(0, 0).real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    }
    SUBCASE("S A S = I on random conditioned PSD matrices") {
        for (std::uint64_t seed : {11u, 12u, 13u}) {
            // controlled spectrum, condition number <= 1e6
            const Matrix u = testutil::random_unitary(4, seed);
            Eigen::VectorXd evals(4);
            SplitMix64 rng(seed);
            for (int i = 0; i < 4; ++i) {
                evals(i) = std::pow(10.0, -6.0 * rng.next_unit());
            }
            const Matrix a = u * evals.cast<Complex>().asDiagonal() * u.adjoint();
            const Matrix s = inv_sqrt_psd((a + a.adjoint()) / 2.0);
            CHECK((s * ((a + a.adjoint()) / 2.0) * s - Matrix::Identity(4, 4)).norm() <=
                  1e-9);
        }
    }
    SUBCASE("singular input raises") {
        Matrix a = Matrix::Zero(2, 2);
        a(0, 0) = 1.0;
        CHECK_THROWS_AS(inv_sqrt_psd(a), SingularMatrix);
    }
}

TEST_CASE("frame validation") {
    SUBCASE("non-finite entries are rejected") {
        Eigen::MatrixXd bad(1, 2);
        bad << 1.0, std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(Frame::real(bad), ParseError);
    }
    SUBCASE("real frame with imaginary parts is rejected") {
        Matrix bad(1, 1);
        bad(0, 0) = Complex(1.0, 0.5);
        CHECK_THROWS_AS(Frame(ScalarField::Real, bad), InvalidShape);
    }
}
