#include "sympkit/definiteness.hpp"

#include "sympkit/linalg.hpp"
#include "support/random_systems.hpp"

#include <doctest.h>

using namespace sympkit;
using testkit::Rng;

namespace {

// Independent Gram assembly: propagate each basis column with transfer and
// accumulate the weighted pairings index by index.
Matrix brute_force_gram(const SymplecticSystem& sys, Complex lambda, IndexRange interval) {
    const int dim = sys.dim();
    std::vector<TrajectorySequence> columns;
    for (int j = 0; j < dim; ++j) {
        Matrix e = Matrix::Zero(dim, 1);
        e(j, 0) = 1.0;
        columns.push_back(transfer(sys, lambda, e, 0, sys.horizon()));
    }
    Matrix gram(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            gram(i, j) = semi_inner(sys, columns[static_cast<std::size_t>(i)],
                                    columns[static_cast<std::size_t>(j)], interval)(0, 0);
    return gram;
}

} // namespace

TEST_CASE("gram matrix of the free system on [0, 2]") {
    const SymplecticSystem sys = testkit::free_sturm_liouville(6);
    const GramMatrix gram = gram_phi(sys, Complex(0, 0), {0, 2});

    Matrix expected(2, 2);
    expected << 3.0, 3.0, 3.0, 5.0;  // sum of [[1, k], [k, k^2]] over k = 0, 1, 2
    CHECK(frob(gram.value - expected) <= 1e-13);
    CHECK(gram.rank == 2);
    CHECK(gram.kernel_basis.cols() == 0);

    const Matrix brute = brute_force_gram(sys, Complex(0, 0), {0, 2});
    CHECK(frob(gram.value - brute) <= 1e-13);

    SUBCASE("interval preconditions") {
        CHECK_THROWS_AS(gram_phi(sys, Complex(0, 0), {0, 7}), std::out_of_range);
        CHECK_THROWS_AS(gram_phi(sys, Complex(0, 0), {2, 4}, 0), std::invalid_argument);
    }
}

TEST_CASE("gram matrix of the non-definite example is (m + 1) diag(1, 0)") {
    const SymplecticSystem sys = testkit::non_operator_example(10);
    for (int m : {0, 3, 7}) {
        const GramMatrix gram = gram_phi(sys, Complex(0.4, 1.1), {0, m});
        Matrix expected = Matrix::Zero(2, 2);
        expected(0, 0) = static_cast<double>(m + 1);
        CHECK(frob(gram.value - expected) <= 1e-12 * (m + 1));
        CHECK(gram.rank == 1);
        REQUIRE(gram.kernel_basis.cols() == 1);
        CHECK(std::abs(gram.kernel_basis(1, 0)) == doctest::Approx(1.0));
    }
}

TEST_CASE("zero weight gives the zero gram") {
    const SymplecticSystem sys =
        SymplecticSystem::constant(Matrix::Identity(2, 2), Matrix::Zero(2, 2), 5);
    const GramMatrix gram = gram_phi(sys, Complex(0, 0), {0, 5});
    CHECK(frob(gram.value) == doctest::Approx(0.0));
    CHECK(gram.rank == 0);
    CHECK(gram.kernel_basis.cols() == 2);
}

TEST_CASE("kernel of the gram matrix is lambda independent") {
    SUBCASE("zero weight: full kernels at zero angle") {
        const SymplecticSystem sys =
            SymplecticSystem::constant(Matrix::Identity(2, 2), Matrix::Zero(2, 2), 5);
        const KernelComparison cmp =
            kernel_lambda_independence(sys, {0, 5}, {Complex(0, 0), Complex(0, 1)});
        CHECK(cmp.consistent);
        CHECK(cmp.max_principal_angle == doctest::Approx(0.0));
    }
    SUBCASE("free system: trivial kernels") {
        const SymplecticSystem sys = testkit::free_sturm_liouville(6);
        const KernelComparison cmp = kernel_lambda_independence(
            sys, {0, 3}, {Complex(0, 0), Complex(0, 1), Complex(1, 2)});
        CHECK(cmp.consistent);
        for (int rank : cmp.ranks) CHECK(rank == 2);
    }
    SUBCASE("non-definite example: kernel span{(0,1)} for every lambda") {
        const SymplecticSystem sys = testkit::non_operator_example(10);
        const KernelComparison cmp = kernel_lambda_independence(
            sys, {0, 8}, {Complex(0, 0), Complex(0, 1), Complex(1, 2), Complex(-2, -1)});
        CHECK(cmp.consistent);
        for (int rank : cmp.ranks) CHECK(rank == 1);
        CHECK(cmp.max_principal_angle <= 1e-7);
    }
    SUBCASE("random system: rank equal across ten probes") {
        Rng rng(19);
        testkit::SystemParams params;
        params.n = 2;
        params.horizon = 8;
        const SymplecticSystem sys = testkit::random_system(rng, params);
        std::vector<Complex> probes;
        for (int i = 0; i < 10; ++i) probes.push_back(testkit::random_unit_disk(rng, 2.0));
        const KernelComparison cmp = kernel_lambda_independence(sys, {0, 8}, probes);
        CHECK(cmp.consistent);
    }
}

TEST_CASE("maximal rank interval scans prefixes") {
    SUBCASE("free system saturates at full rank") {
        const SymplecticSystem sys = testkit::free_sturm_liouville(8);
        const auto [interval, rank] = maximal_rank_interval(sys, 8);
        CHECK(rank == 2);
        CHECK(interval.lo == 0);
        CHECK(interval.hi <= 2);
    }
    SUBCASE("non-definite example stabilizes immediately") {
        const SymplecticSystem sys = testkit::non_operator_example(8);
        const auto [interval, rank] = maximal_rank_interval(sys, 8);
        CHECK(rank == 1);
        CHECK(interval.hi == 0);
    }
    SUBCASE("zero weight has rank zero at the first prefix") {
        const SymplecticSystem sys =
            SymplecticSystem::constant(Matrix::Identity(2, 2), Matrix::Zero(2, 2), 5);
        const auto [interval, rank] = maximal_rank_interval(sys, 5);
        CHECK(rank == 0);
        CHECK(interval.hi == 0);
    }
}

TEST_CASE("definiteness verdicts and certificates") {
    SUBCASE("free system is definite on [0, 2]") {
        const SymplecticSystem sys = testkit::free_sturm_liouville(8);
        const DefinitenessCertificate cert = is_definite(sys, {0, 2}, Complex(0.3, 0.7));
        CHECK(cert.definite);
        CHECK(cert.rank == 2);
        CHECK_FALSE(cert.kernel_vector.has_value());
        CHECK(cert.eigenvalues(0) > 0.0);
    }
    SUBCASE("non-definite example produces a kernel certificate") {
        const SymplecticSystem sys = testkit::non_operator_example(8);
        const DefinitenessCertificate cert = is_definite(sys, {0, 8}, Complex(0, 1));
        CHECK_FALSE(cert.definite);
        REQUIRE(cert.kernel_vector.has_value());
        CHECK(std::abs((*cert.kernel_vector)(1)) == doctest::Approx(1.0));
        CHECK(cert.kernel_semi_norm <= 1e-10);
    }
    SUBCASE("zero weight is never definite") {
        const SymplecticSystem sys =
            SymplecticSystem::constant(Matrix::Identity(2, 2), Matrix::Zero(2, 2), 5);
        CHECK_FALSE(is_definite(sys, {0, 5}, Complex(0, 0)).definite);
    }
    SUBCASE("definiteness is inherited by supersets") {
        const SymplecticSystem sys = testkit::free_sturm_liouville(12);
        CHECK(is_definite(sys, {0, 2}, Complex(0, 0)).definite);
        CHECK(is_definite(sys, {0, 7}, Complex(0, 0)).definite);
        CHECK(is_definite(sys, {0, 12}, Complex(0, 0)).definite);
    }
}

TEST_CASE("gram monotonicity under interval inclusion") {
    Rng rng(29);
    testkit::SystemParams params;
    params.n = 2;
    params.horizon = 10;
    const SymplecticSystem sys = testkit::random_system(rng, params);
    const Complex lambda = testkit::random_unit_disk(rng, 1.0);

    int previous_rank = 0;
    Matrix previous_range(4, 0);
    for (int m = 0; m <= 10; m += 2) {
        const GramMatrix gram = gram_phi(sys, lambda, {0, m});
        CHECK(gram.rank >= previous_rank);
        const Matrix range = hermitian_rank(gram.value, sys.tolerances().rank_tol).range;
        if (previous_range.cols() > 0) {
            // Ran phi([0, m']) must contain Ran phi([0, m]) for m <= m'
            const Matrix projected =
                previous_range - range * (range.adjoint() * previous_range);
            CHECK(frob(projected) <= 1e-8);
        }
        previous_rank = gram.rank;
        previous_range = range;
    }
}

TEST_CASE("block-form sufficient condition") {
    SUBCASE("free system fires at l = 1") {
        const SymplecticSystem sys = testkit::free_sturm_liouville(8);
        CHECK(block_sufficient_definite(sys, 1));
        CHECK(is_definite(sys, {0, 2}, Complex(0, 0)).definite);
    }
    SUBCASE("the condition depends only on B and W, not q") {
        std::vector<double> p(9, 1.0), q(9, 5.0), w(9, 1.0);
        const SymplecticSystem sys = from_sturm_liouville(p, q, w);
        CHECK(block_sufficient_definite(sys, 1));
        CHECK(is_definite(sys, {0, 2}, Complex(0, 0)).definite);
    }
    SUBCASE("zero weight never fires") {
        std::vector<double> p(9, 1.0), q(9, 0.0), w(9, 0.0);
        const SymplecticSystem sys = from_sturm_liouville(p, q, w);
        CHECK_FALSE(block_sufficient_definite(sys, 1));
    }
    SUBCASE("singular B blocks never fire") {
        const SymplecticSystem sys = testkit::non_operator_example(8);
        CHECK_FALSE(block_sufficient_definite(sys, 1));  // B = 0 with S = I
    }
    SUBCASE("coupled channels fire and are definite") {
        const SymplecticSystem sys = testkit::coupled_channels(8);
        CHECK(block_sufficient_definite(sys, 1));
        CHECK(is_definite(sys, {0, 2}, Complex(0, 0)).definite);
    }
    SUBCASE("layout that cannot be recovered raises a structure error") {
        Matrix Psi = Matrix::Zero(2, 2);
        Psi(1, 1) = 1.0;  // weight in the lower block: V has nonzero top rows
        const SymplecticSystem sys =
            SymplecticSystem::constant(Matrix::Identity(2, 2), Psi, 4);
        CHECK(validate_hypotheses(sys).pass);
        CHECK_THROWS_AS(block_sufficient_definite(sys, 1), StructureError);
        CHECK_THROWS_AS(block_sufficient_definite(sys, 0), std::out_of_range);
    }
}
