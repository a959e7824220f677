#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "qmem/dense.hpp"
#include "qmem/pauli.hpp"

using namespace qmem;
using Catch::Approx;

namespace {

// random sums on a fixed small alphabet, for the algebra/matrix consistency
// properties
OperatorSum random_sum(std::mt19937_64& rng, int max_terms, const std::vector<std::string>& sites) {
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<int> letter(0, 3);  // 0 = identity
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    OperatorSum sum;
    const int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
        PauliTerm t;
        t.coeff = {coeff(rng), coeff(rng)};
        for (const auto& s : sites) {
            const int l = letter(rng);
            if (l > 0) t.letters.emplace(s, static_cast<Pauli>(l));
        }
        sum.terms.push_back(std::move(t));
    }
    return sum;
}

}  // namespace

TEST_CASE("single-site products") {
    auto Xa = OperatorSum::single(1.0, "a", Pauli::X);
    auto Ya = OperatorSum::single(1.0, "a", Pauli::Y);

    // X_a X_a = identity
    auto sq = multiply(Xa, Xa);
    REQUIRE(sq.terms.size() == 1);
    CHECK(sq.terms[0].letters.empty());
    CHECK(sq.terms[0].coeff.real() == 1.0);
    CHECK(sq.terms[0].coeff.imag() == 0.0);

    // X_a Y_a = i Z_a, exact quarter turn
    auto xy = multiply(Xa, Ya);
    REQUIRE(xy.terms.size() == 1);
    CHECK(xy.terms[0].letters.at("a") == Pauli::Z);
    CHECK(xy.terms[0].coeff.real() == 0.0);
    CHECK(xy.terms[0].coeff.imag() == 1.0);
}

TEST_CASE("two-site product against dense oracle") {
    // (2 X_a X_b) (3 Z_b) = -6i X_a Y_b
    auto lhs = multiply(OperatorSum::single(2.0, "a", Pauli::X),
                        OperatorSum::single(1.0, "b", Pauli::X));
    auto rhs = OperatorSum::single(3.0, "b", Pauli::Z);
    auto prod = multiply(lhs, rhs);
    REQUIRE(prod.terms.size() == 1);
    CHECK(prod.terms[0].letters.at("a") == Pauli::X);
    CHECK(prod.terms[0].letters.at("b") == Pauli::Y);
    CHECK(prod.terms[0].coeff.real() == Approx(0.0).margin(0));
    CHECK(prod.terms[0].coeff.imag() == Approx(-6.0));

    // the dense oracle agrees
    const std::vector<std::string> order{"a", "b"};
    Eigen::MatrixXcd direct = to_dense(lhs, order).matrix * to_dense(rhs, order).matrix;
    CHECK((direct - to_dense(prod, order).matrix).norm() < 1e-14);
}

TEST_CASE("commutators") {
    auto Xa = OperatorSum::single(1.0, "a", Pauli::X);
    auto Za = OperatorSum::single(1.0, "a", Pauli::Z);

    auto self = commutator(Xa, Xa);
    CHECK(self.terms.empty());

    // [X_a, Z_a] = -2i Y_a
    auto xz = commutator(Xa, Za);
    REQUIRE(xz.terms.size() == 1);
    CHECK(xz.terms[0].letters.at("a") == Pauli::Y);
    CHECK(xz.terms[0].coeff.imag() == Approx(-2.0));
    CHECK(xz.terms[0].coeff.real() == 0.0);

    // even-overlap strings commute: [X_a X_b, Z_a Z_b] = 0
    auto xx = multiply(OperatorSum::single(1.0, "a", Pauli::X),
                       OperatorSum::single(1.0, "b", Pauli::X));
    auto zz = multiply(OperatorSum::single(1.0, "a", Pauli::Z),
                       OperatorSum::single(1.0, "b", Pauli::Z));
    CHECK(commutator(xx, zz).terms.empty());

    // antisymmetry on random operators
    std::mt19937_64 rng(7);
    for (int it = 0; it < 20; ++it) {
        auto A = random_sum(rng, 4, {"a", "b", "c"});
        auto B = random_sum(rng, 4, {"a", "b", "c"});
        auto lhs = commutator(A, B);
        auto rhs = commutator(B, A);
        rhs *= -1.0;
        auto diff = lhs - rhs;
        diff.simplify();
        CHECK(diff.one_norm() < 1e-12 * (1 + lhs.one_norm()));
    }
}

TEST_CASE("to_dense basics") {
    // Z on one site is diag(+1, -1)
    auto d = to_dense(OperatorSum::single(1.0, "q", Pauli::Z), {"q"});
    CHECK(d.matrix(0, 0) == Complex(1, 0));
    CHECK(d.matrix(1, 1) == Complex(-1, 0));
    CHECK(d.matrix(0, 1) == Complex(0, 0));

    auto id = to_dense(OperatorSum::identity(3.0), {"q", "r"});
    CHECK((id.matrix - 3.0 * Eigen::MatrixXcd::Identity(4, 4)).norm() == 0.0);

    CHECK_THROWS_AS(to_dense(OperatorSum::single(1.0, "x", Pauli::X), {"q"}), UnknownSiteError);
    CHECK_THROWS_AS(to_dense(OperatorSum::identity(), std::vector<std::string>(15, "s")),
                    DimensionCapError);
}

TEST_CASE("algebra/matrix consistency on random sums") {
    std::mt19937_64 rng(42);
    const std::vector<std::string> sites{"a", "b", "c", "d"};
    for (int it = 0; it < 40; ++it) {
        auto A = random_sum(rng, 5, sites);
        auto B = random_sum(rng, 5, sites);
        auto dA = to_dense(A, sites).matrix;
        auto dB = to_dense(B, sites).matrix;
        auto dAB = to_dense(multiply(A, B), sites).matrix;
        const double scale = std::max(1.0, dA.norm() * dB.norm());
        CHECK((dAB - dA * dB).norm() / scale < 1e-12);
    }
}

TEST_CASE("simplify is idempotent and preserves the dense form") {
    std::mt19937_64 rng(5);
    const std::vector<std::string> sites{"a", "b"};
    for (int it = 0; it < 20; ++it) {
        auto A = random_sum(rng, 8, sites);
        auto before = to_dense(A, sites).matrix;
        OperatorSum s1 = A;
        s1.simplify();
        OperatorSum s2 = s1;
        s2.simplify();
        CHECK((to_dense(s1, sites).matrix - before).norm() < 1e-12 * (1 + before.norm()));
        CHECK(s1.terms.size() == s2.terms.size());
        CHECK((to_dense(s2, sites).matrix - before).norm() < 1e-12 * (1 + before.norm()));
    }
}

TEST_CASE("adjoint involution and hermiticity check") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 20; ++it) {
        auto A = random_sum(rng, 6, {"a", "b", "c"});
        auto back = adjoint(adjoint(A));
        REQUIRE(back.terms.size() == A.terms.size());
        for (std::size_t i = 0; i < A.terms.size(); ++i) {
            CHECK(back.terms[i].coeff == A.terms[i].coeff);
            CHECK(back.terms[i].same_letters(A.terms[i]));
        }
        // A + A^dagger is Hermitian
        auto h = A + adjoint(A);
        CHECK(is_hermitian(h));
    }
    auto skew = OperatorSum::single(Complex(0, 1), "a", Pauli::X);
    CHECK(!is_hermitian(skew));
}

TEST_CASE("text round trip") {
    std::mt19937_64 rng(3);
    auto A = random_sum(rng, 6, {"q1", "q2"});
    A.simplify(0.0);
    auto B = from_text(to_text(A));
    auto diff = A - B;
    diff.simplify();
    CHECK(diff.one_norm() < 1e-15 * (1 + A.one_norm()));

    CHECK_THROWS_WITH(from_text("1.0\n"), Catch::Matchers::ContainsSubstring("line 1"));
    CHECK_THROWS_WITH(from_text("1 0 a:X\n1 0 b:Q\n"), Catch::Matchers::ContainsSubstring("line 2"));
}

TEST_CASE("formal symbol") {
    auto s = OperatorSum::formal(2.0);
    auto prod = multiply(s, s);
    REQUIRE(prod.terms.size() == 1);
    CHECK(prod.terms[0].fm_power == 2);
    CHECK(prod.terms[0].coeff.real() == Approx(4.0));

    // commutes with everything
    auto X = OperatorSum::single(1.0, "a", Pauli::X);
    CHECK(commutator(s, X).terms.empty());

    CHECK(substitute_formal(prod, 0.5).terms[0].coeff.real() == Approx(1.0));

    auto rt = from_text(to_text(prod));
    CHECK(rt.terms[0].fm_power == 2);
}
