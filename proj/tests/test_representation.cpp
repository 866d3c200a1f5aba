#include <catch2/catch_amalgamated.hpp>

#include "qglevy/representation.hpp"
#include "test_util.hpp"

#include <random>
#include <sstream>

using namespace qglevy;

namespace {

const CartanData& a1q4() {
    static CartanData ctx = CartanData::named("A1", 4.0);
    return ctx;
}

// Text of the 3-dimensional defining representation of U_q(sl3), built from
// the weight strings; used for load_rep and Serre tests.
std::string a2_fundamental_text(double q) {
    double s = std::sqrt(q);
    std::ostringstream os;
    os.precision(17);
    os << "[irrep fund]\ndim = 3\nq = " << q << "\n";
    os << "matrix e_1 = [[0,0],[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]\n";
    os << "matrix f_1 = [[0,0],[0,0],[0,0],[1,0],[0,0],[0,0],[0,0],[0,0],[0,0]]\n";
    os << "matrix e_2 = [[0,0],[0,0],[0,0],[0,0],[0,0],[1,0],[0,0],[0,0],[0,0]]\n";
    os << "matrix f_2 = [[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[1,0],[0,0]]\n";
    os << "matrix k_1 = [[" << s << ",0],[0,0],[0,0],[0,0],[" << 1 / s
       << ",0],[0,0],[0,0],[0,0],[1,0]]\n";
    os << "matrix K_1 = [[" << 1 / s << ",0],[0,0],[0,0],[0,0],[" << s
       << ",0],[0,0],[0,0],[0,0],[1,0]]\n";
    os << "matrix k_2 = [[1,0],[0,0],[0,0],[0,0],[" << s << ",0],[0,0],[0,0],[0,0],[" << 1 / s
       << ",0]]\n";
    os << "matrix K_2 = [[1,0],[0,0],[0,0],[0,0],[" << 1 / s << ",0],[0,0],[0,0],[0,0],[" << s
       << ",0]]\n";
    os << "[sum]\nfund x 1\n";
    return os.str();
}

}  // namespace

TEST_CASE("su2 irrep at j = 1/2, q = 4") {
    Irrep v = su2_irrep(1, 4.0);
    REQUIRE(v.dim == 2);
    REQUIRE(std::abs(v.k[0](0, 0) - 2.0) < 1e-14);
    REQUIRE(std::abs(v.k[0](1, 1) - 0.5) < 1e-14);
    REQUIRE(std::abs(v.e[0](0, 1) - 1.0) < 1e-14);
    REQUIRE(std::abs(v.e[0](1, 0)) < 1e-14);
    REQUIRE((v.f[0] - v.e[0].transpose()).norm() < 1e-14);

    // oracle: the two rank-1 relations, straight matrix arithmetic
    Matrix ke = v.k[0] * v.e[0], ek = v.e[0] * v.k[0];
    REQUIRE((ke - 4.0 * ek).norm() < 1e-12);
    Matrix comm = v.e[0] * v.f[0] - v.f[0] * v.e[0];
    Matrix rhs = (v.k[0] * v.k[0] - v.k_inv[0] * v.k_inv[0]) / (4.0 - 0.25);
    REQUIRE((comm - rhs).norm() < 1e-12);
}

TEST_CASE("su2 irrep trivial and j = 1 cases") {
    Irrep t = su2_irrep(0, 4.0);
    REQUIRE(t.dim == 1);
    REQUIRE(std::abs(t.k[0](0, 0) - 1.0) < 1e-15);
    REQUIRE(t.e[0].norm() < 1e-15);
    REQUIRE(t.is_trivial());

    // e |1,-1> = sqrt([2]_q) |1,0>, and [2]_4 = 17/4
    Irrep w = su2_irrep(2, 4.0);
    REQUIRE(std::abs(w.e[0](1, 2) - std::sqrt(17.0 / 4.0)) < 1e-13);

    REQUIRE_THROWS_AS(su2_irrep(-1, 4.0), std::invalid_argument);
    REQUIRE_THROWS_AS(su2_irrep(1, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(su2_irrep(1, -4.0), std::invalid_argument);
}

TEST_CASE("su2 relation residuals stay below 1e-10 for j <= 3") {
    CartanData a1 = CartanData::named("A1");
    for (double q : {0.5, 2.0, 4.0}) {
        for (int two_j = 0; two_j <= 6; ++two_j) {
            Irrep v = su2_irrep(two_j, q);
            REQUIRE(verify_irrep(a1, v, 1e-10).empty());
        }
    }
}

TEST_CASE("casimir acts as the expected constant") {
    CartanData a1 = CartanData::named("A1", 2.0);
    AlgebraElement c = casimir_su2(a1);
    const double q = 2.0;
    double c0 = (q + 1.0 / q) / std::pow(q - 1.0 / q, 2.0);
    for (int two_j = 0; two_j <= 6; ++two_j) {
        Rep rep(a1, {{su2_irrep(two_j, q), 1}});
        Matrix m = rep.evaluate(c);
        double cj = (std::pow(q, two_j + 1.0) + std::pow(q, -(two_j + 1.0))) /
                    std::pow(q - 1.0 / q, 2.0);
        REQUIRE((m - cj * Matrix::Identity(rep.dim(), rep.dim())).norm() < 1e-10);
        Matrix shifted = m - c0 * Matrix::Identity(rep.dim(), rep.dim());
        if (two_j == 0) {
            REQUIRE(shifted.norm() < 1e-12);  // zero matrix on the trivial irrep
        } else {
            REQUIRE(std::abs(cj - c0) > 1e-6);
            Eigen::JacobiSVD<Matrix> svd(shifted);
            REQUIRE(svd.singularValues().minCoeff() > 1e-8);  // invertible
        }
    }
}

TEST_CASE("evaluate is a unital *-homomorphism") {
    const CartanData& ctx = a1q4();
    Rep rep(ctx, {{su2_irrep(1, 4.0), 1}});
    AlgebraElement efmfe = parse_element("e_1*f_1 - f_1*e_1", ctx);
    Matrix m = rep.evaluate(efmfe);
    Matrix expect(2, 2);
    expect << 1, 0, 0, -1;
    REQUIRE((m - expect).norm() < 1e-12);

    REQUIRE((rep.evaluate(AlgebraElement::one(ctx)) - Matrix::Identity(2, 2)).norm() < 1e-14);

    std::mt19937 rng(19);
    for (int trial = 0; trial < 30; ++trial) {
        AlgebraElement u = testutil::random_element(rng, ctx, 3);
        AlgebraElement w = testutil::random_element(rng, ctx, 2);
        REQUIRE((rep.evaluate(involute(u)) - rep.evaluate(u).adjoint()).norm() < 1e-9);
        REQUIRE((rep.evaluate(u * w) - rep.evaluate(u) * rep.evaluate(w)).norm() < 1e-9);
    }
}

TEST_CASE("weight decomposition") {
    const CartanData& ctx = a1q4();
    Rep half(ctx, {{su2_irrep(1, 4.0), 1}});
    const auto& wd = half.weights();
    REQUIRE(wd.size() == 2);
    REQUIRE(wd[0].lambda == std::vector<int>{-1});
    REQUIRE(wd[1].lambda == std::vector<int>{1});
    REQUIRE(std::abs(std::abs(wd[1].basis(0, 0)) - 1.0) < 1e-12);

    Rep triv(ctx, {{su2_irrep(0, 4.0), 1}});
    REQUIRE(triv.weights().size() == 1);
    REQUIRE(triv.weights()[0].lambda == std::vector<int>{0});

    Rep twice(ctx, {{su2_irrep(1, 4.0), 2}});
    REQUIRE(twice.weights().size() == 2);
    REQUIRE(twice.weights()[0].basis.cols() == 2);
    REQUIRE(twice.weights()[1].basis.cols() == 2);

    // orthonormality across the whole decomposition
    Matrix all(half.dim(), 0);
    for (const auto& ws : wd) {
        Matrix next(half.dim(), all.cols() + ws.basis.cols());
        next << all, ws.basis;
        all = next;
    }
    REQUIRE((all.adjoint() * all - Matrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("weight decomposition rejects off-lattice eigenvalues") {
    CartanData a1 = CartanData::named("A1");
    Irrep bad;
    bad.rank = 1;
    bad.dim = 1;
    bad.q = 4.0;
    bad.label = "bad";
    bad.e = {Matrix::Zero(1, 1)};
    bad.f = {Matrix::Zero(1, 1)};
    bad.k = {-Matrix::Identity(1, 1)};
    bad.k_inv = {-Matrix::Identity(1, 1)};
    REQUIRE(verify_irrep(a1, bad, 1e-10).empty());  // relations hold for k = -1
    REQUIRE_THROWS_WITH(Rep(a1, {{bad, 1}}), Catch::Matchers::ContainsSubstring("off-lattice"));
}

TEST_CASE("tensor representation") {
    const CartanData& ctx = a1q4();
    Rep half(ctx, {{su2_irrep(1, 4.0), 1}});
    Rep prod = tensor_rep(half, half);
    REQUIRE(prod.dim() == 4);

    std::map<int, int> mult;
    for (const auto& ws : prod.weights()) mult[ws.lambda[0]] = static_cast<int>(ws.basis.cols());
    REQUIRE(mult == std::map<int, int>{{-2, 1}, {0, 2}, {2, 1}});

    // (V x V)(e) = M(e) x M(k^-1) + M(k) x M(e)
    Matrix expect = Matrix::Zero(4, 4);
    const Matrix &e = half.gen_e(0), &k = half.gen_k(0), &ki = half.gen_k_inv(0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    expect(2 * i + a, 2 * j + b) = e(i, j) * ki(a, b) + k(i, j) * e(a, b);
    REQUIRE((prod.gen_e(0) - expect).norm() < 1e-12);

    // V_0 (x) V_j acts exactly like V_j on the generators
    Rep triv(ctx, {{su2_irrep(0, 4.0), 1}});
    Rep same = tensor_rep(triv, half);
    REQUIRE((same.gen_e(0) - half.gen_e(0)).norm() < 1e-12);
    REQUIRE((same.gen_f(0) - half.gen_f(0)).norm() < 1e-12);
    REQUIRE((same.gen_k(0) - half.gen_k(0)).norm() < 1e-12);

    Rep big(ctx, {{su2_irrep(80, 4.0), 1}});
    REQUIRE_THROWS_AS(tensor_rep(big, big), std::invalid_argument);
}

TEST_CASE("representation files round-trip") {
    const CartanData& ctx = a1q4();
    Rep rep(ctx, {{su2_irrep(1, 4.0), 1}, {su2_irrep(2, 4.0), 1}});
    std::stringstream ss;
    save_rep(rep, ss);
    Rep back = load_rep(ctx, ss);
    REQUIRE(back.dim() == rep.dim());
    std::mt19937 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        AlgebraElement u = testutil::random_element(rng, ctx, 2);
        REQUIRE((back.evaluate(u) - rep.evaluate(u)).norm() < 1e-10);
    }
}

TEST_CASE("loading rejects a broken involution") {
    const CartanData& ctx = a1q4();
    Rep rep(ctx, {{su2_irrep(1, 4.0), 1}});
    std::stringstream ss;
    save_rep(rep, ss);
    std::string text = ss.str();
    // tamper with f_1 so that M(f) != M(e)^dagger
    auto at = text.find("matrix f_1 = ");
    REQUIRE(at != std::string::npos);
    text.replace(text.find("[1,0]", at), 5, "[2,0]");
    std::stringstream tampered(text);
    REQUIRE_THROWS_WITH(load_rep(ctx, tampered),
                        Catch::Matchers::ContainsSubstring("involution"));
}

TEST_CASE("A2 fundamental representation loads and kills the Serre elements") {
    CartanData a2 = CartanData::named("A2", 2.0);
    std::stringstream ss(a2_fundamental_text(2.0));
    Rep rep = load_rep(a2, ss);
    REQUIRE(rep.dim() == 3);
    for (bool e_side : {true, false}) {
        Matrix s01 = rep.evaluate(serre_element(a2, 0, 1, e_side));
        Matrix s10 = rep.evaluate(serre_element(a2, 1, 0, e_side));
        REQUIRE(s01.norm() < 1e-10);
        REQUIRE(s10.norm() < 1e-10);
    }
    std::vector<std::vector<int>> lambdas;
    for (const auto& ws : rep.weights()) lambdas.push_back(ws.lambda);
    REQUIRE(lambdas == std::vector<std::vector<int>>{{-1, 1}, {0, -1}, {1, 0}});
}

TEST_CASE("perturbed representations are rejected with a named relation") {
    CartanData a2 = CartanData::named("A2", 2.0);
    std::string text = a2_fundamental_text(2.0);
    auto at = text.find("matrix e_1 = ");
    REQUIRE(at != std::string::npos);
    text.replace(text.find("[1,0]", at), 5, "[1.001,0]");
    std::stringstream ss(text);
    try {
        load_rep(a2, ss);
        FAIL("expected rejection");
    } catch (const std::runtime_error& err) {
        std::string msg = err.what();
        REQUIRE(msg.find("rejected") != std::string::npos);
        REQUIRE(msg.find("(1,1)") != std::string::npos);  // some named relation with indices
    }
}

TEST_CASE("serre violations are reported by name") {
    // e_2 := f_1 keeps matrix sizes legal but breaks the Serre relation
    // (alongside others); the rejection must name it.
    CartanData a2 = CartanData::named("A2", 2.0);
    std::stringstream ss(a2_fundamental_text(2.0));
    Rep good = load_rep(a2, ss);
    Irrep irr = good.summands().front().first;
    irr.e[1] = irr.f[0];
    irr.f[1] = irr.e[0];
    auto violations = verify_irrep(a2, irr, 1e-8);
    bool has_serre = false;
    for (const auto& v : violations) has_serre |= v.relation.rfind("serre", 0) == 0;
    REQUIRE(has_serre);
    REQUIRE_THROWS_WITH(Rep(a2, {{irr, 1}}, 1e-8), Catch::Matchers::ContainsSubstring("serre"));
}

TEST_CASE("rep constructor rejects mixed q and bad multiplicities") {
    const CartanData& ctx = a1q4();
    REQUIRE_THROWS_AS(Rep(ctx, {{su2_irrep(1, 4.0), 0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(Rep(ctx, {{su2_irrep(1, 4.0), 1}, {su2_irrep(1, 2.0), 1}}),
                      std::invalid_argument);
    Rep mixed(ctx, {{su2_irrep(0, 4.0), 1}, {su2_irrep(1, 4.0), 1}});
    REQUIRE(mixed.has_trivial_summand());
}
