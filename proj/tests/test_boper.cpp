#include "doctest.h"
#include "test_helpers.hpp"

using namespace opercalc;
using testutil::rf;
using testutil::rf_matrix;

TEST_SUITE_BEGIN("boper");

namespace {

BilinearForm standard_symplectic(int rank) {
    RfMatrix j(rank, rank);
    for (int i = 0; i < rank / 2; ++i) {
        j.at(i, rank / 2 + i) = rf("1");
        j.at(rank / 2 + i, i) = rf("-1");
    }
    return BilinearForm(std::move(j), FormParity::Symplectic);
}

BilinearForm identity_form(int rank) {
    return BilinearForm(RfMatrix::identity(rank), FormParity::Orthogonal);
}

/// Random non-degenerate form of the requested parity: congruence of the
/// standard one by a random invertible frame change.
BilinearForm random_form(std::mt19937& rng, int rank, FormParity parity) {
    RfMatrix g = testutil::random_invertible(rng, rank, 1);
    RfMatrix base = (parity == FormParity::Orthogonal) ? RfMatrix::identity(rank)
                                                       : standard_symplectic(rank).mat;
    return BilinearForm(g.transpose() * base * g, parity);
}

/// The length-2 companion datum of d^2 + q, in the frame the converse
/// construction produces: A = [[0, 1], [-q, 0]], B the standard symplectic
/// plane, E_1 spanned by the second coordinate.
BOperData companion_length2(const RationalFunction& q, long genus = 2) {
    RfMatrix a(2, 2);
    a.at(0, 1) = rf("1");
    a.at(1, 0) = -q;
    std::vector<RfMatrix> steps;
    steps.push_back(rf_matrix(2, 1, {"0", "1"}));
    steps.push_back(RfMatrix::identity(2));
    return BOperData(standard_symplectic(2), Filtration(2, 1, std::move(steps)),
                     ConnectionMatrix(std::move(a)), genus, 1 - genus);
}

std::vector<TruncatedSeries> constant_section(const std::vector<Rational>& v, const Rational& z0,
                                              int order) {
    std::vector<TruncatedSeries> out;
    for (const auto& x : v) out.push_back(TruncatedSeries::constant(x, z0, order));
    return out;
}

} // namespace

TEST_CASE("perp: worked examples") {
    BilinearForm euclid = identity_form(2);
    RfMatrix e1 = rf_matrix(2, 1, {"1", "0"});
    RfMatrix p = perp(e1, euclid);
    CHECK(p.cols() == 1);
    CHECK(same_column_span(p, rf_matrix(2, 1, {"0", "1"})));

    BilinearForm sympl = standard_symplectic(2);
    RfMatrix lagr = perp(e1, sympl);
    CHECK(same_column_span(lagr, e1)); // isotropic line equals its own perp
}

TEST_CASE("perp is a rank-complementary involution") {
    std::mt19937 rng(16001);
    for (int trial = 0; trial < 100; ++trial) {
        int dim = 2 + static_cast<int>(rng() % 5); // 2..6
        FormParity parity = (dim % 2 == 0 && rng() % 2 == 0) ? FormParity::Symplectic
                                                             : FormParity::Orthogonal;
        BilinearForm b = random_form(rng, dim, parity);
        int k = 1 + static_cast<int>(rng() % dim);
        RfMatrix f(dim, k);
        do {
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < k; ++j)
                    f.at(i, j) = RationalFunction(testutil::random_polynomial(rng, 2));
        } while (rank(f) != k);
        RfMatrix p = perp(f, b);
        CHECK(p.cols() == dim - k);
        CHECK(same_column_span(perp(p, b), f));
    }
}

TEST_CASE("perp of a rank-1 subbundle in rank 4, both ways") {
    std::mt19937 rng(16002);
    BilinearForm b = random_form(rng, 4, FormParity::Symplectic);
    for (int trial = 0; trial < 10; ++trial) {
        RfMatrix f(4, 1);
        do {
            for (int i = 0; i < 4; ++i) f.at(i, 0) = RationalFunction(testutil::random_polynomial(rng, 2));
        } while (rank(f) != 1);
        RfMatrix p = perp(f, b);
        CHECK(p.cols() == 3);
        CHECK(same_column_span(perp(p, b), f));
    }
}

TEST_CASE("connection compatibility: worked examples") {
    BilinearForm id2 = identity_form(2);
    RfMatrix antisym = rf_matrix(2, 2, {"0", "z^2", "-z^2", "0"});
    CHECK(check_b_connection(ConnectionMatrix(antisym), id2).ok);

    auto bad = check_b_connection(ConnectionMatrix(RfMatrix::identity(2)), id2);
    CHECK(!bad.ok);
    CHECK(bad.residual == Rational(-2) * RfMatrix::identity(2));

    BilinearForm diag(rf_matrix(2, 2, {"1", "0", "0", "z"}), FormParity::Orthogonal);
    RfMatrix a = rf_matrix(2, 2, {"0", "0", "0", "1/(2*z)"});
    CHECK(check_b_connection(ConnectionMatrix(a), diag).ok);
}

TEST_CASE("compatibility residual vanishes iff the derivative identity holds on series") {
    std::mt19937 rng(16003);
    int order = 8;
    for (int trial = 0; trial < 12; ++trial) {
        BilinearForm b = random_form(rng, 2, FormParity::Orthogonal);
        RfMatrix a(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) a.at(i, j) = RationalFunction(testutil::random_polynomial(rng, 2));
        bool residual_zero = check_b_connection(ConnectionMatrix(a), b).ok;

        // series identity B(Vs,t) + B(s,Vt) = (B(s,t))' on random sections
        Rational z0(0);
        SeriesMatrix as = expand_at(a, z0, order);
        SeriesMatrix bs = expand_at(b.mat, z0, order);
        bool identity_holds = true;
        for (int rep = 0; rep < 4 && identity_holds; ++rep) {
            SeriesMatrix s(2, 1), t(2, 1);
            for (int i = 0; i < 2; ++i) {
                s.at(i, 0) = expand_at(RationalFunction(testutil::random_polynomial(rng, 3)), z0, order);
                t.at(i, 0) = expand_at(RationalFunction(testutil::random_polynomial(rng, 3)), z0, order);
            }
            auto deriv = [](const SeriesMatrix& m) {
                return m.map([](const TruncatedSeries& e) { return e.derivative(); });
            };
            SeriesMatrix vs = deriv(s) + as * s, vt = deriv(t) + as * t;
            TruncatedSeries lhs = (vs.transpose() * bs * t).at(0, 0) + (s.transpose() * bs * vt).at(0, 0);
            TruncatedSeries rhs = (s.transpose() * bs * t).at(0, 0).derivative();
            identity_holds = (lhs - rhs.truncate(lhs.order())).is_zero_through(order - 1);
        }
        CHECK(residual_zero == identity_holds);
    }
}

TEST_CASE("filtration perpendicularity: worked examples") {
    BilinearForm sympl = standard_symplectic(2);
    std::vector<RfMatrix> steps1{rf_matrix(2, 1, {"1", "0"}), RfMatrix::identity(2)};
    CHECK(check_b_filtration(Filtration(2, 1, steps1), sympl));

    std::vector<RfMatrix> steps2{rf_matrix(2, 1, {"1", "1"}), RfMatrix::identity(2)};
    CHECK(check_b_filtration(Filtration(2, 1, steps2), sympl));

    // length 3 with a symplectic form: parity violation
    BilinearForm sympl6 = standard_symplectic(6);
    Filtration f3 = Filtration::tail_standard(3, 2);
    CHECK(!check_b_filtration(f3, sympl6));

    // even length with an orthogonal form: parity violation again
    BilinearForm id2 = identity_form(2);
    CHECK(!check_b_filtration(Filtration(2, 1, steps1), id2));
}

TEST_CASE("second fundamental form: block read-off") {
    RfMatrix a = rf_matrix(2, 2, {"0", "z^3 - 2", "1", "0"});
    std::vector<RfMatrix> steps{rf_matrix(2, 1, {"1", "0"}), RfMatrix::identity(2)};
    Filtration f(2, 1, steps);
    RfMatrix s1 = second_fundamental_form(ConnectionMatrix(a), f, 1);
    CHECK(s1.rows() == 1);
    CHECK(s1.at(0, 0) == rf("1"));

    RfMatrix upper = rf_matrix(2, 2, {"0", "z", "0", "0"});
    RfMatrix s1z = second_fundamental_form(ConnectionMatrix(upper), f, 1);
    CHECK(s1z.at(0, 0).is_zero());

    CHECK_THROWS_AS(second_fundamental_form(ConnectionMatrix(a), f, 2), CalcError);
}

TEST_CASE("second fundamental form is independent of the lift") {
    // head filtration e1 < (e1,e2) < all, with a transversal connection
    RfMatrix a = rf_matrix(3, 3, {"0", "1", "2", "3", "z", "1", "0", "5", "-z"});
    std::vector<RfMatrix> steps{rf_matrix(3, 1, {"1", "0", "0"}),
                                rf_matrix(3, 2, {"1", "0", "0", "1", "0", "0"}),
                                RfMatrix::identity(3)};
    Filtration f(3, 1, steps);
    ConnectionMatrix conn(a);
    RfMatrix s1 = second_fundamental_form(conn, f, 1);
    RfMatrix s2 = second_fundamental_form(conn, f, 2);
    CHECK(s1.at(0, 0) == rf("3"));
    CHECK(s2.at(0, 0) == rf("5"));

    // change the lift of the second graded generator by an E_1 section
    std::vector<RfMatrix> steps2{steps[0], rf_matrix(3, 2, {"1", "5*z", "0", "1", "0", "0"}),
                                 RfMatrix::identity(3)};
    Filtration f2(3, 1, steps2);
    CHECK(second_fundamental_form(conn, f2, 1) == s1);
    CHECK(second_fundamental_form(conn, f2, 2) == s2);

    // transversality violation is reported
    RfMatrix leak = rf_matrix(3, 3, {"0", "1", "2", "3", "z", "1", "7", "5", "-z"});
    CHECK_THROWS_AS(second_fundamental_form(ConnectionMatrix(leak), f, 1), CalcError);
    try {
        second_fundamental_form(ConnectionMatrix(leak), f, 1);
    } catch (const CalcError& e) {
        CHECK(e.code() == Errc::TransversalityViolation);
    }
}

TEST_CASE("length-2 companion datum validates and has unit composed form") {
    BOperData d = companion_length2(rf("z^2 + 1"));
    ValidationReport rep = validate_boper(d);
    CHECK(rep.pass);
    for (const auto& c : rep.checks) CHECK(c.pass);
    CHECK(rep.s_matrix.rows() == 1);
    CHECK(rep.s_matrix.at(0, 0) == rf("1"));

    SPrimeResult sp = s_prime_form(d);
    CHECK(sp.symmetric);
    CHECK(sp.nondegenerate);
    CHECK(sp.s_matrix.at(0, 0) == rf("1"));
}

TEST_CASE("orthogonal form on an even-length filtration is rejected at construction") {
    RfMatrix a(2, 2);
    a.at(0, 1) = rf("1");
    a.at(1, 0) = rf("-z");
    std::vector<RfMatrix> steps{rf_matrix(2, 1, {"0", "1"}), RfMatrix::identity(2)};
    CHECK_THROWS_AS(BOperData(identity_form(2), Filtration(2, 1, steps),
                              ConnectionMatrix(a), 2, 0),
                    CalcError);
}

TEST_CASE("broken graded isomorphism is caught by the report") {
    // kill the subdiagonal of the companion datum: S_1 becomes zero
    RfMatrix a(2, 2);
    a.at(1, 0) = rf("-z");
    std::vector<RfMatrix> steps{rf_matrix(2, 1, {"0", "1"}), RfMatrix::identity(2)};
    BOperData d(standard_symplectic(2), Filtration(2, 1, steps), ConnectionMatrix(a), 2, -1);
    ValidationReport rep = validate_boper(d);
    CHECK(!rep.pass);
    bool found = false;
    for (const auto& c : rep.checks)
        if (c.name == "graded_isomorphisms") {
            found = true;
            CHECK(!c.pass);
        }
    CHECK(found);
}

TEST_CASE("a non-compatible connection is flagged as the root cause") {
    RfMatrix a = RfMatrix::identity(2);
    std::vector<RfMatrix> steps{rf_matrix(2, 1, {"0", "1"}), RfMatrix::identity(2)};
    BOperData d(standard_symplectic(2), Filtration(2, 1, steps), ConnectionMatrix(a), 2, -1);
    ValidationReport rep = validate_boper(d);
    CHECK(!rep.pass);
    CHECK(rep.checks[0].name == "b_connection");
    CHECK(!rep.checks[0].pass);
    // downstream checks are reported as not evaluated
    for (const auto& c : rep.checks)
        if (c.name == "composed_form_symmetric") CHECK(c.detail.find("prerequisite") != std::string::npos);
}

TEST_CASE("iterated-derivative identity on the first step") {
    BOperData d = companion_length2(rf("z - 3"));
    int order = d.default_order();
    Rational z0(0);

    // basis section of E_1 is the constant second coordinate vector
    auto e2 = constant_section({Rational(0), Rational(1)}, z0, order);
    CHECK(v_identity_check(d, e2, e2, order));

    // zero connection with a constant form: the identity degenerates to 0 = 0
    RfMatrix zero(2, 2);
    std::vector<RfMatrix> steps{rf_matrix(2, 1, {"0", "1"}), RfMatrix::identity(2)};
    BOperData flat(standard_symplectic(2), Filtration(2, 1, steps), ConnectionMatrix(zero), 2, 0);
    auto s = constant_section({Rational(2), Rational(1)}, z0, order);
    auto t = constant_section({Rational(-1), Rational(3)}, z0, order);
    CHECK(v_identity_check(flat, s, t, order));

    auto shallow = constant_section({Rational(0), Rational(1)}, z0, 1);
    CHECK_THROWS_AS(v_identity_check(d, shallow, shallow, order), CalcError);
}

TEST_SUITE_END();
