// Acceptance suite: one criterion per line, exact tolerances, nonzero exit on
// any failure. Criterion 9 drives the installed CLI binary against the golden
// reports; pass its location with --cli and the scenario directory with
// --scenarios.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "opercalc/scenario.hpp"

using namespace opercalc;

namespace {

std::mt19937 rng(271828);

Rational rnd_rational(int num_range = 6, int den_range = 3) {
    std::uniform_int_distribution<long> num(-num_range, num_range);
    std::uniform_int_distribution<long> den(1, den_range);
    return Rational(num(rng), den(rng));
}

Polynomial rnd_poly(int max_degree, bool nonzero = false) {
    std::uniform_int_distribution<int> deg(0, max_degree);
    for (;;) {
        std::vector<Rational> c(static_cast<size_t>(deg(rng)) + 1);
        for (auto& x : c) x = rnd_rational();
        Polynomial p(std::move(c));
        if (!nonzero || !p.is_zero()) return p;
    }
}

WeightedDiffOp rnd_oper_op(int order, int coeff_degree) {
    std::vector<RationalFunction> c;
    for (int k = 0; k < order; ++k) c.push_back(RationalFunction(rnd_poly(coeff_degree)));
    c.push_back(RationalFunction(1));
    return make_oper_op(order, std::move(c));
}

WeightedDiffOp rnd_sl_op(int order, int coeff_degree) {
    TensorComponents<RationalFunction> tc;
    tc.n = order;
    tc.components.assign(static_cast<size_t>(order) + 1, RationalFunction(0));
    tc.components[0] = RationalFunction(1);
    for (int j = 2; j <= order; ++j)
        tc.components[static_cast<size_t>(j)] = RationalFunction(rnd_poly(coeff_degree));
    return recompose(tc);
}

WeightedDiffOp self_adjoint_oper(int n, std::vector<std::pair<int, RationalFunction>> comps) {
    TensorComponents<RationalFunction> tc;
    tc.n = n;
    tc.components.assign(static_cast<size_t>(n) + 1, RationalFunction(0));
    tc.components[0] = RationalFunction(1);
    for (auto& [j, w] : comps) tc.components[static_cast<size_t>(j)] = std::move(w);
    return recompose(tc);
}

WeightedDiffOp transpose_oracle(const WeightedDiffOp& d) {
    HalfInteger w(0);
    WeightedDiffOp ddz(1, w, w, {RationalFunction(0), RationalFunction(1)});
    std::vector<RationalFunction> total(static_cast<size_t>(d.order) + 1, RationalFunction(0));
    for (int k = 0; k <= d.order; ++k) {
        WeightedDiffOp term(0, w, w, {d.coeff(k)});
        for (int i = 0; i < k; ++i) term = compose(ddz, term);
        Rational sgn((k % 2 == 0) ? 1 : -1);
        for (int m = 0; m <= term.order; ++m) total[static_cast<size_t>(m)] += sgn * term.coeff(m);
    }
    return WeightedDiffOp(d.order, d.source_weight, d.target_weight, std::move(total));
}

std::vector<RationalFunction> moebius_maps() {
    const long coeffs[][4] = {{1, 1, 0, 1},  {2, 0, 0, 1},  {0, 1, 1, 0},  {1, 0, 1, 1},
                              {1, 2, 3, 1},  {2, -1, 1, 1}, {1, -2, 0, 1}, {3, 1, 1, 2},
                              {1, 0, -1, 1}, {0, -1, 1, 2}, {2, 1, -1, 1}, {1, 3, 2, 1},
                              {-1, 1, 1, 1}, {1, 1, -2, 1}, {2, 3, 1, -1}, {0, 2, 1, 1},
                              {1, -1, 1, 2}, {3, 0, 1, 1},  {1, 2, -1, 2}, {2, 1, 1, 0}};
    std::vector<RationalFunction> out;
    RationalFunction zvar = RationalFunction::variable();
    for (const auto& m : coeffs)
        out.push_back((Rational(m[0]) * zvar + RationalFunction(Rational(m[1]))) /
                      (Rational(m[2]) * zvar + RationalFunction(Rational(m[3]))));
    return out;
}

TruncatedSeries schwarzian_reference(const TruncatedSeries& phi) {
    TruncatedSeries p1 = phi.derivative();
    TruncatedSeries p2 = p1.derivative();
    TruncatedSeries p3 = p2.derivative();
    TruncatedSeries r = p2.truncate(p3.order()) / p1.truncate(p3.order());
    return p3 / p1.truncate(p3.order()) - Rational(3, 2) * (r * r);
}

struct Case {
    int n;
    int r;
    WeightedDiffOp oper;
    ScalarOperBundle parts;
};

std::vector<Case> builder_cases() {
    RationalFunction zvar = RationalFunction::variable();
    auto w_trivial = [] {
        ScalarOperBundle p;
        p.w_rank = 1;
        p.w_form = BilinearForm(RfMatrix::identity(1), FormParity::Orthogonal);
        p.w_conn = ConnectionMatrix(RfMatrix(1, 1));
        return p;
    };
    auto w_rank2 = [] {
        ScalarOperBundle p;
        p.w_rank = 2;
        p.w_form = BilinearForm(RfMatrix::identity(2), FormParity::Orthogonal);
        RfMatrix a(2, 2);
        a.at(0, 1) = RationalFunction(1);
        a.at(1, 0) = RationalFunction(-1);
        p.w_conn = ConnectionMatrix(std::move(a));
        return p;
    };
    WeightedDiffOp op2 = self_adjoint_oper(2, {{2, zvar * zvar + RationalFunction(1)}});
    WeightedDiffOp op4 = self_adjoint_oper(4, {{2, zvar}, {4, zvar * zvar}});
    WeightedDiffOp op5 = self_adjoint_oper(5, {{2, zvar - RationalFunction(1)}, {4, RationalFunction(Rational(1, 3))}});

    std::vector<Case> cases;
    auto push = [&](int n, int r, const WeightedDiffOp& op, ScalarOperBundle w) {
        w.oper = op;
        cases.push_back({n, r, op, std::move(w)});
    };
    push(2, 1, op2, w_trivial());
    push(4, 1, op4, w_trivial());
    push(4, 2, op4, w_rank2());
    push(5, 1, op5, w_trivial());
    push(5, 2, op5, w_rank2());
    return cases;
}

struct Outcome {
    bool pass = true;
    std::string note;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            note = what;
        }
    }
};

// ---- criteria ----

Outcome criterion_adjoint() {
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    for (int trial = 0; trial < 50; ++trial) {
        int order = 1 + static_cast<int>(rng() % 6);
        WeightedDiffOp d = rnd_oper_op(order, 4);
        out.require(adjoint(adjoint(d)) == d, "adjoint involution failed");
        out.require(formal_transpose(d) == transpose_oracle(d), "transpose oracle disagrees");
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.require(secs < 5.0, "runtime budget of 5 s exceeded");
    std::ostringstream note;
    note.setf(std::ios::fixed);
    note.precision(2);
    note << "50 operators, " << secs << " s";
    if (out.pass) out.note = note.str();
    return out;
}

Outcome criterion_decomposition() {
    Outcome out;
    for (int trial = 0; trial < 50; ++trial) {
        int order = 1 + static_cast<int>(rng() % 6);
        WeightedDiffOp d = rnd_oper_op(order, 4);
        out.require(recompose(decompose(d)) == d, "recompose o decompose != id");
        TensorComponents<RationalFunction> tc;
        tc.n = order;
        for (int j = 0; j <= order; ++j) tc.components.push_back(RationalFunction(rnd_poly(3)));
        out.require(decompose(recompose(tc)).components == tc.components,
                    "decompose o recompose != id");
    }
    for (int trial = 0; trial < 50; ++trial) {
        int order = 2 + static_cast<int>(rng() % 5);
        WeightedDiffOp d = rnd_sl_op(order, 3);
        OperClass cls = classify(d);
        bool odd_free = (cls == OperClass::Sp || cls == OperClass::SO);
        out.require((adjoint(d) == d) == odd_free, "self-adjointness vs odd components mismatch");
        TensorComponents<RationalFunction> tc = decompose(d);
        for (int j = 3; j <= order; j += 2) tc.components[static_cast<size_t>(j)] = RationalFunction(0);
        WeightedDiffOp even_only = recompose(tc);
        out.require(adjoint(even_only) == even_only, "odd-free operator is not self-adjoint");
    }
    if (out.pass) out.note = "50 + 50 operators, exact";
    return out;
}

Outcome criterion_moebius() {
    Outcome out;
    std::vector<RationalFunction> maps = moebius_maps();
    for (int n = 2; n <= 4; ++n)
        for (int trial = 0; trial < 10; ++trial) {
            WeightedDiffOp d = rnd_sl_op(n, 2);
            auto w = decompose(d).components;
            for (const auto& phi : maps) {
                RationalFunction dphi = phi.derivative();
                auto wp = decompose(pullback(d, phi)).components;
                out.require(wp[0].is_one(), "pulled-back symbol is not 1");
                out.require(wp[1].is_zero(), "pulled-back sub-principal term is nonzero");
                for (int j = 2; j <= n; ++j)
                    out.require(wp[static_cast<size_t>(j)] ==
                                    dphi.pow(j) * w[static_cast<size_t>(j)].compose(phi),
                                "component does not transform by tensor weight");
            }
        }

    int order = 10;
    WeightedDiffOp d2 = rnd_sl_op(2, 3);
    RationalFunction w2 = decompose(d2).components[2];
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<Rational> c(static_cast<size_t>(order) + 1);
        c[1] = Rational(1 + static_cast<long>(rng() % 3));
        for (int k = 2; k <= order; ++k) c[static_cast<size_t>(k)] = rnd_rational(3, 2);
        TruncatedSeries phi(Rational(0), order, c);
        SeriesDiffOp pulled = pullback(d2, phi);
        auto comps = decompose(pulled).components;
        TruncatedSeries dphi = phi.derivative();
        TruncatedSeries expected = (dphi * dphi) * expand_at(w2, phi.value(), order).compose(phi);
        TruncatedSeries defect = comps[2] - expected.truncate(comps[2].order());
        TruncatedSeries half_s = Rational(1, 2) * schwarzian_reference(phi);
        out.require(TruncatedSeries::agree_through(defect, half_s.truncate(defect.order()), order - 3),
                    "formal w_2 defect is not the Schwarzian term");
    }
    if (out.pass) out.note = "20 maps x 10 operators x n in {2,3,4}; 5 formal changes";
    return out;
}

Outcome criterion_axioms(const std::vector<BOperData>& data) {
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    for (const auto& d : data) {
        ValidationReport rep = validate_boper(d);
        for (const auto& c : rep.checks)
            out.require(c.pass, "n=" + std::to_string(d.n()) + " r=" + std::to_string(d.r()) +
                                    ": check '" + c.name + "' failed");
        if (rep.pass) {
            out.require(rep.s_matrix == rep.s_matrix.transpose(), "composed form not symmetric");
            out.require(!determinant(rep.s_matrix).is_zero(), "composed form degenerate");
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.require(secs < 30.0, "runtime budget of 30 s exceeded");
    std::ostringstream note;
    note.setf(std::ios::fixed);
    note.precision(2);
    note << "(n,r) in {(2,1),(4,1),(4,2),(5,1),(5,2)}, " << secs << " s";
    if (out.pass) out.note = note.str();
    return out;
}

Outcome criterion_jets(const std::vector<BOperData>& data) {
    Outcome out;
    for (const auto& d : data) {
        JetCorrespondence jc = check_jet_correspondence(d);
        out.require(jc.invertible, "flat-jet matrix not invertible (n=" + std::to_string(d.n()) + ")");
        out.require(jc.carries_filtration, "filtration not carried to jets (n=" + std::to_string(d.n()) + ")");
    }
    for (int j = 1; j <= 6; ++j)
        for (int r = 1; r <= 2; ++r) {
            QMatrix trunc(j * r, (j + 1) * r);
            for (int i = 0; i < j * r; ++i) trunc.at(i, i) = Rational(1);
            out.require(kernel_basis(trunc).cols() == r, "jet truncation kernel rank is not r");
        }
    for (int v = 1; v <= 2; ++v)
        for (int w = 1; w <= 2; ++w)
            for (int n = 1; n <= 3; ++n) {
                RfMatrix conn(w, w);
                for (int i = 0; i < w; ++i)
                    for (int j = 0; j < w; ++j) conn.at(i, j) = RationalFunction(rnd_poly(2));
                out.require(check_jet_tensor_iso(v, w, conn, n, Rational(0)),
                            "jet-tensor matrix is singular");
            }
    if (out.pass) out.note = "flat-jet isomorphisms, kernel ranks, tensor factorization";
    return out;
}

Outcome criterion_roundtrip(const std::vector<Case>& cases, const std::vector<BOperData>& data) {
    Outcome out;
    for (size_t i = 0; i < cases.size(); ++i) {
        const BOperData& d = data[i];
        int order = d.default_order();
        QuotientOperator dq = extract_quotient_operator(d, order);
        SeriesDiffOp tau = tau_scalarize(dq, *d.nabla_Q);
        int target = order - cases[i].n;
        for (int k = 0; k <= tau.order; ++k) {
            TruncatedSeries want = expand_at(cases[i].oper.coeff(k), tau.coeff(k).base(), target);
            out.require(TruncatedSeries::agree_through(tau.coeff(k), want, target),
                        "round trip does not recover coefficient " + std::to_string(k) +
                            " (n=" + std::to_string(cases[i].n) + ", r=" + std::to_string(cases[i].r) + ")");
        }
        SPrimeResult sp = s_prime_form(d);
        int matched = quotient_selfadjoint_order(dq, sp.s_matrix);
        out.require(matched >= order - 2 * cases[i].n,
                    "extracted operator is not self-adjoint through truncation order");
    }
    if (out.pass) out.note = "scalarize o extract o build = id through order N-n";
    return out;
}

Outcome criterion_higgs(const std::vector<BOperData>& data) {
    Outcome out;
    for (const auto& d : data) {
        HiggsData h = higgs_from_boper(d);
        out.require(h.char_poly_ok, "characteristic polynomial is not x^(nr)");
        RfMatrix power = h.phi;
        for (int k = 1; k < h.n; ++k) power = power * h.phi;
        out.require(power.is_zero(), "Higgs field is not n-step nilpotent");
        long acc = 0;
        for (int i = 1; i <= h.n; ++i) {
            acc += h.graded_degrees[static_cast<size_t>(i - 1)];
            out.require(degree_and_slope(h.n, h.r, h.genus, h.deg_Q, i).deg_det_Ei == acc,
                        "det-bundle degree does not telescope");
        }
    }
    for (int n = 2; n <= 8; ++n)
        for (int r = 1; r <= 3; ++r)
            for (long g = 0; g <= 4; ++g)
                for (long dq = -2; dq <= 2; ++dq) {
                    DegreeData top = degree_and_slope(n, r, g, dq, n);
                    out.require(top.gap == Rational(static_cast<long>(n - 1) * (g - 1)),
                                "slope gap differs from (n-1)(g-1)");
                    long acc = 0;
                    for (int i = 1; i <= n; ++i) {
                        acc += dq + static_cast<long>(r) * (n - i) * (2 * g - 2);
                        out.require(degree_and_slope(n, r, g, dq, i).deg_det_Ei == acc,
                                    "det-bundle degree does not telescope on the grid");
                    }
                }
    if (out.pass) out.note = "nilpotent cone + full degree grid, exact";
    return out;
}

Outcome criterion_moduli() {
    Outcome out;
    out.require(moduli_dimension(2, 1, 2).dim_sum == 0, "length-2 summand is nonzero");
    struct Row {
        int n, r;
        long g, total;
    };
    const Row rows[] = {
        {2, 1, 2, 3},  {2, 1, 3, 6},  {2, 2, 2, 5},  {2, 2, 3, 10}, {4, 1, 2, 10}, {4, 1, 3, 20},
        {4, 2, 2, 12}, {4, 2, 3, 24}, {5, 1, 2, 10}, {5, 1, 3, 20}, {5, 2, 2, 12}, {5, 2, 3, 24},
        {6, 1, 2, 21}, {6, 1, 3, 42}, {6, 2, 2, 23}, {6, 2, 3, 46},
    };
    for (const auto& row : rows)
        out.require(moduli_dimension(row.n, row.r, row.g).total == row.total,
                    "dimension table mismatch at n=" + std::to_string(row.n));
    bool rejected = false;
    try {
        moduli_dimension(3, 1, 2);
    } catch (const CalcError& e) {
        rejected = (e.code() == Errc::UnsupportedN);
    }
    out.require(rejected, "length 3 was not rejected");
    if (out.pass) out.note = "hand-computed table on n in {2,4,5,6}, g in {2,3}, r in {1,2}";
    return out;
}

int run_cli(const std::string& cli, const std::string& args, const std::string& out_file) {
    std::string cmd = "\"" + cli + "\" " + args + " > \"" + out_file + "\" 2>/dev/null";
    int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion_cli(const std::string& cli, const std::string& scenario_dir) {
    Outcome out;
    if (cli.empty()) {
        out.require(false, "no CLI path given (--cli)");
        return out;
    }
    namespace fs = std::filesystem;
    fs::path tmp = fs::temp_directory_path() / "opercalc_acceptance";
    fs::create_directories(tmp);
    const char* commands[] = {"validate", "classify", "adjoint", "decompose", "higgs",
                              "degrees",  "moduli",   "extract", "build",     "roundtrip"};
    for (const char* cmd : commands) {
        std::string scenario = scenario_dir + "/" + cmd + ".json";
        std::string golden = scenario_dir + "/golden/" + cmd + ".json";
        std::string produced = (tmp / (std::string(cmd) + ".json")).string();
        int status = run_cli(cli, std::string(cmd) + " \"" + scenario + "\" --json", produced);
        out.require(status == 0, std::string("command '") + cmd + "' exited with " + std::to_string(status));
        out.require(slurp(produced) == slurp(golden),
                    std::string("report for '") + cmd + "' differs from the golden file");
        int again = run_cli(cli, std::string(cmd) + " \"" + scenario + "\" --json",
                            (tmp / "again.json").string());
        out.require(again == 0 && slurp((tmp / "again.json").string()) == slurp(golden),
                    std::string("report for '") + cmd + "' is not deterministic");
    }

    // a failing check exits 1
    std::string failing = (tmp / "failing.json").string();
    {
        std::ofstream f(failing);
        f << R"({"command": "validate", "boper": {"parity": "symplectic", "n": 2, "r": 1,
             "form": [["0","1"],["-1","0"]], "connection": [["1","0"],["0","1"]],
             "filtration": [[["0","1"]],[["1","0"],["0","1"]]], "genus": 2, "deg_q": -1}})";
    }
    out.require(run_cli(cli, "validate \"" + failing + "\" --json", (tmp / "f.json").string()) == 1,
                "failing validation did not exit 1");

    // a malformed scenario exits 2
    std::string broken = (tmp / "broken.json").string();
    {
        std::ofstream f(broken);
        f << "{ not json";
    }
    out.require(run_cli(cli, "validate \"" + broken + "\" --json", (tmp / "b.json").string()) == 2,
                "parse error did not exit 2");
    if (out.pass) out.note = "10 golden reports byte-identical; exit codes 0/1/2";
    return out;
}

} // namespace

int main(int argc, char** argv) {
    std::string cli, scenario_dir = "scenarios";
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
        if (std::string(argv[i]) == "--scenarios") scenario_dir = argv[i + 1];
    }

    std::vector<Case> cases = builder_cases();
    std::vector<BOperData> data;
    for (const auto& c : cases) data.push_back(build_boper_from_parts(c.parts, 2));

    struct Line {
        const char* name;
        std::function<Outcome()> run;
    };
    std::vector<Line> lines = {
        {"adjoint calculus", [] { return criterion_adjoint(); }},
        {"decomposition and self-adjointness", [] { return criterion_decomposition(); }},
        {"Moebius covariance and Schwarzian defect", [] { return criterion_moebius(); }},
        {"filtered-datum axioms", [&] { return criterion_axioms(data); }},
        {"jet correspondence", [&] { return criterion_jets(data); }},
        {"round trip and self-adjoint extraction", [&] { return criterion_roundtrip(cases, data); }},
        {"Higgs nilpotency and degree ledger", [&] { return criterion_higgs(data); }},
        {"parameter-space dimensions", [] { return criterion_moduli(); }},
        {"CLI golden reports and exit codes", [&] { return criterion_cli(cli, scenario_dir); }},
    };

    bool all = true;
    for (size_t i = 0; i < lines.size(); ++i) {
        Outcome out;
        try {
            out = lines[i].run();
        } catch (const std::exception& e) {
            out.pass = false;
            out.note = std::string("exception: ") + e.what();
        }
        all = all && out.pass;
        std::printf("criterion %zu (%s): %s%s%s\n", i + 1, lines[i].name,
                    out.pass ? "PASS" : "FAIL", out.note.empty() ? "" : " - ",
                    out.note.c_str());
    }
    return all ? 0 : 1;
}
