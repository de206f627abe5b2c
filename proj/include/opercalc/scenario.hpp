/*
   Copyright 2026 The opercalc authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef OPERCALC_SCENARIO_HPP
#define OPERCALC_SCENARIO_HPP

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "opercalc.hpp"

namespace opercalc {

using ordered_json = nlohmann::ordered_json;

struct ScenarioOptions {
    std::optional<int> order;
    std::optional<Rational> base_point;
    bool check_all = false;
};

/// One executed scenario: named checks plus command-specific data. The pass
/// flag is the conjunction of the checks (true for pure computations).
struct Report {
    std::string command;
    std::vector<CheckItem> checks;
    ordered_json data = ordered_json::object();
    bool pass = true;

    void add_check(const std::string& name, bool ok, const std::string& residual) {
        checks.push_back({name, ok, residual});
        pass = pass && ok;
    }
};

namespace scenario_detail {

[[noreturn]] inline void parse_fail(const std::string& where, const std::string& what) {
    fail(Errc::ParseError, where + ": " + what);
}

inline const ordered_json& field(const ordered_json& j, const std::string& key,
                                 const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) parse_fail(where, "missing field '" + key + "'");
    return *it;
}

inline long int_field(const ordered_json& j, const std::string& key, const std::string& where) {
    const ordered_json& v = field(j, key, where);
    if (!v.is_number_integer()) parse_fail(where, "field '" + key + "' must be an integer");
    return v.get<long>();
}

inline RationalFunction rf_value(const ordered_json& v, const std::string& where) {
    if (v.is_number_integer()) return RationalFunction(Rational(v.get<long>()));
    if (!v.is_string()) parse_fail(where, "expected a rational-function string");
    return parse_rf(v.get<std::string>());
}

inline RfMatrix matrix_field(const ordered_json& j, const std::string& key,
                             const std::string& where) {
    const ordered_json& rows = field(j, key, where);
    if (!rows.is_array() || rows.empty()) parse_fail(where, "field '" + key + "' must be a matrix");
    int nrows = static_cast<int>(rows.size());
    int ncols = static_cast<int>(rows[0].size());
    RfMatrix m(nrows, ncols);
    for (int i = 0; i < nrows; ++i) {
        if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != ncols)
            parse_fail(where, "ragged matrix in '" + key + "'");
        for (int c = 0; c < ncols; ++c)
            m.at(i, c) = rf_value(rows[static_cast<size_t>(i)][static_cast<size_t>(c)],
                                  where + "." + key);
    }
    return m;
}

inline WeightedDiffOp oper_field(const ordered_json& j, const std::string& where) {
    const ordered_json& arr = field(j, "oper", where);
    if (!arr.is_array() || arr.size() < 2) parse_fail(where, "'oper' must list coefficients a_0..a_n");
    std::vector<RationalFunction> coeffs;
    for (const auto& v : arr) coeffs.push_back(rf_value(v, where + ".oper"));
    int order = static_cast<int>(coeffs.size()) - 1;
    return make_oper_op(order, std::move(coeffs));
}

inline BOperData boper_field(const ordered_json& j, const ScenarioOptions& opts,
                             const std::string& where) {
    const ordered_json& b = field(j, "boper", where);
    std::string parity_name = field(b, "parity", where + ".boper").get<std::string>();
    FormParity parity;
    if (parity_name == "orthogonal") parity = FormParity::Orthogonal;
    else if (parity_name == "symplectic") parity = FormParity::Symplectic;
    else parse_fail(where, "parity must be 'orthogonal' or 'symplectic'");

    int n = static_cast<int>(int_field(b, "n", where + ".boper"));
    int r = static_cast<int>(int_field(b, "r", where + ".boper"));
    RfMatrix form = matrix_field(b, "form", where + ".boper");
    RfMatrix conn = matrix_field(b, "connection", where + ".boper");

    const ordered_json& steps_json = field(b, "filtration", where + ".boper");
    if (!steps_json.is_array() || static_cast<int>(steps_json.size()) != n)
        parse_fail(where, "'filtration' must list one generator set per step");
    std::vector<RfMatrix> steps;
    for (int i = 0; i < n; ++i) {
        const ordered_json& gens = steps_json[static_cast<size_t>(i)];
        if (!gens.is_array() || gens.empty()) parse_fail(where, "empty filtration step");
        int ncols = static_cast<int>(gens.size());
        RfMatrix step(n * r, ncols);
        for (int c = 0; c < ncols; ++c) {
            const ordered_json& col = gens[static_cast<size_t>(c)];
            if (static_cast<int>(col.size()) != n * r)
                parse_fail(where, "filtration generator has the wrong length");
            for (int row = 0; row < n * r; ++row)
                step.at(row, c) = rf_value(col[static_cast<size_t>(row)], where + ".filtration");
        }
        steps.push_back(std::move(step));
    }

    long genus = int_field(b, "genus", where + ".boper");
    long deg_q = int_field(b, "deg_q", where + ".boper");
    Rational base = opts.base_point.value_or(
        b.contains("base_point") ? Rational::from_string(b["base_point"].get<std::string>())
                                 : Rational(0));
    std::optional<RfMatrix> nabla;
    if (b.contains("nabla_q")) nabla = matrix_field(b, "nabla_q", where + ".boper");

    return BOperData(BilinearForm(std::move(form), parity), Filtration(n, r, std::move(steps)),
                     ConnectionMatrix(std::move(conn)), genus, deg_q, base, std::move(nabla));
}

inline ScalarOperBundle parts_field(const ordered_json& j, const std::string& where) {
    ScalarOperBundle parts;
    parts.oper = oper_field(j, where);
    if (j.contains("w")) {
        const ordered_json& w = field(j, "w", where);
        parts.w_rank = static_cast<int>(int_field(w, "rank", where + ".w"));
        parts.w_form = BilinearForm(matrix_field(w, "form", where + ".w"), FormParity::Orthogonal);
        parts.w_conn = ConnectionMatrix(matrix_field(w, "connection", where + ".w"));
    } else {
        parts.w_rank = 1;
        parts.w_form = BilinearForm(RfMatrix::identity(1), FormParity::Orthogonal);
        parts.w_conn = ConnectionMatrix(RfMatrix(1, 1));
    }
    return parts;
}

inline ordered_json matrix_json(const RfMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m.at(i, c).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ordered_json series_matrix_json(const SeriesMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m.at(i, c).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ordered_json boper_json(const BOperData& d) {
    ordered_json out = ordered_json::object();
    out["parity"] = parity_name(d.form.parity);
    out["n"] = d.n();
    out["r"] = d.r();
    out["form"] = matrix_json(d.form.mat);
    out["connection"] = matrix_json(d.conn.A);
    ordered_json filt = ordered_json::array();
    for (const auto& step : d.filt.steps) {
        ordered_json gens = ordered_json::array();
        for (int c = 0; c < step.cols(); ++c) {
            ordered_json col = ordered_json::array();
            for (int i = 0; i < step.rows(); ++i) col.push_back(step.at(i, c).str());
            gens.push_back(std::move(col));
        }
        filt.push_back(std::move(gens));
    }
    out["filtration"] = std::move(filt);
    out["genus"] = d.genus;
    out["deg_q"] = d.deg_Q;
    out["base_point"] = d.base_point.str();
    if (d.nabla_Q) out["nabla_q"] = matrix_json(*d.nabla_Q);
    return out;
}

inline void append_validation(Report& rep, const ValidationReport& v) {
    for (const auto& c : v.checks) rep.add_check(c.name, c.pass, c.detail);
}

inline void oper_extra_checks(Report& rep, const WeightedDiffOp& d) {
    rep.add_check("adjoint_involution", adjoint(adjoint(d)) == d, "");
    rep.add_check("decompose_recompose", recompose(decompose(d)) == d, "");
}

} // namespace scenario_detail

/// Executes one scenario document against the library.
inline Report run_scenario_json(const ordered_json& doc, const ScenarioOptions& opts) {
    using namespace scenario_detail;
    Report rep;
    if (!doc.is_object()) parse_fail("scenario", "document must be a JSON object");
    rep.command = field(doc, "command", "scenario").get<std::string>();
    const std::string& cmd = rep.command;

    if (cmd == "classify") {
        WeightedDiffOp d = oper_field(doc, cmd);
        OperClass cls = classify(d);
        rep.data["class"] = oper_class_name(cls);
        ordered_json comps = ordered_json::array();
        for (const auto& w : decompose(d).components) comps.push_back(w.str());
        rep.data["components"] = std::move(comps);
        if (opts.check_all) oper_extra_checks(rep, d);
    } else if (cmd == "adjoint") {
        WeightedDiffOp d = oper_field(doc, cmd);
        WeightedDiffOp star = adjoint(d);
        ordered_json coeffs = ordered_json::array();
        for (const auto& c : star.coeffs) coeffs.push_back(c.str());
        rep.data["adjoint"] = std::move(coeffs);
        rep.add_check("involution", adjoint(star) == d, "");
        rep.add_check("symbol_preserved", symbol(star) == symbol(d), "");
    } else if (cmd == "decompose") {
        WeightedDiffOp d = oper_field(doc, cmd);
        TensorComponents<RationalFunction> tc = decompose(d);
        ordered_json comps = ordered_json::array();
        for (const auto& w : tc.components) comps.push_back(w.str());
        rep.data["components"] = std::move(comps);
        rep.add_check("recompose_roundtrip", recompose(tc) == d, "");
        if (opts.check_all) oper_extra_checks(rep, d);
    } else if (cmd == "validate") {
        BOperData d = boper_field(doc, opts, cmd);
        ValidationReport v = validate_boper(d, opts.order.value_or(-1));
        append_validation(rep, v);
        if (v.pass) rep.data["s_matrix"] = matrix_json(v.s_matrix);
        rep.data["witness_point"] = v.witness_point.str();
        if (opts.check_all) {
            JetCorrespondence jc = check_jet_correspondence(d, opts.order.value_or(-1));
            rep.add_check("jet_map_invertible", jc.invertible, "at z = " + jc.point.str());
            rep.add_check("jet_map_carries_filtration", jc.carries_filtration, "");
        }
    } else if (cmd == "higgs") {
        BOperData d = boper_field(doc, opts, cmd);
        HiggsData h = higgs_from_boper(d);
        rep.data["n"] = h.n;
        rep.data["r"] = h.r;
        rep.data["phi"] = matrix_json(h.phi);
        rep.data["graded_degrees"] = h.graded_degrees;
        rep.data["stable"] = h.stable;
        rep.add_check("char_poly_pure", h.char_poly_ok, "det(xI - Phi) = x^(nr)");
    } else if (cmd == "degrees") {
        int n = static_cast<int>(int_field(doc, "n", cmd));
        int r = static_cast<int>(int_field(doc, "r", cmd));
        long g = int_field(doc, "genus", cmd);
        long dq = int_field(doc, "deg_q", cmd);
        ordered_json rows = ordered_json::array();
        for (int i = 1; i <= n; ++i) {
            DegreeData dd = degree_and_slope(n, r, g, dq, i);
            ordered_json row = ordered_json::object();
            row["i"] = i;
            row["deg_det_Ei"] = dd.deg_det_Ei;
            rows.push_back(std::move(row));
        }
        DegreeData top = degree_and_slope(n, r, g, dq, n);
        rep.data["table"] = std::move(rows);
        rep.data["slope_E"] = top.slope_E.str();
        rep.data["slope_Q"] = top.slope_Q.str();
        rep.data["gap"] = top.gap.str();
        rep.add_check("gap_closed_form", top.gap == Rational((static_cast<long>(n) - 1) * (g - 1)),
                      "(n-1)(g-1)");
    } else if (cmd == "moduli") {
        int n = static_cast<int>(int_field(doc, "n", cmd));
        int r = static_cast<int>(int_field(doc, "r", cmd));
        long g = int_field(doc, "genus", cmd);
        ModuliDims m = moduli_dimension(n, r, g);
        rep.data["dim_C"] = m.dim_C;
        rep.data["dim_P"] = m.dim_P;
        rep.data["dim_sum"] = m.dim_sum;
        rep.data["total"] = m.total;
    } else if (cmd == "build") {
        ScalarOperBundle parts = parts_field(doc, cmd);
        long genus = int_field(doc, "genus", cmd);
        long deg_w = doc.contains("deg_w") ? doc["deg_w"].get<long>() : 0;
        BOperData d = build_boper_from_parts(parts, genus, deg_w);
        rep.data["boper"] = boper_json(d);
        ValidationReport v = validate_boper(d, opts.order.value_or(-1));
        rep.add_check("constructed_datum_validates", v.pass, "");
    } else if (cmd == "extract") {
        BOperData d = boper_field(doc, opts, cmd);
        int order = opts.order.value_or(d.default_order());
        QuotientOperator dq = extract_quotient_operator(d, order);
        ordered_json coeffs = ordered_json::array();
        for (const auto& m : dq.coeffs) coeffs.push_back(series_matrix_json(m));
        rep.data["z0"] = dq.z0.str();
        rep.data["coefficients"] = std::move(coeffs);
        SPrimeResult sp = s_prime_form(d);
        int matched = quotient_selfadjoint_order(dq, sp.s_matrix);
        int needed = dq.coeffs[0].at(0, 0).order() - dq.order;
        rep.add_check("self_adjoint", matched >= needed,
                      "defect vanishes through order " + std::to_string(matched));
    } else if (cmd == "roundtrip") {
        ScalarOperBundle parts = parts_field(doc, cmd);
        long genus = int_field(doc, "genus", cmd);
        BOperData d = build_boper_from_parts(parts, genus);
        int order = opts.order.value_or(d.default_order());
        QuotientOperator dq = extract_quotient_operator(d, order);
        if (!d.nabla_Q) fail(Errc::MalformedInput, "constructed datum lacks a quotient connection");
        SeriesDiffOp tau = tau_scalarize(dq, *d.nabla_Q);
        int target = order - parts.oper.order;
        bool all = true;
        ordered_json recovered = ordered_json::array();
        for (int k = 0; k <= tau.order; ++k) {
            recovered.push_back(tau.coeff(k).str());
            TruncatedSeries want = expand_at(parts.oper.coeff(k), tau.coeff(k).base(), target);
            all = all && TruncatedSeries::agree_through(tau.coeff(k), want, target);
        }
        rep.data["recovered"] = std::move(recovered);
        rep.data["compared_through_order"] = target;
        rep.add_check("scalarization_recovers_input", all, "");
        SPrimeResult sp = s_prime_form(d);
        int matched = quotient_selfadjoint_order(dq, sp.s_matrix);
        rep.add_check("self_adjoint", matched >= order - 2 * parts.oper.order,
                      "defect vanishes through order " + std::to_string(matched));
    } else {
        parse_fail("scenario", "unknown command '" + cmd + "'");
    }
    return rep;
}

inline Report run_scenario_file(const std::string& path, const ScenarioOptions& opts) {
    std::ifstream in(path);
    if (!in) fail(Errc::ParseError, "cannot open scenario file '" + path + "'");
    ordered_json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::ParseError, std::string("invalid JSON: ") + e.what());
    }
    return run_scenario_json(doc, opts);
}

inline ordered_json report_json(const Report& rep) {
    ordered_json out = ordered_json::object();
    out["command"] = rep.command;
    ordered_json checks = ordered_json::array();
    for (const auto& c : rep.checks) {
        ordered_json item = ordered_json::object();
        item["name"] = c.name;
        item["pass"] = c.pass;
        item["residual"] = c.detail;
        checks.push_back(std::move(item));
    }
    out["checks"] = std::move(checks);
    out["data"] = rep.data;
    out["pass"] = rep.pass;
    return out;
}

inline std::string render_report_json(const Report& rep) { return report_json(rep).dump(2) + "\n"; }

inline std::string render_report_text(const Report& rep, double elapsed_seconds) {
    std::ostringstream out;
    out << "command: " << rep.command << "\n";
    for (const auto& c : rep.checks) {
        out << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.name;
        if (!c.detail.empty()) out << " (" << c.detail << ")";
        out << "\n";
    }
    if (!rep.data.empty()) out << "data: " << rep.data.dump(2) << "\n";
    out << "overall: " << (rep.pass ? "pass" : "FAIL") << "\n";
    out << "elapsed: " << elapsed_seconds << " s\n";
    return out.str();
}

} // namespace opercalc

#endif
