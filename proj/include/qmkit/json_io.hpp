#ifndef QMKIT_JSON_IO_HPP
#define QMKIT_JSON_IO_HPP

// JSON (de)serialization. Rationals are strings ("n" or "n/d"), never floats.

#include <fstream>
#include <string>

#include <json.hpp>

#include "qm_family.hpp"

namespace qmkit::json_io {

using json = nlohmann::ordered_json;

inline json rat(const Rat& r) { return to_string(r); }

inline json integer(const Int& n)
{
    if (n.fits_slong_p()) return n.get_si();
    return n.get_str();
}

inline Int to_int(const json& j)
{
    if (j.is_number_integer()) return Int(std::to_string(j.get<long long>()));
    if (j.is_string()) {
        Rat r = parse_rat(j.get<std::string>());
        if (den(r) != 1) throw InputError("expected an integer, got " + j.dump());
        return num(r);
    }
    throw InputError("expected an integer, got " + j.dump());
}

inline Rat to_rat(const json& j)
{
    if (j.is_number_integer()) return Rat(std::to_string(j.get<long long>()));
    if (j.is_string()) return parse_rat(j.get<std::string>());
    throw InputError("expected a rational (integer or string), got " + j.dump());
}

inline json poly(const IntPoly& p)
{
    json a = json::array();
    for (const auto& c : p) a.push_back(integer(c));
    return a;
}

inline IntPoly to_poly(const json& j)
{
    if (!j.is_array() || j.empty()) throw InputError("expected a nonempty coefficient array");
    IntPoly out;
    for (const auto& c : j) out.push_back(to_int(c));
    return out;
}

inline json square_classes(const std::vector<SquareClass>& v)
{
    json a = json::array();
    for (const auto& d : v) a.push_back(integer(d.rep()));
    return a;
}

inline std::vector<SquareClass> to_square_classes(const json& j)
{
    if (!j.is_array()) throw InputError("expected an array of square classes");
    std::vector<SquareClass> out;
    for (const auto& x : j) out.push_back(SquareClass::of(to_rat(x)));
    return out;
}

inline json quad(const QuadElem& x) { return {{"m", integer(x.m.rep())}, {"a", rat(x.a)}, {"b", rat(x.b)}}; }

inline json multiquad(const MultiquadElem& x)
{
    json c = json::array();
    for (const auto& v : x.coords()) c.push_back(rat(v));
    return {{"field", square_classes(x.field()->gens())}, {"coords", c}, {"str", x.str()}};
}

inline json brauer(const BrauerClass2& b)
{
    json a = json::array();
    for (const auto& s : b.strs()) a.push_back(s);
    return a;
}

inline json degree(const DegreeMap& d)
{
    json terms = json::array();
    for (const auto& t : d.terms()) terms.push_back({{"t", integer(t.t.rep())}, {"d", integer(t.d.rep())}});
    return {{"terms", terms}, {"str", d.str()}};
}

inline json coords(const SignCoords& c)
{
    json a = json::array();
    for (int v : c) a.push_back(v);
    return a;
}

inline json sign_basis_names(const MultiquadGroup& g)
{
    json a = json::array();
    for (const auto& e : sign_basis(g)) a.push_back(basis_elem_str(g, e));
    return a;
}

inline json cocycle(const CocycleTable& c)
{
    json rows = json::array();
    const unsigned N = c.group().order();
    for (unsigned s = 0; s < N; ++s) {
        json row = json::array();
        for (unsigned t = 0; t < N; ++t) row.push_back(rat(c(s, t)));
        rows.push_back(row);
    }
    return {{"field", square_classes(c.group().gens())}, {"values", rows}};
}

/// {"field": [d1,...], "values": [[...], ...]} with rows/columns indexed by sign bitmask.
inline CocycleTable to_cocycle(const json& j)
{
    if (!j.is_object() || !j.contains("field") || !j.contains("values"))
        throw InputError("cocycle JSON needs \"field\" and \"values\"");
    MultiquadGroup g(to_square_classes(j.at("field")));
    const auto& rows = j.at("values");
    const unsigned N = g.order();
    if (!rows.is_array() || rows.size() != N) throw InputError("cocycle JSON: expected " + std::to_string(N) + " rows");
    std::vector<Rat> vals;
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != N) throw InputError("cocycle JSON: ragged row");
        for (const auto& v : row) vals.push_back(to_rat(v));
    }
    return CocycleTable(g, vals);
}

inline json factor(const EtaleFactor& f)
{
    return {{"generators", square_classes(f.generators)}, {"multiplicity", f.multiplicity}, {"field", f.str()}};
}

inline json factor_report(const FactorReport& r)
{
    json j = factor(r.factor);
    j["splits"] = r.splits;
    j["matrix_size"] = r.matrix_size;
    return j;
}

inline json analyze_report(const AnalyzeReport& rep)
{
    json mf = {{"k_Z", square_classes(rep.moduli.k_Z)},   {"k_R2", square_classes(rep.moduli.k_R2)},
               {"k_R3", square_classes(rep.moduli.k_R3)}, {"k_R6", square_classes(rep.moduli.k_R6)},
               {"k_O", square_classes(rep.moduli.k_O)}};
    json cands = json::array();
    for (const auto& c : rep.candidates) {
        json jc = {{"coords", coords(c.coords)},
                   {"class", c.label},
                   {"symmetric", c.symmetric},
                   {"inflation", brauer(inflate_sign_to_brauer(rep.group, c.coords))}};
        if (c.symmetric) {
            json fs = json::array();
            for (const auto& r : c.restriction) fs.push_back(factor_report(r));
            jc["decomposition"] = fs;
            jc["pattern"] = c.pattern;
        }
        cands.push_back(jc);
    }
    return {{"moduli_fields", mf},
            {"absolute_class", {{"sign", brauer(rep.absolute.sign)}, {"degree", degree(rep.absolute.degree)}}},
            {"K_P", square_classes(rep.K_P)},
            {"K", square_classes(rep.group.gens())},
            {"sign_basis", sign_basis_names(rep.group)},
            {"candidates", cands},
            {"verdict", verdict_str(rep.verdict.verdict)},
            {"diagnostic", rep.verdict.diagnostic}};
}

// ---------------------------------------------------------------------------
// Fixtures

inline json read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

inline FixtureTable to_fixture(const json& j)
{
    FixtureTable t;
    t.name = j.value("name", "");
    t.provenance = j.value("provenance", "");
    if (!j.contains("rows") || !j.at("rows").is_array()) throw InputError("fixture needs a \"rows\" array");
    for (const auto& r : j.at("rows")) {
        FixtureRow row;
        row.p = to_int(r.at("p")).get_ui();
        row.provenance = r.value("provenance", "");
        for (const auto& f : r.at("factors")) row.factors.push_back({to_poly(f.at("coeffs")), f.value("multiplicity", 1u)});
        t.rows.push_back(row);
    }
    return t;
}

inline FixtureTable load_fixture(const std::string& path) { return to_fixture(read_file(path)); }

inline json compare_report(const CompareReport& rep)
{
    json rows = json::array();
    for (const auto& r : rep.rows) {
        json jr = {{"p", r.p}, {"status", r.status}};
        if (!r.expected.empty()) jr["expected"] = poly_str(r.expected);
        if (!r.computed.empty()) jr["computed"] = poly_str(r.computed);
        rows.push_back(jr);
    }
    return {{"pass", rep.pass}, {"rows", rows}};
}

/// {"label", "level", "field": [d...], "nebentypus": "trivial", "coefficients": [{"p", "a_p", "provenance"}]}
inline NewformData to_newform(const json& j)
{
    NewformData nf;
    nf.label = j.value("label", "");
    nf.level = j.value("level", "");
    nf.field = make_field(to_square_classes(j.at("field")));
    if (j.value("nebentypus", "trivial") != "trivial") throw InputError("newform fixture: only trivial nebentypus is stored");
    for (const auto& c : j.at("coefficients")) {
        std::uint64_t p = to_int(c.at("p")).get_ui();
        nf.ap[p] = parse_multiquad(c.at("a_p").get<std::string>(), nf.field);
        nf.provenance[p] = c.value("provenance", "");
    }
    return nf;
}

inline NewformData load_newform(const std::string& path) { return to_newform(read_file(path)); }

} // namespace qmkit::json_io

#endif // QMKIT_JSON_IO_HPP
