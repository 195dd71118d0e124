#include "json_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "convex.hpp"
#include "error.hpp"
#include "zoo.hpp"

namespace optw {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

Vec parse_vec(const json& j) {
    OPTW_REQUIRE(j.is_array(), ErrorCode::parse_error, "expected a numeric array");
    Vec v;
    for (const auto& e : j) v.push_back(e.get<double>());
    return v;
}

std::vector<Vec> parse_vec_list(const json& j) {
    OPTW_REQUIRE(j.is_array(), ErrorCode::parse_error, "expected an array of arrays");
    std::vector<Vec> out;
    for (const auto& e : j) out.push_back(parse_vec(e));
    return out;
}

Mat parse_matrix(const json& j) {
    auto rows = parse_vec_list(j);
    return Mat::from_rows(rows);
}

ordered_json vec_to_json(const Vec& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(x);
    return a;
}

TensorMode parse_mode(const std::string& s) {
    if (s == "min_tensor") return TensorMode::min_tensor;
    if (s == "max_tensor") return TensorMode::max_tensor;
    if (s == "quantum") return TensorMode::quantum;
    throw Error(ErrorCode::parse_error, "unknown tensor mode: " + s);
}

} // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    OPTW_REQUIRE(in.good(), ErrorCode::io_error, "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    OPTW_REQUIRE(out.good(), ErrorCode::io_error, "cannot write " + path);
    out << content;
}

ordered_json theory_to_json(const Theory& t) {
    ordered_json j;
    j["name"] = t.name;
    j["embed_dim"] = t.dim;
    j["unit"] = vec_to_json(t.unit);
    ordered_json verts = ordered_json::array();
    for (const auto& v : t.vertices) verts.push_back(vec_to_json(v));
    j["extremal_states"] = std::move(verts);
    j["effect_mode"] = t.effect_mode == EffectMode::explicit_list ? "explicit" : "unrestricted";
    if (t.effect_mode == EffectMode::explicit_list) {
        ordered_json effs = ordered_json::array();
        for (const auto& l : t.extremal_effects) effs.push_back(vec_to_json(l));
        j["extremal_effects"] = std::move(effs);
    }
    j["metadata"] = t.metadata;
    if (t.exact_quantum()) {
        j["exact"] = true;
        j["hilbert_dim"] = t.quantum->hilbert_dim();
        ordered_json basis = ordered_json::array();
        for (const auto& b : t.quantum->basis()) {
            ordered_json bm = ordered_json::array();
            for (int r = 0; r < b.rows; ++r) {
                ordered_json row = ordered_json::array();
                for (int c = 0; c < b.cols; ++c)
                    row.push_back(ordered_json::array({b.at(r, c).real(), b.at(r, c).imag()}));
                bm.push_back(std::move(row));
            }
            basis.push_back(std::move(bm));
        }
        j["hermitian_basis"] = std::move(basis);
    }
    if (t.sphere()) j["sphere_dim"] = *t.sphere_dim;
    return j;
}

TheoryBundle theory_from_json(const json& j) {
    auto t = std::make_shared<Theory>();
    t->name = j.at("name").get<std::string>();
    t->dim = j.at("embed_dim").get<int>();
    t->unit = parse_vec(j.at("unit"));
    if (j.contains("extremal_states")) t->vertices = parse_vec_list(j.at("extremal_states"));
    std::string mode = j.value("effect_mode", "unrestricted");
    if (mode == "explicit") {
        t->effect_mode = EffectMode::explicit_list;
        t->extremal_effects = parse_vec_list(j.at("extremal_effects"));
    } else {
        OPTW_REQUIRE(mode == "unrestricted", ErrorCode::parse_error,
                     "unknown effect_mode: " + mode);
    }
    if (j.contains("metadata")) t->metadata = j.at("metadata");

    if (j.value("exact", false)) {
        int d = j.at("hilbert_dim").get<int>();
        std::vector<CMat> basis;
        for (const auto& bm : j.at("hermitian_basis")) {
            CMat b(d, d);
            int r = 0;
            for (const auto& row : bm) {
                int c = 0;
                for (const auto& e : row) {
                    b.at(r, c) = cdouble(e.at(0).get<double>(), e.at(1).get<double>());
                    ++c;
                }
                ++r;
            }
            basis.push_back(std::move(b));
        }
        t->quantum = QuantumSystem::make_with_basis(d, std::move(basis));
    }
    if (j.contains("sphere_dim")) t->sphere_dim = j.at("sphere_dim").get<int>();

    // Structural checks only: semantic invariants (vertex minimality,
    // normalization, instrument completeness) are the job of `verify`, which
    // reports violations instead of refusing to load the file.
    OPTW_REQUIRE(static_cast<int>(t->unit.size()) == t->dim, ErrorCode::parse_error,
                 "theory: unit length mismatch");
    for (const auto& v : t->vertices)
        OPTW_REQUIRE(static_cast<int>(v.size()) == t->dim, ErrorCode::parse_error,
                     "theory: vertex length mismatch");
    for (const auto& l : t->extremal_effects)
        OPTW_REQUIRE(static_cast<int>(l.size()) == t->dim, ErrorCode::parse_error,
                     "theory: effect length mismatch");

    TheoryBundle bundle;
    bundle.theory = t;
    if (j.contains("observables")) {
        for (const auto& jo : j.at("observables")) {
            Observable obs;
            obs.theory = bundle.theory;
            obs.name = jo.value("name", "");
            for (auto& e : parse_vec_list(jo.at("elements"))) {
                OPTW_REQUIRE(static_cast<int>(e.size()) == t->dim, ErrorCode::parse_error,
                             "observable element length mismatch");
                obs.elements.push_back(Propensity{bundle.theory, std::move(e)});
            }
            bundle.observables.push_back(std::move(obs));
        }
    }
    if (j.contains("instruments")) {
        for (const auto& ji : j.at("instruments")) {
            Instrument instr;
            instr.theory = bundle.theory;
            instr.name = ji.value("name", "");
            for (const auto& jm : ji.at("matrices")) {
                Mat m = parse_matrix(jm);
                OPTW_REQUIRE(m.rows == t->dim && m.cols == t->dim, ErrorCode::parse_error,
                             "instrument matrix shape mismatch");
                instr.elements.push_back(Transformation{bundle.theory, std::move(m), ""});
            }
            if (ji.contains("labels"))
                for (const auto& l : ji.at("labels"))
                    instr.labels.push_back(l.get<std::string>());
            while (instr.labels.size() < instr.elements.size())
                instr.labels.push_back(std::to_string(instr.labels.size()));
            bundle.instruments.push_back(std::move(instr));
        }
    }
    return bundle;
}

TheoryBundle load_theory_file(const std::string& path) {
    json j = json::parse(read_text_file(path));
    return theory_from_json(j);
}

void save_theory_file(const Theory& t, const std::string& path) {
    write_text_file(path, theory_to_json(t).dump(2) + "\n");
}

TheoryBundle resolve_theory(const std::string& spec) {
    if (std::filesystem::exists(spec)) return load_theory_file(spec);
    TheoryBundle b;
    b.theory = builtin_theory(spec);
    return b;
}

namespace {

State joint_state_from_json(const json& js, const TheoryPtr& comp) {
    const CompositeInfo& ci = *comp->composite;
    if (js.contains("matrix")) {
        Mat m = parse_matrix(js.at("matrix"));
        OPTW_REQUIRE(m.rows == ci.left->dim && m.cols == ci.right->dim,
                     ErrorCode::parse_error, "joint state matrix shape mismatch");
        return State{comp, flatten(m)};
    }
    std::string preset = js.value("preset", "");
    if (preset == "bell") return bell_state(comp);
    if (preset == "product_chaotic")
        return product_state(chaotic_state(ci.left), chaotic_state(ci.right), comp);
    if (preset == "correlated_classical") {
        const int k = ci.left->dim;
        Mat m(k, k);
        for (int i = 0; i < k; ++i) m.at(i, i) = 1.0 / k;
        return State{comp, flatten(m)};
    }
    if (preset == "pr_box") {
        OPTW_REQUIRE(ci.left->dim == 3 && ci.right->dim == 3, ErrorCode::parse_error,
                     "pr_box preset needs square factors");
        Mat m(3, 3);
        m.at(0, 0) = 1.0;
        m.at(1, 1) = 1.0;
        m.at(1, 2) = 1.0;
        m.at(2, 1) = 1.0;
        m.at(2, 2) = -1.0;
        return State{comp, flatten(m)};
    }
    throw Error(ErrorCode::parse_error, "joint state needs a matrix or a known preset");
}

Instrument instrument_preset(const std::string& preset, const TheoryPtr& t) {
    if (preset == "qubit_z" || preset == "qubit_x") {
        OPTW_REQUIRE(t->exact_quantum() && t->quantum->hilbert_dim() == 2,
                     ErrorCode::parse_error, preset + " preset needs a qubit");
        const double r = 1.0 / std::sqrt(2.0);
        std::vector<std::vector<cdouble>> kets;
        if (preset == "qubit_z")
            kets = {{1.0, 0.0}, {0.0, 1.0}};
        else
            kets = {{r, r}, {r, -r}};
        return projective_instrument(t, kets, preset);
    }
    if (preset == "classical_indicators") {
        std::vector<Transformation> elements;
        for (int i = 0; i < t->dim; ++i) {
            Vec ind(t->dim, 0.0);
            ind[i] = 1.0;
            elements.push_back(
                measure_prepare(Propensity{t, ind}, State{t, t->vertices[i]},
                                "keep" + std::to_string(i)));
        }
        return make_instrument(t, std::move(elements), {}, preset);
    }
    if (preset == "gbit_x" || preset == "gbit_y") {
        int axis = preset == "gbit_x" ? 1 : 2;
        Vec plus(3, 0.0), minus(3, 0.0);
        plus[0] = 0.5;
        plus[axis] = 0.5;
        minus[0] = 0.5;
        minus[axis] = -0.5;
        Vec vp(3, 0.0), vm(3, 0.0);
        vp[0] = 1.0;
        vp[axis] = 1.0;
        vm[0] = 1.0;
        vm[axis] = -1.0;
        // edge midpoints are valid repreparation targets on the square
        std::vector<Transformation> elements;
        elements.push_back(measure_prepare(Propensity{t, plus}, State{t, vp}, "+"));
        elements.push_back(measure_prepare(Propensity{t, minus}, State{t, vm}, "-"));
        return make_instrument(t, std::move(elements), {"+", "-"}, preset);
    }
    throw Error(ErrorCode::parse_error, "unknown instrument preset: " + preset);
}

} // namespace

CompositeScenario load_composite_scenario(const std::string& path) {
    json j = json::parse(read_text_file(path));
    CompositeScenario sc;
    sc.name = j.value("name", std::filesystem::path(path).stem().string());
    sc.mode = parse_mode(j.value("mode", "min_tensor"));
    const auto& theories = j.at("theories");
    OPTW_REQUIRE(theories.is_array() && theories.size() == 2, ErrorCode::parse_error,
                 "scenario needs exactly two theories");
    TheoryPtr t1 = resolve_theory(theories.at(0).get<std::string>()).theory;
    TheoryPtr t2 = resolve_theory(theories.at(1).get<std::string>()).theory;
    sc.composite = composite_theory(t1, t2, sc.mode);
    sc.targets = j.value("targets", 20);

    if (j.contains("joint_states"))
        for (const auto& js : j.at("joint_states"))
            sc.joint_states.emplace_back(js.value("name", js.value("preset", "state")),
                                         joint_state_from_json(js, sc.composite));

    if (j.contains("instruments")) {
        for (const auto& ji : j.at("instruments")) {
            int party = ji.value("party", 2);
            OPTW_REQUIRE(party == 1 || party == 2, ErrorCode::parse_error,
                         "instrument party must be 1 or 2");
            const TheoryPtr& ft = party == 1 ? t1 : t2;
            std::string name = ji.value("name", ji.value("preset", "instr"));
            if (ji.value("raw", false)) {
                std::vector<Transformation> elements;
                for (const auto& jm : ji.at("matrices"))
                    elements.push_back(Transformation{ft, parse_matrix(jm), ""});
                sc.raw_instruments.emplace_back(name, std::move(elements));
                continue;
            }
            Instrument instr =
                ji.contains("preset")
                    ? instrument_preset(ji.at("preset").get<std::string>(), ft)
                    : [&] {
                          std::vector<Transformation> elements;
                          for (const auto& jm : ji.at("matrices"))
                              elements.push_back(
                                  Transformation{ft, parse_matrix(jm), ""});
                          std::vector<std::string> labels;
                          if (ji.contains("labels"))
                              for (const auto& l : ji.at("labels"))
                                  labels.push_back(l.get<std::string>());
                          return make_instrument(ft, std::move(elements),
                                                 std::move(labels), name);
                      }();
            instr.name = name;
            sc.instruments.push_back(ScenarioInstrument{name, party, std::move(instr)});
        }
    }
    if (j.contains("expect"))
        for (auto it = j.at("expect").begin(); it != j.at("expect").end(); ++it)
            sc.expect[it.key()] = it.value().get<bool>();
    return sc;
}

TeleportScenario load_teleport_scenario(const std::string& path) {
    json j = json::parse(read_text_file(path));
    TeleportScenario sc;
    sc.name = j.value("name", std::filesystem::path(path).stem().string());
    sc.targets = j.value("targets", 100);
    sc.expect_max_distance = j.value("expect_max_distance", 1e-9);

    std::string preset = j.value("preset", "");
    if (preset == "quantum_bell") {
        int d = j.value("hilbert_dim", 2);
        sc.system = quantum_theory(d);
        TheoryPtr comp = composite_theory(sc.system, sc.system, TensorMode::quantum);
        sc.phi = bell_state(comp);
        sc.joint_effects = bell_observable(comp);
        sc.corrections = pauli_corrections(sc.system);
    } else if (preset == "classical_parity") {
        sc.system = classical_theory(2);
        TheoryPtr comp = composite_theory(sc.system, sc.system, TensorMode::min_tensor);
        Mat phi(2, 2);
        phi.at(0, 0) = 0.5;
        phi.at(1, 1) = 0.5;
        sc.phi = State{comp, flatten(phi)};
        Mat even(2, 2), odd(2, 2);
        even.at(0, 0) = even.at(1, 1) = 1.0;
        odd.at(0, 1) = odd.at(1, 0) = 1.0;
        sc.joint_effects = {flatten(even), flatten(odd)};
        Mat flip(2, 2);
        flip.at(0, 1) = flip.at(1, 0) = 1.0;
        sc.corrections = {identity_transformation(sc.system),
                          Transformation{sc.system, flip, "flip"}};
    } else {
        sc.system = resolve_theory(j.at("theory").get<std::string>()).theory;
        TensorMode mode = parse_mode(j.value("mode", "min_tensor"));
        TheoryPtr comp = composite_theory(sc.system, sc.system, mode);
        sc.phi = State{comp, flatten(parse_matrix(j.at("phi")))};
        for (const auto& jm : j.at("observable")) sc.joint_effects.push_back(flatten(parse_matrix(jm)));
        int idx = 0;
        for (const auto& jm : j.at("corrections"))
            sc.corrections.push_back(
                Transformation{sc.system, parse_matrix(jm), "U" + std::to_string(idx++)});
    }

    if (j.contains("corrections_permutation")) {
        std::vector<Transformation> permuted;
        for (const auto& e : j.at("corrections_permutation"))
            permuted.push_back(sc.corrections.at(e.get<size_t>()));
        OPTW_REQUIRE(permuted.size() == sc.corrections.size(), ErrorCode::parse_error,
                     "corrections_permutation must cover every outcome");
        sc.corrections = std::move(permuted);
    }
    return sc;
}

std::vector<Vec> load_states_file(const std::string& path) {
    json j = json::parse(read_text_file(path));
    if (j.is_array()) return parse_vec_list(j);
    return parse_vec_list(j.at("states"));
}

ordered_json observable_to_json(const Observable& o) {
    ordered_json j;
    j["name"] = o.name;
    ordered_json elements = ordered_json::array();
    for (const auto& e : o.elements) elements.push_back(vec_to_json(e.l));
    j["elements"] = std::move(elements);
    return j;
}

void save_observable_file(const Observable& o, const std::string& path) {
    write_text_file(path, observable_to_json(o).dump(2) + "\n");
}

} // namespace optw
