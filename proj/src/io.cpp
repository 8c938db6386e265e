#include "smoothlab/io.hpp"

#include <cstdio>

namespace smoothlab {

namespace {

void reject_unknown(const Json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    if (!obj.is_object()) throw ParseError(where + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw ParseError(where + ": unknown field '" + key + "'");
    }
}

double get_num(const Json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ParseError(where + ": field '" + key + "' must be a number");
    return v.get<double>();
}

std::string get_str(const Json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
    const auto& v = obj.at(key);
    if (!v.is_string()) throw ParseError(where + ": field '" + key + "' must be a string");
    return v.get<std::string>();
}

Displacement parse_child(const Json& c, const std::string& where) {
    const std::string type = get_str(c, "type", where);
    if (type == "atom") {
        reject_unknown(c, {"type", "z"}, where);
        return AtomDisplacement{get_num(c, "z", where)};
    }
    if (type == "gaussian") {
        reject_unknown(c, {"type", "mu", "sigma2"}, where);
        const double s2 = get_num(c, "sigma2", where);
        if (!(s2 > 0.0)) throw ParseError(where + ": sigma2 must be positive");
        return GaussianDisplacement{get_num(c, "mu", where), s2};
    }
    throw ParseError(where + ": child type must be 'atom' or 'gaussian'");
}

std::shared_ptr<const DisplacementState> parse_displacement_state(const Json& d) {
    const std::string where = "displacement";
    reject_unknown(d, {"id", "outcomes"}, where);
    const std::string id = get_str(d, "id", where);
    if (!d.contains("outcomes") || !d.at("outcomes").is_array())
        throw ParseError(where + " '" + id + "': missing outcomes array");
    std::vector<DisplacementOutcome> outcomes;
    for (const auto& o : d.at("outcomes")) {
        reject_unknown(o, {"q", "children"}, where + " '" + id + "' outcome");
        DisplacementOutcome oc;
        oc.q = get_num(o, "q", where);
        if (o.contains("children")) {
            if (!o.at("children").is_array()) throw ParseError(where + ": children must be an array");
            for (const auto& c : o.at("children")) oc.children.push_back(parse_child(c, where));
        }
        outcomes.push_back(std::move(oc));
    }
    return std::make_shared<const DisplacementState>(id, std::move(outcomes));
}

}  // namespace

std::map<std::string, std::shared_ptr<const DisplacementState>> parse_displacements(
    const Json& doc) {
    if (!doc.is_array()) throw ParseError("displacements: expected an array");
    std::map<std::string, std::shared_ptr<const DisplacementState>> out;
    for (const auto& d : doc) {
        auto s = parse_displacement_state(d);
        if (out.count(s->id())) throw ParseError("displacements: duplicate id '" + s->id() + "'");
        out.emplace(s->id(), std::move(s));
    }
    return out;
}

LawPtr parse_env_law(const Json& doc,
                     const std::map<std::string, std::shared_ptr<const DisplacementState>>& disp) {
    reject_unknown(doc, {"states", "displacements"}, "env law");
    auto local = disp;
    if (doc.contains("displacements")) {
        for (auto& [id, s] : parse_displacements(doc.at("displacements"))) local[id] = s;
    }
    if (!doc.contains("states") || !doc.at("states").is_array())
        throw ParseError("env law: missing states array");
    std::vector<double> probs;
    std::vector<EnvState> states;
    for (const auto& s : doc.at("states")) {
        const std::string where = "env state";
        const std::string kind = get_str(s, "kind", where);
        const std::string id = get_str(s, "id", where);
        probs.push_back(get_num(s, "prob", where));
        if (kind == "finite") {
            reject_unknown(s, {"id", "kind", "prob", "outcomes"}, where + " '" + id + "'");
            if (!s.contains("outcomes") || !s.at("outcomes").is_array())
                throw ParseError(where + " '" + id + "': missing outcomes");
            std::vector<WeightedOutcome> outcomes;
            for (const auto& o : s.at("outcomes")) {
                reject_unknown(o, {"p", "weights"}, where + " '" + id + "' outcome");
                WeightedOutcome wo;
                wo.p = get_num(o, "p", where);
                std::vector<double> w;
                if (o.contains("weights")) {
                    if (!o.at("weights").is_array())
                        throw ParseError(where + ": weights must be an array");
                    for (const auto& y : o.at("weights")) {
                        if (!y.is_number()) throw ParseError(where + ": weights must be numbers");
                        w.push_back(y.get<double>());
                    }
                }
                wo.weights = WeightVector(std::move(w));
                outcomes.push_back(std::move(wo));
            }
            states.push_back(EnvState::finite_discrete(id, std::move(outcomes)));
        } else if (kind == "tilted") {
            reject_unknown(s, {"id", "kind", "prob", "displacement_ref", "theta"},
                           where + " '" + id + "'");
            const std::string ref = get_str(s, "displacement_ref", where);
            const auto it = local.find(ref);
            if (it == local.end())
                throw ParseError(where + " '" + id + "': unresolved displacement_ref '" + ref + "'");
            states.push_back(EnvState::theta_tilted(id, it->second, get_num(s, "theta", where)));
        } else if (kind == "burst") {
            reject_unknown(s, {"id", "kind", "prob"}, where + " '" + id + "'");
            states.push_back(EnvState::burst_state(id));
        } else {
            throw ParseError(where + " '" + id + "': kind must be finite|tilted|burst");
        }
    }
    return std::make_shared<const EnvironmentLaw>(std::move(probs), std::move(states));
}

BrwLawPtr parse_brw_law(
    const Json& doc, const std::map<std::string, std::shared_ptr<const DisplacementState>>& disp) {
    reject_unknown(doc, {"states"}, "brw law");
    if (!doc.contains("states") || !doc.at("states").is_array())
        throw ParseError("brw law: missing states array");
    std::vector<double> probs;
    std::vector<std::shared_ptr<const DisplacementState>> states;
    for (const auto& s : doc.at("states")) {
        reject_unknown(s, {"prob", "displacement_ref"}, "brw state");
        probs.push_back(get_num(s, "prob", "brw state"));
        const std::string ref = get_str(s, "displacement_ref", "brw state");
        const auto it = disp.find(ref);
        if (it == disp.end())
            throw ParseError("brw state: unresolved displacement_ref '" + ref + "'");
        states.push_back(it->second);
    }
    return std::make_shared<const BRWEnvironmentLaw>(std::move(probs), std::move(states));
}

Json extreal_to_json(const ExtReal& v) {
    switch (v.kind()) {
        case ExtReal::Kind::Finite: return v.value();
        case ExtReal::Kind::PosInf: return "inf";
        case ExtReal::Kind::NegInf: return "-inf";
        default: return "indeterminate";
    }
}

Json moment_value_to_json(const MomentValue& mv) {
    Json j;
    j["value"] = extreal_to_json(mv.value);
    j["method"] = mv.method_str();
    if (mv.method == MomentMethod::MonteCarlo) {
        j["std_error"] = mv.std_error;
        j["budget"] = mv.budget;
    }
    if (mv.divergent_series) j["divergent_series"] = true;
    return j;
}

Json verdict_to_json(const Verdict& v) {
    Json j;
    j["verdict"] = to_string(v.verdict);
    j["c1"] = moment_value_to_json(v.report.c1);
    j["c2"] = moment_value_to_json(v.report.c2);
    j["kappa"] = moment_value_to_json(v.report.kappa);
    j["flags"] = v.flags;
    return j;
}

Json validation_to_json(const ValidationReport& rep) {
    Json j;
    j["pass"] = rep.pass;
    j["tol"] = rep.tol;
    j["supercriticality"] = rep.supercriticality;
    j["supercritical"] = rep.supercritical;
    Json states = Json::array();
    for (const auto& s : rep.states) {
        Json st;
        st["id"] = s.id;
        st["quenched_mean"] = s.quenched_mean;
        st["quenched_mean_ok"] = s.quenched_mean_ok;
        st["expected_positive_count"] = s.expected_positive_count;
        st["positive_count_finite"] = s.positive_count_finite;
        states.push_back(std::move(st));
    }
    j["states"] = std::move(states);
    return j;
}

Json brw_verdict_to_json(const BrwVerdictRecord& rec) {
    Json j;
    j["verdict"] = to_string(rec.verdict);
    j["theta"] = rec.theta;
    j["kappa"] = rec.kappa;
    Json m;
    m["value"] = extreal_to_json(rec.moment.value);
    m["exact"] = rec.moment.exact;
    if (!rec.moment.exact) {
        m["std_error"] = rec.moment.std_error;
        m["budget"] = rec.moment.budget;
    }
    m["certified_finite"] = rec.moment.certified_finite;
    j["w1_xlogx"] = std::move(m);
    j["evidence"] = rec.evidence;
    return j;
}

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace smoothlab
