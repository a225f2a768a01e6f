#include "treecolor/certificate.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "treecolor/errors.hpp"

namespace treecolor {

namespace {

using Json = nlohmann::ordered_json;

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json type_map(const TypeVector& v) {
    Json out = Json::object();
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[to_key(v.space().at(i))] = v[i];
    }
    return out;
}

const Json& field(const Json& j, const char* name, const std::string& where) {
    if (!j.is_object()) {
        throw ParseError("'" + where + "' is not an object");
    }
    const auto it = j.find(name);
    if (it == j.end()) {
        throw ParseError("missing field '" + where + (where.empty() ? "" : ".") + name + "'");
    }
    return *it;
}

template <class T>
T get(const Json& j, const char* name, const std::string& where) {
    const Json& v = field(j, name, where);
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError("field '" + where + (where.empty() ? "" : ".") + name + "' has the wrong type");
    }
}

double number(const Json& j, const char* name, const std::string& where) {
    const Json& v = field(j, name, where);
    if (!v.is_number()) {
        throw ParseError("field '" + where + (where.empty() ? "" : ".") + name + "' is not a number");
    }
    return v.get<double>();
}

TypeVector read_type_map(const Json& j, const TypeSpace& space, const std::string& where) {
    if (!j.is_object()) {
        throw ParseError("field '" + where + "' is not an object of \"d,c\" keys");
    }
    TypeVector out{space};
    std::size_t seen = 0;
    for (const auto& [key, value] : j.items()) {
        VertexType t{};
        try {
            t = type_from_key(key);
        } catch (const ParseError&) {
            throw ParseError("field '" + where + "' has a malformed type key '" + key + "'");
        }
        if (!space.contains(t)) {
            throw ParseError("field '" + where + "' has type key '" + key + "' outside the type space");
        }
        if (!value.is_number()) {
            throw ParseError("field '" + where + "." + key + "' is not a number");
        }
        out.at(t) = value.get<double>();
        ++seen;
    }
    if (seen != space.size()) {
        throw ParseError("field '" + where + "' must list all " + std::to_string(space.size()) + " types");
    }
    return out;
}

} // namespace

std::string certificate_to_json(const Certificate& cert) {
    Json j;
    j["schema_version"] = cert.schema_version;
    j["status"] = cert.status;
    j["cfg"] = {{"r", cert.cfg.r}, {"p", cert.cfg.p}};
    j["tuning"] = {{"epsilon", cert.tuning.epsilon}, {"weights", type_map(cert.tuning.weights)}};
    j["control"] = {{"method", to_string(cert.control.method)},
                    {"step", cert.control.step},
                    {"max_time", cert.control.max_time},
                    {"sample_stride", cert.control.sample_stride},
                    {"halvings", cert.control.halvings}};
    j["threshold"] = cert.threshold;
    j["R"] = optional_number(cert.R);
    j["max_g_on_0_R"] = cert.max_g_on_0_R;
    j["remainder_growth_at_R"] = cert.remainder_growth_at_R;
    j["margin_g"] = cert.margin_g;
    j["margin_remainder"] = cert.margin_remainder;
    Json refinements = Json::array();
    for (const auto& r : cert.refinements) {
        refinements.push_back({{"step", r.step},
                               {"R", optional_number(r.R)},
                               {"max_g_on_0_R", r.max_g_on_0_R},
                               {"remainder_growth_at_R", r.remainder_growth_at_R},
                               {"note", r.note}});
    }
    j["refinements"] = std::move(refinements);
    j["diagnostics"] = cert.diagnostics;
    Json samples = Json::array();
    for (const auto& s : cert.samples) {
        samples.push_back(
            {{"time", s.time}, {"g", s.g}, {"remainder_growth", s.remainder_growth}, {"z", type_map(s.z)}});
    }
    j["samples"] = std::move(samples);
    j["metadata"] = {{"created_by", cert.created_by}, {"stored_samples", cert.samples.size()}};
    return j.dump(1) + "\n";
}

Certificate certificate_from_json(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("certificate is not valid JSON: ") + e.what());
    }
    Certificate cert;
    cert.schema_version = get<int>(j, "schema_version", "");
    if (cert.schema_version != 1) {
        throw ParseError("field 'schema_version' must be 1");
    }
    cert.status = get<std::string>(j, "status", "");
    const Json& cfg = field(j, "cfg", "");
    cert.cfg = {get<int>(cfg, "r", "cfg"), get<int>(cfg, "p", "cfg")};
    try {
        validate(cert.cfg);
    } catch (const ConfigurationError& e) {
        throw ParseError(std::string("field 'cfg': ") + e.what());
    }
    const TypeSpace space(cert.cfg);

    const Json& tuning = field(j, "tuning", "");
    cert.tuning = {read_type_map(field(tuning, "weights", "tuning"), space, "tuning.weights"),
                   number(tuning, "epsilon", "tuning")};

    const Json& control = field(j, "control", "");
    try {
        cert.control.method = method_from_string(get<std::string>(control, "method", "control"));
    } catch (const ConfigurationError& e) {
        throw ParseError(std::string("field 'control.method': ") + e.what());
    }
    cert.control.step = number(control, "step", "control");
    cert.control.max_time = number(control, "max_time", "control");
    cert.control.sample_stride = get<int>(control, "sample_stride", "control");
    cert.control.halvings = get<int>(control, "halvings", "control");

    cert.threshold = number(j, "threshold", "");
    const Json& r = field(j, "R", "");
    if (!r.is_null()) {
        if (!r.is_number()) {
            throw ParseError("field 'R' is neither a number nor null");
        }
        cert.R = r.get<double>();
    }
    cert.max_g_on_0_R = number(j, "max_g_on_0_R", "");
    cert.remainder_growth_at_R = number(j, "remainder_growth_at_R", "");
    cert.margin_g = number(j, "margin_g", "");
    cert.margin_remainder = number(j, "margin_remainder", "");

    const Json& refinements = field(j, "refinements", "");
    if (!refinements.is_array()) {
        throw ParseError("field 'refinements' is not an array");
    }
    for (std::size_t i = 0; i < refinements.size(); ++i) {
        const std::string where = "refinements[" + std::to_string(i) + "]";
        const Json& e = refinements[i];
        Refinement ref;
        ref.step = number(e, "step", where);
        const Json& rr = field(e, "R", where);
        if (rr.is_number()) {
            ref.R = rr.get<double>();
        } else if (!rr.is_null()) {
            throw ParseError("field '" + where + ".R' is neither a number nor null");
        }
        ref.max_g_on_0_R = number(e, "max_g_on_0_R", where);
        ref.remainder_growth_at_R = number(e, "remainder_growth_at_R", where);
        ref.note = get<std::string>(e, "note", where);
        cert.refinements.push_back(ref);
    }
    cert.diagnostics = get<std::vector<std::string>>(j, "diagnostics", "");

    const Json& samples = field(j, "samples", "");
    if (!samples.is_array()) {
        throw ParseError("field 'samples' is not an array");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const std::string where = "samples[" + std::to_string(i) + "]";
        const Json& e = samples[i];
        cert.samples.push_back({number(e, "time", where), read_type_map(field(e, "z", where), space, where + ".z"),
                                number(e, "g", where), number(e, "remainder_growth", where)});
    }
    const Json& meta = field(j, "metadata", "");
    cert.created_by = get<std::string>(meta, "created_by", "metadata");
    return cert;
}

void write_certificate(const Certificate& cert, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigurationError("cannot open '" + path.string() + "' for writing");
    }
    out << certificate_to_json(cert);
    if (!out) {
        throw ConfigurationError("failed writing '" + path.string() + "'");
    }
}

Certificate read_certificate(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open certificate '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    Certificate cert = certificate_from_json(buffer.str());
    verify_certificate(cert);
    return cert;
}

Certificate certificate_roundtrip(const Certificate& cert, const std::filesystem::path& path) {
    write_certificate(cert, path);
    return read_certificate(path);
}

} // namespace treecolor
