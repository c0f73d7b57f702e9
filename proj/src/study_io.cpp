#include "pvdg/study_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pvdg/errors.hpp"

namespace pvdg {

using nlohmann::json;

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    if (in.bad()) throw IoError("read failure on " + path.string());
    return out.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failure on " + path.string());
}

namespace {

json parse_json(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

// Field accessors that report the file and key on failure.
const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(where + ": missing field '" + key + "'");
    return *it;
}

double require_number(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_number()) throw ValidationError(where + ": field '" + key + "' must be a number");
    return v.get<double>();
}

int require_int(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_number_integer()) {
        throw ValidationError(where + ": field '" + key + "' must be an integer");
    }
    return v.get<int>();
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_string()) throw ValidationError(where + ": field '" + key + "' must be a string");
    return v.get<std::string>();
}

std::vector<double> require_number_array(const json& obj, const char* key,
                                         const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_array()) throw ValidationError(where + ": field '" + key + "' must be an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const json& e : v) {
        if (!e.is_number()) throw ValidationError(where + ": '" + key + "' has a non-numeric entry");
        out.push_back(e.get<double>());
    }
    return out;
}

Network load_network(const std::filesystem::path& path) {
    const json root = parse_json(path);
    const std::string where = path.filename().string();

    const double base_mva = require_number(root, "base_mva", where);
    const double base_kv = require_number(root, "base_kv", where);

    std::vector<Bus> buses;
    const json& jbuses = require(root, "buses", where);
    if (!jbuses.is_array()) throw ValidationError(where + ": 'buses' must be an array");
    for (std::size_t i = 0; i < jbuses.size(); ++i) {
        const std::string bus_where = where + " buses[" + std::to_string(i) + "]";
        const json& jb = jbuses[i];
        Bus b;
        b.id = require_int(jb, "id", bus_where);
        const std::string kind = require_string(jb, "kind", bus_where);
        if (kind == "slack") {
            b.kind = BusKind::Slack;
        } else if (kind == "load") {
            b.kind = BusKind::Load;
        } else {
            throw ValidationError(bus_where + ": kind must be 'slack' or 'load', got '" + kind + "'");
        }
        if (jb.contains("load_profile") && !jb["load_profile"].is_null()) {
            if (!jb["load_profile"].is_string()) {
                throw ValidationError(bus_where + ": 'load_profile' must be a string");
            }
            b.load_profile = jb["load_profile"].get<std::string>();
        }
        b.nominal_kv = require_number(jb, "nominal_kv", bus_where);
        buses.push_back(std::move(b));
    }

    std::vector<Line> lines;
    const json& jlines = require(root, "lines", where);
    if (!jlines.is_array()) throw ValidationError(where + ": 'lines' must be an array");
    for (std::size_t i = 0; i < jlines.size(); ++i) {
        const std::string line_where = where + " lines[" + std::to_string(i) + "]";
        const json& jl = jlines[i];
        Line l;
        l.id = require_int(jl, "id", line_where);
        l.from_bus = require_int(jl, "from", line_where);
        l.to_bus = require_int(jl, "to", line_where);
        l.resistance_ohm = require_number(jl, "r_ohm", line_where);
        l.reactance_ohm = require_number(jl, "x_ohm", line_where);
        lines.push_back(l);
    }

    return Network(std::move(buses), std::move(lines), base_mva, base_kv);
}

std::pair<std::vector<LoadProfile>, InsolationProfile> load_profiles(
    const std::filesystem::path& path) {
    const json root = parse_json(path);
    const std::string where = path.filename().string();

    std::vector<LoadProfile> profiles;
    const json& jprofiles = require(root, "profiles", where);
    if (!jprofiles.is_array()) throw ValidationError(where + ": 'profiles' must be an array");
    for (std::size_t i = 0; i < jprofiles.size(); ++i) {
        const std::string pw = where + " profiles[" + std::to_string(i) + "]";
        const json& jp = jprofiles[i];
        LoadProfile p;
        p.id = require_string(jp, "id", pw);
        p.power_factor = require_number(jp, "power_factor", pw);
        p.p_kw = require_number_array(jp, "p_kw", pw);
        profiles.push_back(std::move(p));
    }

    const json& jins = require(root, "insolation", where);
    InsolationProfile insolation;
    insolation.i_kw_per_m2 = require_number_array(jins, "i_kw_per_m2", where + " insolation");
    return {std::move(profiles), std::move(insolation)};
}

std::vector<SolarReadyBus> load_solar(const std::filesystem::path& path) {
    const json root = parse_json(path);
    const std::string where = path.filename().string();

    std::vector<SolarReadyBus> out;
    const json& jc = require(root, "candidates", where);
    if (!jc.is_array()) throw ValidationError(where + ": 'candidates' must be an array");
    for (std::size_t i = 0; i < jc.size(); ++i) {
        const std::string cw = where + " candidates[" + std::to_string(i) + "]";
        SolarReadyBus c;
        c.bus_id = require_int(jc[i], "bus", cw);
        c.p_max_kw = require_number(jc[i], "p_max_kw", cw);
        out.push_back(c);
    }
    return out;
}

}  // namespace

Study load_study(const std::filesystem::path& network_path,
                 const std::filesystem::path& profiles_path,
                 const std::filesystem::path& solar_path) {
    Network network = load_network(network_path);
    auto [profiles, insolation] = load_profiles(profiles_path);
    std::vector<SolarReadyBus> solar = load_solar(solar_path);
    return Study(std::move(network), std::move(profiles), std::move(insolation), std::move(solar));
}

void save_study(const Study& study, const std::filesystem::path& network_path,
                const std::filesystem::path& profiles_path,
                const std::filesystem::path& solar_path) {
    json jnet;
    jnet["base_mva"] = study.network().base_mva();
    jnet["base_kv"] = study.network().base_kv();
    jnet["buses"] = json::array();
    for (const Bus& b : study.network().buses()) {
        json jb;
        jb["id"] = b.id;
        jb["kind"] = b.kind == BusKind::Slack ? "slack" : "load";
        if (b.load_profile) jb["load_profile"] = *b.load_profile;
        jb["nominal_kv"] = b.nominal_kv;
        jnet["buses"].push_back(std::move(jb));
    }
    jnet["lines"] = json::array();
    for (const Line& l : study.network().lines()) {
        json jl;
        jl["id"] = l.id;
        jl["from"] = l.from_bus;
        jl["to"] = l.to_bus;
        jl["r_ohm"] = l.resistance_ohm;
        jl["x_ohm"] = l.reactance_ohm;
        jnet["lines"].push_back(std::move(jl));
    }
    write_text_file(network_path, jnet.dump(2) + "\n");

    json jprof;
    jprof["profiles"] = json::array();
    for (const LoadProfile& p : study.profiles()) {
        json jp;
        jp["id"] = p.id;
        jp["power_factor"] = p.power_factor;
        jp["p_kw"] = p.p_kw;
        jprof["profiles"].push_back(std::move(jp));
    }
    jprof["insolation"]["i_kw_per_m2"] = study.insolation().i_kw_per_m2;
    write_text_file(profiles_path, jprof.dump(2) + "\n");

    json jsolar;
    jsolar["candidates"] = json::array();
    for (const SolarReadyBus& c : study.solar_ready()) {
        json jc;
        jc["bus"] = c.bus_id;
        jc["p_max_kw"] = c.p_max_kw;
        jsolar["candidates"].push_back(std::move(jc));
    }
    write_text_file(solar_path, jsolar.dump(2) + "\n");
}

InstallationPlan load_plan(const std::filesystem::path& path, const Study& study) {
    const json root = parse_json(path);
    const std::string where = path.filename().string();

    InstallationPlan plan = InstallationPlan::empty(study.solar_ready().size());
    const json& jinst = require(root, "installations", where);
    if (!jinst.is_array()) throw ValidationError(where + ": 'installations' must be an array");
    for (std::size_t i = 0; i < jinst.size(); ++i) {
        const std::string iw = where + " installations[" + std::to_string(i) + "]";
        const int bus = require_int(jinst[i], "bus", iw);
        const double kw = require_number(jinst[i], "kw", iw);
        const std::size_t c = study.candidate_index(bus);  // throws on dangling bus
        plan.capacities_kw[c] = kw;
        plan.located[c] = kw > 0.0 ? 1 : 0;
    }
    validate_plan(plan, study.solar_ready());
    return plan;
}

void save_plan(const InstallationPlan& plan, const Study& study,
               const std::filesystem::path& path) {
    json root;
    root["installations"] = json::array();
    for (std::size_t i = 0; i < plan.capacities_kw.size(); ++i) {
        if (plan.capacities_kw[i] <= 0.0) continue;
        json j;
        j["bus"] = study.solar_ready()[i].bus_id;
        j["kw"] = plan.capacities_kw[i];
        root["installations"].push_back(std::move(j));
    }
    write_text_file(path, root.dump(2) + "\n");
}

}  // namespace pvdg
