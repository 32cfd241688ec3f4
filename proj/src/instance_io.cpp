#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "edgeelim/instance.hpp"
#include "edgeelim/json_io.hpp"

namespace edgeelim {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
    return s;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Instance read_tsplib(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::string name;
    std::optional<std::size_t> dimension;
    bool have_weight_type = false;
    bool in_coords = false;
    std::vector<std::pair<long, Point>> raw;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (in_coords) {
            if (upper(t) == "EOF") break;
            std::istringstream rec(t);
            long id = 0;
            double x = 0.0, y = 0.0;
            std::string extra;
            if (!(rec >> id >> x >> y) || (rec >> extra)) {
                // A new section keyword ends the coordinate block.
                if (std::isalpha(static_cast<unsigned char>(t[0]))) {
                    in_coords = false;
                    if (upper(t).find("SECTION") != std::string::npos) {
                        throw ValidationError("tsplib: unsupported section '" + t + "'");
                    }
                    continue;
                }
                throw ValidationError("tsplib: malformed node record on line " +
                                      std::to_string(line_no));
            }
            if (!std::isfinite(x) || !std::isfinite(y)) {
                throw ValidationError("tsplib: non-finite coordinate on line " +
                                      std::to_string(line_no));
            }
            raw.emplace_back(id, Point{x, y});
            continue;
        }
        const std::string ut = upper(t);
        if (ut == "EOF") break;
        if (ut.rfind("NODE_COORD_SECTION", 0) == 0) {
            if (!have_weight_type) {
                throw ValidationError("tsplib: EDGE_WEIGHT_TYPE must precede NODE_COORD_SECTION");
            }
            in_coords = true;
            continue;
        }
        const auto colon = t.find(':');
        if (colon == std::string::npos) {
            if (ut.find("SECTION") != std::string::npos) {
                throw ValidationError("tsplib: unsupported section '" + t + "'");
            }
            throw ValidationError("tsplib: malformed header line " + std::to_string(line_no));
        }
        const std::string key = upper(trim(std::string_view(t).substr(0, colon)));
        const std::string value = trim(std::string_view(t).substr(colon + 1));
        if (key == "NAME") {
            name = value;
        } else if (key == "TYPE") {
            if (upper(value) != "TSP") {
                throw ValidationError("tsplib: unsupported TYPE '" + value + "'");
            }
        } else if (key == "DIMENSION") {
            try {
                dimension = static_cast<std::size_t>(std::stoul(value));
            } catch (const std::exception&) {
                throw ValidationError("tsplib: bad DIMENSION '" + value + "'");
            }
        } else if (key == "EDGE_WEIGHT_TYPE") {
            if (upper(value) != "EUC_2D") {
                throw ValidationError("tsplib: unsupported EDGE_WEIGHT_TYPE '" + value + "'");
            }
            have_weight_type = true;
        }
        // COMMENT and other informational keys are ignored.
    }

    if (raw.empty()) throw ValidationError("tsplib: no NODE_COORD_SECTION records");
    if (dimension && *dimension != raw.size()) {
        throw ValidationError("tsplib: DIMENSION " + std::to_string(*dimension) + " but " +
                              std::to_string(raw.size()) + " node records");
    }

    double minx = std::numeric_limits<double>::infinity(), miny = minx;
    double maxx = -minx, maxy = -minx;
    for (const auto& [id, p] : raw) {
        minx = std::min(minx, p.x);
        maxx = std::max(maxx, p.x);
        miny = std::min(miny, p.y);
        maxy = std::max(maxy, p.y);
    }
    const double extent = std::max(maxx - minx, maxy - miny);
    std::vector<Point> pts;
    pts.reserve(raw.size());
    for (const auto& [id, p] : raw) {
        if (extent > 0.0) {
            pts.push_back({std::clamp((p.x - minx) / extent, 0.0, 1.0),
                           std::clamp((p.y - miny) / extent, 0.0, 1.0)});
        } else {
            pts.push_back({0.0, 0.0});
        }
    }
    Instance inst(std::move(pts));
    inst.name = name;
    return inst;
}

std::string write_tsplib(const Instance& inst, std::string_view name) {
    std::ostringstream out;
    out << "NAME : " << name << "\n"
        << "TYPE : TSP\n"
        << "DIMENSION : " << inst.size() << "\n"
        << "EDGE_WEIGHT_TYPE : EUC_2D\n"
        << "NODE_COORD_SECTION\n";
    for (std::size_t i = 0; i < inst.size(); ++i) {
        out << (i + 1) << ' ' << format_double(inst[i].x) << ' ' << format_double(inst[i].y) << '\n';
    }
    out << "EOF\n";
    return out.str();
}

void to_json(nlohmann::json& j, const GaussianComponent& g) {
    j = {{"center", {g.center.x, g.center.y}}, {"sigma", g.sigma}, {"weight", g.weight}};
}

void from_json(const nlohmann::json& j, GaussianComponent& g) {
    const auto& c = j.at("center");
    g.center = {c.at(0).get<double>(), c.at(1).get<double>()};
    g.sigma = j.at("sigma").get<double>();
    g.weight = j.value("weight", 1.0);
}

void to_json(nlohmann::json& j, const DensitySpec& spec) {
    j = {{"kind", to_string(spec.kind)}, {"psi", spec.psi}};
    if (spec.phi) j["phi"] = *spec.phi;
    if (!spec.components.empty()) j["components"] = spec.components;
}

void from_json(const nlohmann::json& j, DensitySpec& spec) {
    spec = DensitySpec{};
    if (j.is_string()) {
        spec.kind = density_kind_from_string(j.get<std::string>());
        return;
    }
    spec.kind = density_kind_from_string(j.at("kind").get<std::string>());
    spec.psi = j.value("psi", 1.0);
    if (j.contains("phi")) spec.phi = j.at("phi").get<double>();
    if (j.contains("components")) spec.components = j.at("components").get<std::vector<GaussianComponent>>();
}

std::string write_instance_json(const Instance& inst) {
    nlohmann::json j;
    j["format"] = "edgeelim-instance";
    j["version"] = 1;
    j["name"] = inst.name;
    j["n"] = inst.size();
    if (inst.seed) j["seed"] = *inst.seed;
    if (inst.density) j["density"] = *inst.density;
    auto& pts = j["points"] = nlohmann::json::array();
    for (const auto& p : inst.points()) pts.push_back({p.x, p.y});
    return j.dump() + "\n";
}

Instance read_instance_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        if (j.value("format", "") != "edgeelim-instance") {
            throw ValidationError("instance json: missing format tag 'edgeelim-instance'");
        }
        std::vector<Point> pts;
        for (const auto& p : j.at("points")) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        if (j.contains("n") && j.at("n").get<std::size_t>() != pts.size()) {
            throw ValidationError("instance json: n does not match point count");
        }
        Instance inst(std::move(pts));
        inst.name = j.value("name", "");
        if (j.contains("seed")) inst.seed = j.at("seed").get<Seed>();
        if (j.contains("density")) inst.density = j.at("density").get<DensitySpec>();
        return inst;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("instance json: ") + e.what());
    }
}

Instance read_instance_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open instance file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return read_instance_json(text);
    return read_tsplib(text);
}

}  // namespace edgeelim
