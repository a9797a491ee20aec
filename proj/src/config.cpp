#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "dilres/cli.hpp"
#include "dilres/hamiltonian.hpp"

namespace dilres {

namespace {

void reject_unknown(const toml::table& t, const std::string& where, std::initializer_list<const char*> allowed) {
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : t)
        if (!ok.count(std::string(key.str()))) throw ConfigError("config: unknown key " + where + std::string(key.str()));
}

double get_number(const toml::table& t, const char* key, double fallback, const std::string& where) {
    const toml::node* n = t.get(key);
    if (!n) return fallback;
    if (auto v = n->value<double>()) return *v;  // integers convert too
    throw ConfigError("config: " + where + key + " must be a number");
}

int get_int(const toml::table& t, const char* key, int fallback, const std::string& where) {
    const toml::node* n = t.get(key);
    if (!n) return fallback;
    if (auto v = n->as_integer()) return static_cast<int>(v->get());
    throw ConfigError("config: " + where + key + " must be an integer");
}

std::string get_string(const toml::table& t, const char* key, const std::string& fallback, const std::string& where) {
    const toml::node* n = t.get(key);
    if (!n) return fallback;
    if (auto v = n->value<std::string>()) return *v;
    throw ConfigError("config: " + where + key + " must be a string");
}

bool get_bool(const toml::table& t, const char* key, bool fallback, const std::string& where) {
    const toml::node* n = t.get(key);
    if (!n) return fallback;
    if (auto v = n->value<bool>()) return *v;
    throw ConfigError("config: " + where + key + " must be a boolean");
}

// A complex number is a plain number or a two-element array [re, im].
cplx to_complex(const toml::node& n, const std::string& name) {
    if (auto v = n.value<double>()) return {*v, 0.0};
    if (auto a = n.as_array(); a && a->size() == 2) {
        auto re = (*a)[0].value<double>(), im = (*a)[1].value<double>();
        if (re && im) return {*re, *im};
    }
    throw ConfigError("config: " + name + " must be a number or [re, im]");
}

cplx get_complex(const toml::table& t, const char* key, cplx fallback, const std::string& where) {
    const toml::node* n = t.get(key);
    return n ? to_complex(*n, where + key) : fallback;
}

const toml::table* section(const toml::table& root, const char* name) {
    const toml::node* n = root.get(name);
    if (!n) return nullptr;
    if (!n->is_table()) throw ConfigError(std::string("config: [") + name + "] must be a table");
    return n->as_table();
}

nlohmann::json complex_json(cplx z) { return {z.real(), z.imag()}; }

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
    toml::table root;
    try {
        root = toml::parse(text, source);
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << "config: parse error at line " << e.source().begin.line << ": " << e.description();
        throw ConfigError(os.str());
    }
    reject_unknown(root, "", {"model", "grid", "fock", "scan", "verify", "output", "seed"});

    RunConfig c;
    c.source = source;
    if (const toml::node* s = root.get("seed")) {
        auto v = s->as_integer();
        if (!v || v->get() < 0) throw ConfigError("config: seed must be a nonnegative integer");
        c.seed = static_cast<std::uint64_t>(v->get());
    }
    if (const toml::table* t = section(root, "model")) {
        const std::string w = "model.";
        reject_unknown(*t, w, {"kind", "delta", "dipole", "Z", "beta", "eps", "spin", "path", "zeeman"});
        ModelSpec& m = c.model;
        m.kind = get_string(*t, "kind", m.kind, w);
        m.delta = get_number(*t, "delta", m.delta, w);
        m.dipole = get_number(*t, "dipole", m.dipole, w);
        m.Z = get_number(*t, "Z", m.Z, w);
        m.beta = get_number(*t, "beta", m.beta, w);
        m.eps = get_number(*t, "eps", m.eps, w);
        m.spin = get_number(*t, "spin", m.spin, w);
        m.path = get_string(*t, "path", m.path, w);
        m.zeeman = get_number(*t, "zeeman", m.zeeman, w);
        // Relative model paths are taken relative to the config file.
        if (!m.path.empty() && std::filesystem::path(m.path).is_relative() && source.front() != '<')
            m.path = (std::filesystem::path(source).parent_path() / m.path).string();
    }
    if (const toml::table* t = section(root, "grid")) {
        const std::string w = "grid.";
        reject_unknown(*t, w, {"n_radial", "r_max", "group", "Lambda"});
        c.grid.n_radial = get_int(*t, "n_radial", c.grid.n_radial, w);
        c.grid.r_max = get_number(*t, "r_max", c.grid.r_max, w);
        c.grid.group = get_string(*t, "group", c.grid.group, w);
        c.grid.lambda = get_number(*t, "Lambda", c.grid.lambda, w);
    }
    if (const toml::table* t = section(root, "fock")) {
        reject_unknown(*t, "fock.", {"N_ph"});
        c.n_ph = get_int(*t, "N_ph", c.n_ph, "fock.");
    }
    if (const toml::table* t = section(root, "scan")) {
        const std::string w = "scan.";
        reject_unknown(*t, w, {"kappa_start", "kappa_end", "theta", "g", "steps", "level", "rescaled", "margin"});
        ScanSpec& s = c.scan;
        s.kappa_start = get_complex(*t, "kappa_start", s.kappa_start, w);
        s.kappa_end = get_complex(*t, "kappa_end", s.kappa_end, w);
        s.theta = get_complex(*t, "theta", s.theta, w);
        s.g = get_number(*t, "g", s.g, w);
        s.steps = get_int(*t, "steps", s.steps, w);
        s.level = get_int(*t, "level", s.level, w);
        s.rescaled = get_bool(*t, "rescaled", s.rescaled, w);
        s.margin = get_number(*t, "margin", s.margin, w);
    }
    if (const toml::table* t = section(root, "verify")) {
        reject_unknown(*t, "verify.", {"suites", "tolerance"});
        if (const toml::node* n = t->get("suites")) {
            const toml::array* a = n->as_array();
            if (!a) throw ConfigError("config: verify.suites must be an array of strings");
            for (const toml::node& e : *a) {
                auto v = e.value<std::string>();
                if (!v) throw ConfigError("config: verify.suites must be an array of strings");
                c.verify.suites.push_back(*v);
            }
        }
        if (t->get("tolerance")) c.verify.tolerance = get_number(*t, "tolerance", 0.0, "verify.");
    }
    if (const toml::table* t = section(root, "output")) {
        reject_unknown(*t, "output.", {"dir"});
        c.out_dir = get_string(*t, "dir", c.out_dir, "output.");
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: file not found");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str(), path);
}

void validate(const RunConfig& c) {
    static const std::set<std::string> kinds{"toy", "hydrogen-sp", "hydrogen-fine-structure", "file"};
    if (!kinds.count(c.model.kind)) throw ConfigError("model: unknown kind " + c.model.kind);
    if (c.model.kind == "file") {
        if (c.model.path.empty()) throw ConfigError("model: path required for kind file");
        if (!std::filesystem::is_regular_file(c.model.path)) throw ConfigError("model: file not found");
    }
    if (c.grid.n_radial < 1) throw ConfigError("grid: n_radial must be at least 1");
    if (!(c.grid.r_max > 0.0)) throw ConfigError("grid: r_max must be positive");
    if (!(c.grid.lambda > 0.0)) throw ConfigError("grid: Lambda must be positive");
    try {
        parse_angular_group(c.grid.group);
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    if (c.n_ph < 0) throw ConfigError("fock: N_ph must be nonnegative");
    if (std::abs(c.scan.theta.imag()) >= kPi / 4) throw ConfigError("scan: |Im theta| must be below pi/4");
    if (c.scan.steps < 0) throw ConfigError("scan: steps must be nonnegative");
    if (c.scan.level < 0) throw ConfigError("scan: level must be nonnegative");
    if (c.verify.tolerance && !(*c.verify.tolerance > 0.0)) throw ConfigError("verify: tolerance must be positive");

    const std::size_t n_dirs = c.grid.group == "octahedral" ? 6 : 2;
    const double modes = static_cast<double>(n_dirs * 2 * static_cast<std::size_t>(c.grid.n_radial));
    if (fock_dimension(static_cast<std::size_t>(modes), c.n_ph) > 200000)
        throw ConfigError("fock: dimension above the hard cap");
}

AtomModel build_model(const ModelSpec& m) {
    AtomModel model = [&]() -> AtomModel {
        if (m.kind == "toy") return toy_two_level(m.delta, m.dipole);
        if (m.kind == "hydrogen-sp") return hydrogen_sp(m.Z, m.spin, m.beta, m.eps);
        if (m.kind == "hydrogen-fine-structure")
            return fine_structure_model(m.Z, m.beta, m.eps, default_radial_grid(m.Z, 2, 1));
        if (m.kind == "file") {
            std::ifstream in(m.path);
            if (!in) throw ConfigError("model: file not found");
            nlohmann::json j;
            try {
                in >> j;
            } catch (const nlohmann::json::exception&) {
                throw ConfigError("model: file is not valid JSON");
            }
            return atom_from_json(j);
        }
        throw ConfigError("model: unknown kind " + m.kind);
    }();
    if (m.zeeman != 0.0) {
        if (model.spin()[2].norm() == 0.0) throw ConfigError("model: symmetry breaking needs spin operators");
        model = model.perturbed(m.zeeman * model.spin()[2], "zeeman");
    }
    return model;
}

ModeGrid build_grid(const GridSpec& g) {
    return build_mode_grid(g.n_radial, g.r_max, parse_angular_group(g.group), g.lambda);
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["model"] = {{"kind", model.kind}, {"delta", model.delta}, {"dipole", model.dipole}, {"Z", model.Z},
                  {"beta", model.beta}, {"eps", model.eps},     {"spin", model.spin},     {"zeeman", model.zeeman}};
    if (!model.path.empty()) j["model"]["path"] = model.path;
    j["grid"] = {{"n_radial", grid.n_radial}, {"r_max", grid.r_max}, {"group", grid.group}, {"Lambda", grid.lambda}};
    j["fock"] = {{"N_ph", n_ph}};
    j["scan"] = {{"kappa_start", complex_json(scan.kappa_start)},
                 {"kappa_end", complex_json(scan.kappa_end)},
                 {"theta", complex_json(scan.theta)},
                 {"g", scan.g},
                 {"steps", scan.steps},
                 {"level", scan.level},
                 {"rescaled", scan.rescaled},
                 {"margin", scan.margin}};
    j["verify"] = {{"suites", verify.suites}};
    j["verify"]["tolerance"] = verify.tolerance ? nlohmann::json(*verify.tolerance) : nlohmann::json(nullptr);
    j["seed"] = seed;
    return j;
}

}  // namespace dilres
