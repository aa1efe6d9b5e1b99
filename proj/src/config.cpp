#include "frontlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

#include "frontlab/errors.hpp"

namespace frontlab {

namespace {

using Schema = std::map<std::string, std::vector<std::string>>;

std::string where(const std::string& key) { return "config key '" + key + "'"; }

double to_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size()) throw ConfigurationError(where(key) + ": '" + v + "' is not a number");
    return x;
}

long long to_integer(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    long long x = 0;
    try {
        x = std::stoll(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size())
        throw ConfigurationError(where(key) + ": '" + v + "' is not an integer");
    return x;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigurationError(where(key) + ": '" + v + "' is not a boolean");
}

std::vector<std::string> split_list(const std::string& v) {
    std::string s = v;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& tok : split_list(v)) out.push_back(to_double(key, tok));
    if (out.empty()) throw ConfigurationError(where(key) + ": empty list");
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

void apply(RunConfig& c, const std::string& key, const std::string& v) {
    auto num = [&] { return to_double(key, v); };
    auto pos = [&] {
        const double x = num();
        if (!(x > 0.0)) throw ConfigurationError(where(key) + " must be positive");
        return x;
    };
    auto count = [&] {
        const long long x = to_integer(key, v);
        if (x < 0) throw ConfigurationError(where(key) + " must be nonnegative");
        return static_cast<int>(x);
    };
    if (key == "grid.h") c.h = pos();
    else if (key == "grid.tau") c.tau = pos();
    else if (key == "grid.window_left") c.window_left = pos();
    else if (key == "grid.window_right") c.window_right = pos();
    else if (key == "grid.direction") {
        const std::vector<std::string> parts = split_list(v);
        if (parts.size() != 2) throw ConfigurationError(where(key) + " needs two integers");
        c.direction = {static_cast<int>(to_integer(key, parts[0])),
                       static_cast<int>(to_integer(key, parts[1]))};
        if (c.direction.m == 0 && c.direction.n == 0)
            throw ConfigurationError(where(key) + " must be nonzero");
    }
    else if (key == "speed.tol") c.tol = pos();
    else if (key == "speed.phi_fraction") {
        c.phi_fraction = num();
        if (!(c.phi_fraction > 0.0 && c.phi_fraction < 1.0))
            throw ConfigurationError(where(key) + " must lie in (0, 1)");
    }
    else if (key == "speed.phi_width") c.phi_width = pos();
    else if (key == "speed.n_max") c.n_max = count();
    else if (key == "speed.cross_check") c.cross_check = to_bool(key, v);
    else if (key == "speed.spreading_t_max") c.spreading_t_max = pos();
    else if (key == "speed.spreading_sample_dt") c.spreading_sample_dt = pos();
    else if (key == "speed.datum_half_width") c.datum_half_width = pos();
    else if (key == "steady.n_constants") c.n_constants = count();
    else if (key == "steady.n_random") c.n_random = count();
    else if (key == "steady.seed") c.seed = static_cast<std::uint64_t>(count());
    else if (key == "counterprop.delta_fraction") c.delta_fraction = pos();
    else if (key == "counterprop.t_max") c.counterprop_t_max = pos();
    else if (key == "refine.taus") c.taus = to_doubles(key, v);
    else if (key == "refine.tol") c.refine_tol = pos();
    else if (key == "demo.L") c.demo_L = num();
    else if (key == "demo.eps") c.demo_eps = num();
    else if (key == "demo.gap") c.demo_gap = num();
    else if (key == "demo.rule") {
        if (v != "measured" && v != "analytic_bound")
            throw ConfigurationError(where(key) + " must be 'measured' or 'analytic_bound'");
        c.demo_rule = v;
    }
    else if (key == "demo.preset") {
        if (v != "smoke" && v != "full")
            throw ConfigurationError(where(key) + " must be 'smoke' or 'full'");
        c.demo_preset = v;
    }
    else if (key == "output.directory") c.output_directory = v;
    else throw ConfigurationError("unknown " + where(key));
}

}  // namespace

const std::map<std::string, std::vector<std::string>>& config_schema() {
    static const Schema schema{
        {"problem", {"recipe"}},
        {"grid", {"h", "tau", "window_left", "window_right", "direction"}},
        {"speed",
         {"tol", "phi_fraction", "phi_width", "n_max", "cross_check", "spreading_t_max",
          "spreading_sample_dt", "datum_half_width"}},
        {"steady", {"n_constants", "n_random", "seed"}},
        {"counterprop", {"delta_fraction", "t_max"}},
        {"refine", {"taus", "tol"}},
        {"demo", {"L", "eps", "gap", "rule", "preset"}},
        {"output", {"directory"}},
    };
    return schema;
}

RunConfig parse_config(const std::string& text) {
    boost::property_tree::ptree tree;
    std::istringstream in(text);
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigurationError(std::string("config syntax error: ") + e.what());
    }
    RunConfig c;
    const Schema& schema = config_schema();
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ConfigurationError("config key '" + section + "' lies outside any section");
        if (!schema.count(section)) throw ConfigurationError("unknown config section [" + section + "]");
        for (const auto& [name, leaf] : body) {
            if (!leaf.empty()) throw ConfigurationError("nested config key '" + section + "." + name + "'");
            c.entries[section + "." + name] = trim(leaf.data());
        }
    }

    if (c.entries.count("problem.recipe")) {
        try {
            c.recipe.kind = recipe_kind_from_string(c.entries.at("problem.recipe"));
        } catch (const ParameterError& e) {
            throw ConfigurationError(e.what());
        }
    }
    const std::vector<std::string> params = recipe_parameter_names(c.recipe.kind);
    for (const auto& [key, value] : c.entries) {
        const std::string section = key.substr(0, key.find('.'));
        const std::string name = key.substr(key.find('.') + 1);
        if (section == "problem") {
            if (name == "recipe") continue;
            if (std::find(params.begin(), params.end(), name) == params.end())
                throw ConfigurationError("unknown " + where(key) + " for recipe " +
                                         to_string(c.recipe.kind));
            c.recipe.parameters[name] = to_double(key, value);
            continue;
        }
        apply(c, key, value);
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string canonical_text(const RunConfig& config) {
    std::string out;
    for (const auto& [key, value] : config.entries) out += key + " = " + value + "\n";
    return out;
}

std::string config_hash(const RunConfig& config) {
    const std::string text = canonical_text(config);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    std::ostringstream hex;
    for (unsigned int k = 0; k < len; ++k)
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[k]);
    return hex.str();
}

}  // namespace frontlab
