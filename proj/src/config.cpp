#include "levy_elliptic/config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "json.hpp"

#include "levy_elliptic/error.hpp"

namespace levy_elliptic {

namespace {

using nlohmann::json;

const std::vector<std::string> kKeys = {
    "d",     "box",     "b",           "sigma",  "measure",     "gamma",      "eps",      "policy",
    "K",     "lambda_max", "seed",     "out",    "u_grid",      "M",          "r_list",   "K_list",
    "grid_levels", "replicates", "mode", "f",    "phi",         "t_list",     "x_sample", "surrogate",
    "blocks", "realizations", "psi_route", "override", "workers", "grid",
};

int line_of(const std::string& text, std::size_t pos) {
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(std::min(pos, text.size())), '\n'));
}

// Line of the first occurrence of "key" followed by a colon.
int key_line(const std::string& text, const std::string& key) {
    const std::string quoted = "\"" + key + "\"";
    std::size_t pos = 0;
    while ((pos = text.find(quoted, pos)) != std::string::npos) {
        std::size_t after = pos + quoted.size();
        while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
        if (after < text.size() && text[after] == ':') return line_of(text, pos);
        pos = after;
    }
    return 1;
}

bool numeric(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

json parse_override_value(const std::string& raw) {
    json j = json::parse(raw, nullptr, false);
    if (!j.is_discarded() && !j.is_null()) return j;
    if (raw.find(',') != std::string::npos) {
        json arr = json::array();
        std::size_t start = 0;
        bool all_numbers = true;
        while (start <= raw.size()) {
            const std::size_t comma = std::min(raw.find(',', start), raw.size());
            const std::string item = raw.substr(start, comma - start);
            if (!numeric(item)) {
                all_numbers = false;
                break;
            }
            arr.push_back(std::strtod(item.c_str(), nullptr));
            start = comma + 1;
        }
        if (all_numbers) return arr;
    }
    return raw;
}

struct Entry {
    json value;
    std::string anchor;
};

[[noreturn]] void fail(const Entry& e, const std::string& key, const std::string& message) {
    throw ConfigError(e.anchor + ": key '" + key + "': " + message);
}

double as_real(const Entry& e, const std::string& key) {
    if (!e.value.is_number()) fail(e, key, "expected a number");
    const double v = e.value.get<double>();
    if (!std::isfinite(v)) fail(e, key, "expected a finite number");
    return v;
}

long long as_integer(const Entry& e, const std::string& key, long long lo, long long hi) {
    if (!e.value.is_number()) fail(e, key, "expected an integer");
    const double v = e.value.get<double>();
    if (v != std::floor(v) || v < static_cast<double>(lo) || v > static_cast<double>(hi))
        fail(e, key, "expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<long long>(v);
}

std::string as_string(const Entry& e, const std::string& key) {
    if (!e.value.is_string()) fail(e, key, "expected a string");
    return e.value.get<std::string>();
}

bool as_bool(const Entry& e, const std::string& key) {
    if (!e.value.is_boolean()) fail(e, key, "expected true or false");
    return e.value.get<bool>();
}

std::vector<double> as_reals(const Entry& e, const std::string& key) {
    if (e.value.is_number()) return {as_real(e, key)};
    if (!e.value.is_array() || e.value.empty()) fail(e, key, "expected a non-empty list of numbers");
    std::vector<double> out;
    for (const auto& item : e.value) out.push_back(as_real(Entry{item, e.anchor}, key));
    return out;
}

std::vector<long long> as_integers(const Entry& e, const std::string& key, long long lo, long long hi) {
    if (e.value.is_number()) return {as_integer(e, key, lo, hi)};
    if (!e.value.is_array() || e.value.empty()) fail(e, key, "expected a non-empty list of integers");
    std::vector<long long> out;
    for (const auto& item : e.value) out.push_back(as_integer(Entry{item, e.anchor}, key, lo, hi));
    return out;
}

}  // namespace

EigenCutoff RunConfig::cutoff() const {
    if (lambda_max) return EigenCutoff::by_threshold(*lambda_max);
    return EigenCutoff::by_count(K.value_or(1000));
}

const std::vector<std::string>& config_keys() { return kKeys; }

RunConfig load_config(const std::string& json_text, const std::string& source, const std::vector<std::string>& overrides) {
    std::map<std::string, Entry> entries;
    bool has_text = std::any_of(json_text.begin(), json_text.end(), [](char c) { return !std::isspace(static_cast<unsigned char>(c)); });
    if (has_text) {
        json doc;
        try {
            doc = json::parse(json_text);
        } catch (const json::parse_error& e) {
            throw ConfigError(source + ":" + std::to_string(line_of(json_text, e.byte == 0 ? 0 : e.byte - 1)) +
                              ": invalid JSON: " + e.what());
        }
        if (!doc.is_object()) throw ConfigError(source + ":1: config must be a JSON object");
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            entries[it.key()] = Entry{it.value(), source + ":" + std::to_string(key_line(json_text, it.key()))};
        }
    }
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--set " + o + ": expected key=value");
        const std::string key = o.substr(0, eq);
        entries[key] = Entry{parse_override_value(o.substr(eq + 1)), "--set " + key};
    }
    for (const auto& [key, entry] : entries) {
        if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) throw ConfigError(entry.anchor + ": unknown key '" + key + "'");
    }

    RunConfig c;
    auto get = [&](const std::string& key) -> const Entry* {
        auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };
    auto guarded = [&](const std::string& key, auto&& apply) {
        if (const Entry* e = get(key)) {
            try {
                apply(*e);
            } catch (const ConfigError&) {
                throw;
            } catch (const Error& err) {
                fail(*e, key, err.what());
            } catch (const std::exception& err) {
                fail(*e, key, err.what());
            }
        }
    };

    std::optional<int> d;
    guarded("d", [&](const Entry& e) { d = static_cast<int>(as_integer(e, "d", 1, kMaxDimension)); });
    if (const Entry* e = get("box")) {
        guarded("box", [&](const Entry& e2) {
            if (!e2.value.is_array() || e2.value.empty()) fail(e2, "box", "expected a list of [lower, upper] pairs");
            std::vector<std::pair<double, double>> iv;
            for (const auto& pair : e2.value) {
                if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
                    fail(e2, "box", "expected a list of [lower, upper] pairs");
                iv.emplace_back(pair[0].get<double>(), pair[1].get<double>());
            }
            c.box = HyperBox(iv);
        });
        if (d && *d != c.box.dim()) fail(*e, "box", "dimension disagrees with d = " + std::to_string(*d));
    } else if (d) {
        c.box = HyperBox::unit(*d);
    }

    guarded("b", [&](const Entry& e) { c.triplet.drift = as_real(e, "b"); });
    guarded("sigma", [&](const Entry& e) {
        c.triplet.sigma = as_real(e, "sigma");
        if (c.triplet.sigma < 0.0) fail(e, "sigma", "must be non-negative");
    });
    guarded("measure", [&](const Entry& e) { c.triplet.measure = parse_measure(as_string(e, "measure")); });
    guarded("gamma", [&](const Entry& e) {
        c.gamma = as_real(e, "gamma");
        if (!(c.gamma > 0.0)) fail(e, "gamma", "must be positive");
    });
    guarded("eps", [&](const Entry& e) {
        c.eps = as_real(e, "eps");
        if (!(c.eps >= 0.0 && c.eps <= 1.0)) fail(e, "eps", "must lie in [0, 1]");
    });
    guarded("policy", [&](const Entry& e) { c.policy = parse_policy(as_string(e, "policy")); });
    guarded("K", [&](const Entry& e) { c.K = static_cast<std::size_t>(as_integer(e, "K", 1, 1LL << 26)); });
    guarded("lambda_max", [&](const Entry& e) {
        c.lambda_max = as_real(e, "lambda_max");
        if (!(*c.lambda_max > 0.0)) fail(e, "lambda_max", "must be positive");
    });
    if (c.K && c.lambda_max) fail(*get("lambda_max"), "lambda_max", "set either K or lambda_max, not both");
    guarded("seed", [&](const Entry& e) {
        if (!e.value.is_number_unsigned()) fail(e, "seed", "expected a non-negative integer");
        c.seed = e.value.get<std::uint64_t>();
    });
    guarded("out", [&](const Entry& e) { c.out = as_string(e, "out"); });
    guarded("u_grid", [&](const Entry& e) { c.u_grid = as_reals(e, "u_grid"); });
    guarded("M", [&](const Entry& e) { c.M = static_cast<std::size_t>(as_integer(e, "M", 1, 1LL << 32)); });
    guarded("r_list", [&](const Entry& e) { c.r_list = as_reals(e, "r_list"); });
    guarded("K_list", [&](const Entry& e) {
        c.K_list.clear();
        for (long long k : as_integers(e, "K_list", 1, 1LL << 26)) c.K_list.push_back(static_cast<std::size_t>(k));
    });
    guarded("grid_levels", [&](const Entry& e) {
        c.grid_levels.clear();
        for (long long k : as_integers(e, "grid_levels", 1, 12)) c.grid_levels.push_back(static_cast<int>(k));
    });
    guarded("replicates", [&](const Entry& e) { c.replicates = static_cast<std::size_t>(as_integer(e, "replicates", 1, 1LL << 32)); });
    guarded("mode", [&](const Entry& e) { c.mode = parse_operator_mode(as_string(e, "mode")); });
    guarded("f", [&](const Entry& e) { c.f = as_string(e, "f"); });
    guarded("phi", [&](const Entry& e) { c.phi = as_string(e, "phi"); });
    guarded("t_list", [&](const Entry& e) { c.t_list = as_reals(e, "t_list"); });
    guarded("x_sample", [&](const Entry& e) { c.x_sample = as_reals(e, "x_sample"); });
    guarded("surrogate", [&](const Entry& e) { c.surrogate = as_bool(e, "surrogate"); });
    guarded("blocks", [&](const Entry& e) { c.blocks = static_cast<int>(as_integer(e, "blocks", 2, 14)); });
    guarded("realizations", [&](const Entry& e) { c.realizations = static_cast<std::size_t>(as_integer(e, "realizations", 1, 1LL << 20)); });
    guarded("psi_route", [&](const Entry& e) {
        const auto s = as_string(e, "psi_route");
        if (s == "closed-form") {
            c.psi_route = PsiRoute::closed_form;
        } else if (s == "quadrature") {
            c.psi_route = PsiRoute::quadrature;
        } else {
            fail(e, "psi_route", "expected 'closed-form' or 'quadrature'");
        }
    });
    guarded("override", [&](const Entry& e) { c.override_existence = as_bool(e, "override"); });
    guarded("workers", [&](const Entry& e) { c.workers = static_cast<int>(as_integer(e, "workers", 0, 1024)); });
    guarded("grid", [&](const Entry& e) { c.grid = static_cast<int>(as_integer(e, "grid", 1, 4096)); });

    if (!c.x_sample.empty() && c.x_sample.size() % static_cast<std::size_t>(c.box.dim()) != 0)
        fail(*get("x_sample"), "x_sample", "length must be a multiple of the dimension");
    guarded("measure", [&](const Entry&) { validate(c.triplet); });
    return c;
}

}  // namespace levy_elliptic
