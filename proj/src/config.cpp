#include "gdnn/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "gdnn/errors.hpp"

namespace gd {

namespace {

const std::set<std::string> kKnownKeys = {
    "layer_sizes",   "policy",          "drop_rate",     "epochs",
    "batch_size",    "lr_initial",      "lr_decay_every", "lr_decay_factor",
    "strength_warmup_epochs", "phase_schedule", "seed",
};

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void bad(const std::string& origin, int line, const std::string& what) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
}

std::uint64_t to_u64(const KvEntry& e, const std::string& origin) {
    try {
        std::size_t pos = 0;
        if (!e.value.empty() && e.value[0] == '-') throw std::invalid_argument("negative");
        const std::uint64_t v = std::stoull(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        bad(origin, e.line, "key '" + e.key + "': expected a non-negative integer, got '" +
                                e.value + "'");
    }
}

double to_double(const KvEntry& e, const std::string& origin) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        bad(origin, e.line, "key '" + e.key + "': expected a number, got '" + e.value + "'");
    }
}

}  // namespace

std::vector<KvEntry> parse_kv_text(const std::string& text, const std::string& origin) {
    std::vector<KvEntry> entries;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    std::set<std::string> seen;
    while (std::getline(in, raw)) {
        ++line;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) bad(origin, line, "expected 'key = value', got '" + s + "'");
        KvEntry e;
        e.line = line;
        e.key = trim(s.substr(0, eq));
        e.value = trim(s.substr(eq + 1));
        if (e.key.empty()) bad(origin, line, "empty key");
        if (e.value.empty()) bad(origin, line, "key '" + e.key + "' has an empty value");
        if (!kKnownKeys.count(e.key)) bad(origin, line, "unknown key '" + e.key + "'");
        if (!seen.insert(e.key).second) bad(origin, line, "duplicate key '" + e.key + "'");
        entries.push_back(std::move(e));
    }
    return entries;
}

std::vector<KvEntry> parse_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_kv_text(buf.str(), path);
}

std::vector<std::size_t> parse_layer_sizes(const std::string& text) {
    std::vector<std::size_t> sizes;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        const std::string s = trim(tok);
        try {
            std::size_t pos = 0;
            const unsigned long long v = std::stoull(s, &pos);
            if (pos != s.size() || v == 0) throw std::invalid_argument("bad");
            sizes.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("layer_sizes: bad width '" + s + "'");
        }
    }
    if (sizes.size() < 3) {
        throw ConfigError("layer_sizes needs at least input,hidden,output widths");
    }
    return sizes;
}

std::vector<PhaseSpec> parse_phase_schedule(const std::string& text) {
    std::vector<PhaseSpec> phases;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        const std::string s = trim(tok);
        const std::size_t colon = s.find(':');
        if (colon == std::string::npos) {
            throw ConfigError("phase_schedule: expected rate:epochs, got '" + s + "'");
        }
        try {
            std::size_t pos = 0;
            PhaseSpec p;
            const std::string rate_s = trim(s.substr(0, colon));
            const std::string ep_s = trim(s.substr(colon + 1));
            p.rate = std::stod(rate_s, &pos);
            if (pos != rate_s.size()) throw std::invalid_argument("bad rate");
            const unsigned long long ep = std::stoull(ep_s, &pos);
            if (pos != ep_s.size() || ep == 0) throw std::invalid_argument("bad epochs");
            p.epochs = ep;
            phases.push_back(p);
        } catch (const std::exception&) {
            throw ConfigError("phase_schedule: bad entry '" + s + "'");
        }
    }
    if (phases.empty()) throw ConfigError("phase_schedule: empty");
    return phases;
}

TrainConfig config_from_entries(const std::vector<KvEntry>& entries) {
    const std::string origin = "config";
    auto find = [&](const std::string& key) -> const KvEntry* {
        for (const auto& e : entries) {
            if (e.key == key) return &e;
        }
        return nullptr;
    };

    const KvEntry* sizes_e = find("layer_sizes");
    const KvEntry* policy_e = find("policy");
    if (!sizes_e) throw ConfigError("missing required key 'layer_sizes'");
    if (!policy_e) throw ConfigError("missing required key 'policy'");

    double rate = 0.0;
    if (const KvEntry* e = find("drop_rate")) rate = to_double(*e, origin);
    const DropoutPolicy policy = parse_policy(policy_e->value, rate);
    if (policy.needs_rate() && !find("drop_rate")) {
        throw ConfigError("policy '" + policy_e->value + "' requires drop_rate");
    }
    if (!policy.needs_rate() && find("drop_rate")) {
        throw ConfigError("policy '" + policy_e->value + "' takes no drop_rate");
    }

    TrainConfig cfg = make_default_config(policy, parse_layer_sizes(sizes_e->value));
    if (const KvEntry* e = find("epochs")) {
        const std::uint64_t epochs = to_u64(*e, origin);
        if (epochs == 0) bad(origin, e->line, "epochs must be positive");
        cfg = scale_to_epochs(cfg, epochs);
    }
    if (const KvEntry* e = find("batch_size")) cfg.batch_size = to_u64(*e, origin);
    if (const KvEntry* e = find("lr_initial")) cfg.lr_initial = to_double(*e, origin);
    if (const KvEntry* e = find("lr_decay_every")) cfg.lr_decay_every = to_u64(*e, origin);
    if (const KvEntry* e = find("lr_decay_factor")) cfg.lr_decay_factor = to_double(*e, origin);
    if (const KvEntry* e = find("strength_warmup_epochs")) {
        cfg.strength_warmup_epochs = to_u64(*e, origin);
    }
    if (const KvEntry* e = find("phase_schedule")) {
        try {
            cfg.phase_schedule = parse_phase_schedule(e->value);
        } catch (const ConfigError& err) {
            bad(origin, e->line, err.what());
        }
    }
    if (const KvEntry* e = find("seed")) cfg.seed = to_u64(*e, origin);

    try {
        cfg.validate();
    } catch (const ConfigError& err) {
        throw ConfigError(std::string("config: ") + err.what());
    }
    return cfg;
}

TrainConfig load_train_config(const std::string& path) {
    return config_from_entries(parse_kv_file(path));
}

TrainConfig with_policy(const TrainConfig& cfg, const DropoutPolicy& policy) {
    TrainConfig base = make_default_config(policy, cfg.layer_sizes);
    base.batch_size = cfg.batch_size;
    base.lr_initial = cfg.lr_initial;
    base.lr_decay_factor = cfg.lr_decay_factor;
    base.seed = cfg.seed;
    base = scale_to_epochs(base, cfg.epochs);
    base.validate();
    return base;
}

std::vector<std::pair<std::string, std::string>> config_to_kv(const TrainConfig& cfg) {
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::string sizes;
    for (std::size_t i = 0; i < cfg.layer_sizes.size(); ++i) {
        if (i) sizes += ',';
        sizes += std::to_string(cfg.layer_sizes[i]);
    }
    std::string phases;
    for (std::size_t i = 0; i < cfg.phase_schedule.size(); ++i) {
        if (i) phases += ',';
        phases += num(cfg.phase_schedule[i].rate) + ":" + std::to_string(cfg.phase_schedule[i].epochs);
    }

    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("layer_sizes", sizes);
    kv.emplace_back("policy", policy_name(cfg.policy.kind));
    if (cfg.policy.needs_rate()) kv.emplace_back("drop_rate", num(cfg.policy.rate));
    kv.emplace_back("epochs", std::to_string(cfg.epochs));
    kv.emplace_back("batch_size", std::to_string(cfg.batch_size));
    kv.emplace_back("lr_initial", num(cfg.lr_initial));
    kv.emplace_back("lr_decay_every", std::to_string(cfg.lr_decay_every));
    kv.emplace_back("lr_decay_factor", num(cfg.lr_decay_factor));
    kv.emplace_back("strength_warmup_epochs", std::to_string(cfg.strength_warmup_epochs));
    if (!phases.empty()) kv.emplace_back("phase_schedule", phases);
    kv.emplace_back("seed", std::to_string(cfg.seed));
    return kv;
}

}  // namespace gd
