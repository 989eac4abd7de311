#include "json_config.h"

#include <json.hpp>

namespace enverify::cli {

namespace {

using nlohmann::json;

std::string scalar_text(const json &value) {
    if (value.is_string()) {
        return value.get<std::string>();
    }
    if (value.is_boolean()) {
        return value.get<bool>() ? "true" : "false";
    }
    return value.dump();
}

void collect(const json &node, std::vector<std::string> parents, std::vector<CLI::ConfigItem> &items) {
    for (const auto &[key, value] : node.items()) {
        if (value.is_object()) {
            auto next = parents;
            next.push_back(key);
            // Marks the section so CLI11 activates the subcommand.
            items.push_back({next, "++", {}});
            collect(value, next, items);
            items.push_back({next, "--", {}});
            continue;
        }
        CLI::ConfigItem item;
        item.parents = parents;
        item.name = key;
        if (value.is_array()) {
            for (const auto &v : value) {
                item.inputs.push_back(scalar_text(v));
            }
        } else {
            item.inputs.push_back(scalar_text(value));
        }
        items.push_back(std::move(item));
    }
}

}  // namespace

std::string JsonConfig::to_config(const CLI::App *app, bool default_also, bool, std::string) const {
    json out = json::object();
    for (const CLI::Option *opt : app->get_options({})) {
        if (!opt->get_configurable() || opt->get_lnames().empty()) {
            continue;
        }
        const std::string name = opt->get_lnames()[0];
        if (opt->count() > 0) {
            auto results = opt->results();
            if (results.size() == 1) {
                out[name] = results[0];
            } else {
                out[name] = results;
            }
        } else if (default_also && !opt->get_default_str().empty()) {
            out[name] = opt->get_default_str();
        }
    }
    for (const CLI::App *sub : app->get_subcommands({})) {
        json nested = json::parse(to_config(sub, default_also, false, ""));
        if (!nested.empty()) {
            out[sub->get_name()] = nested;
        }
    }
    return out.dump(2);
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream &input) const {
    json root;
    try {
        root = json::parse(input);
    } catch (const json::exception &e) {
        throw CLI::ConversionError("invalid JSON config: " + std::string(e.what()));
    }
    if (!root.is_object()) {
        throw CLI::ConversionError("JSON config must be an object");
    }
    std::vector<CLI::ConfigItem> items;
    collect(root, {}, items);
    return items;
}

}  // namespace enverify::cli
