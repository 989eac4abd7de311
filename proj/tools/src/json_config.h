#ifndef ENVERIFY_TOOLS_JSON_CONFIG_H
#define ENVERIFY_TOOLS_JSON_CONFIG_H

#include <CLI11.hpp>

namespace enverify::cli {

/// CLI11 config reader for JSON files. Top-level keys are option names;
/// a nested object named after a subcommand holds that subcommand's options.
/// Arrays become repeated values.
class JsonConfig : public CLI::Config {
   public:
    std::string to_config(const CLI::App *app, bool default_also, bool write_description, std::string prefix)
        const override;
    std::vector<CLI::ConfigItem> from_config(std::istream &input) const override;
};

}  // namespace enverify::cli

#endif
