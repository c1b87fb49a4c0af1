#pragma once

#include "params.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace symcool {

enum class Quantity {
    AngularFrequency, // accepts Hz, kHz, MHz, GHz; bare numbers are rad/s
    Rate,             // 1/s, no suffix
    Length,           // nm, um, mm; bare numbers are m
    Power,            // mW; bare numbers are W
    Mass,             // ng; bare numbers are kg
    Temperature,      // K, uK
    Plain,
};

// Parses "274 kHz" style values.  Throws ValidationError on unknown or
// mismatched suffixes.
double parse_quantity(std::string_view text, Quantity kind);

// Raw key/value view of a config file.  Keys are "section.key".
struct ConfigText {
    std::map<std::string, std::string> values;
    std::vector<std::string> order; // insertion order, for hashing and error messages
};

ConfigText parse_config_text(std::string_view text);

struct Override {
    std::string key;
    std::string value;
};

Override parse_override(std::string_view text);

// Builds an ExperimentConfig.  If `figure` is not empty, the keys of the
// [figure.<name>] section are applied first, then the explicit overrides.
// Does not call validate(); callers decide what to do with violations.
ExperimentConfig build_config(const ConfigText &text, std::string_view figure = {},
                              const std::vector<Override> &overrides = {});

ExperimentConfig load_config(const std::string &path, std::string_view figure = {},
                             const std::vector<Override> &overrides = {});

std::string read_file(const std::string &path);

}
