// JSON design document: the frozen realization plus its analysis summary.
// Loading rebuilds the realization from the stored matrices only.
#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "lrf/regression_design.hpp"
#include "lrf/variance_analysis.hpp"

namespace lrf {

struct DesignDocument {
    std::optional<double> requested_delay;  // empty means "auto"
    FilterRealization realization;
    VrfReport vrf_report;  // optimal-delay search for the smoother row
    std::optional<double> f_c;
    double group_delay_dc = 0.0;
};

/// Runs the full design and analysis for a spec.
DesignDocument make_design_document(const DesignSpec& spec);

std::string to_json(const DesignDocument& doc);

/// Throws std::invalid_argument on malformed documents or inconsistent
/// matrix dimensions.
DesignDocument from_json(const std::string& text);

void save_design_document(const DesignDocument& doc, const std::filesystem::path& path);
DesignDocument load_design_document(const std::filesystem::path& path);

}  // namespace lrf
