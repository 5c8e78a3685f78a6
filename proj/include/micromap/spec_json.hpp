#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "micromap/model.hpp"

namespace micromap {

/// Canonical JSON form of a PlotSpec. Field names follow the C++ members.
/// `sort` may also be a bare column name; a binding may be a string or a list of strings.
/// Throws InputError on malformed JSON, unknown fields, unknown glyph or enum names.
PlotSpec spec_from_json(const nlohmann::json& j);
PlotSpec parse_spec(std::string_view text);
nlohmann::json spec_to_json(const PlotSpec& spec);

/// A spec plus the dataset and atlas it draws from. Used both by figure recipe files and
/// by the render endpoint. A bare spec document is accepted with empty ids.
struct RenderRequest {
    std::string dataset;
    std::string atlas;  // empty: the dataset manifest's atlas
    PlotSpec spec;
};

RenderRequest request_from_json(const nlohmann::json& j);
RenderRequest parse_request(std::string_view text);
nlohmann::json request_to_json(const RenderRequest& request);

}  // namespace micromap
