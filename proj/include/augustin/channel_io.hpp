// Channel-file ingestion and serialization. The on-disk format is JSON:
//
//   { "W": [[row-stochastic rows]], "P": [probability vector] }
//
// Rows and P must pass the 1e-9 normalization tolerance; violations are
// reported with the offending row or field named, never repaired silently.

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "augustin/measures.hpp"

namespace augustin {

struct ChannelInstance {
  Channel W;
  Distribution P;
};

inline ChannelInstance parse_channel_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw std::invalid_argument(std::string("channel file is not valid JSON: ") +
                                err.what());
  }
  if (!doc.is_object() || !doc.contains("W") || !doc.contains("P"))
    throw std::invalid_argument(
        "channel file must be an object with fields \"W\" and \"P\"");

  const nlohmann::json& w = doc["W"];
  if (!w.is_array() || w.empty())
    throw std::invalid_argument("field \"W\" must be a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  rows.reserve(w.size());
  for (std::size_t x = 0; x < w.size(); ++x) {
    const nlohmann::json& row = w[x];
    if (!row.is_array())
      throw std::invalid_argument("field \"W\" row " + std::to_string(x) +
                                  " must be an array");
    std::vector<double> values;
    values.reserve(row.size());
    for (std::size_t y = 0; y < row.size(); ++y) {
      if (!row[y].is_number())
        throw std::invalid_argument("field \"W\" row " + std::to_string(x) +
                                    " entry " + std::to_string(y) +
                                    " must be a number");
      values.push_back(row[y].get<double>());
    }
    rows.push_back(std::move(values));
  }

  const nlohmann::json& p = doc["P"];
  if (!p.is_array() || p.empty())
    throw std::invalid_argument("field \"P\" must be a non-empty array");
  std::vector<double> p_values;
  p_values.reserve(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (!p[x].is_number())
      throw std::invalid_argument("field \"P\" entry " + std::to_string(x) +
                                  " must be a number");
    p_values.push_back(p[x].get<double>());
  }

  Channel channel = Channel::from_rows(rows);  // names the offending row
  Distribution input = [&] {
    try {
      return Distribution(std::move(p_values));
    } catch (const std::invalid_argument& err) {
      throw std::invalid_argument(std::string("field \"P\": ") + err.what());
    }
  }();
  if (input.size() != channel.input_size())
    throw std::invalid_argument(
        "field \"P\" length must match the number of rows of \"W\"");
  return {std::move(channel), std::move(input)};
}

inline ChannelInstance load_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open channel file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_channel_json(buffer.str());
}

inline std::string format_channel_json(const ChannelInstance& instance) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t x = 0; x < instance.W.input_size(); ++x)
    rows.push_back(instance.W.row(x).mass());
  doc["W"] = std::move(rows);
  doc["P"] = instance.P.mass();
  return doc.dump();
}

}  // namespace augustin
