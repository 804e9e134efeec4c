// SPDX-License-Identifier: Apache-2.0
//
// fdjcas: full-duplex joint communications and sensing with a reconfigurable surface
// Copyright (C) 2026 The fdjcas authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fdjcas/channels.hpp"

namespace fdjcas {

namespace {

constexpr const char *kFormat = "fdjcas-channel-set";
constexpr int kVersion = 1;

struct NamedMatrix {
  const char *name;
  CMat ChannelSet::*member;
};

constexpr NamedMatrix kMatrices[] = {
    {"bs_to_user", &ChannelSet::bs_to_user}, {"ris_to_user", &ChannelSet::ris_to_user},
    {"bs_to_ris", &ChannelSet::bs_to_ris},   {"ris_to_bs", &ChannelSet::ris_to_bs},
    {"si_los", &ChannelSet::si_los},         {"si_nlos", &ChannelSet::si_nlos},
};

} // namespace

void write_channel_set(std::ostream &out, const ChannelSet &ch) {
  nlohmann::ordered_json header;
  header["format"] = kFormat;
  header["version"] = kVersion;
  header["user_noise_var"] = ch.user_noise_var;
  header["radar_noise_var"] = ch.radar_noise_var;
  header["matrices"] = nlohmann::ordered_json::array();
  for (const auto &nm : kMatrices) {
    const CMat &m = ch.*nm.member;
    header["matrices"].push_back({{"name", nm.name}, {"rows", m.rows()}, {"cols", m.cols()}});
  }
  out << header.dump() << '\n';

  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto &nm : kMatrices) {
    const CMat &m = ch.*nm.member;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (c)
          out << ' ';
        out << m(r, c).real() << ' ' << m(r, c).imag();
      }
      out << '\n';
    }
  }
  if (!out)
    throw Error("write_channel_set: stream error");
}

ChannelSet read_channel_set(std::istream &in) {
  std::string line;
  if (!std::getline(in, line))
    throw Error("read_channel_set: missing header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception &e) {
    throw Error(std::string("read_channel_set: bad header: ") + e.what());
  }
  if (header.value("format", "") != kFormat || header.value("version", 0) != kVersion)
    throw Error("read_channel_set: unsupported format");

  ChannelSet ch;
  ch.user_noise_var = header.at("user_noise_var").get<double>();
  ch.radar_noise_var = header.at("radar_noise_var").get<double>();
  const auto &mats = header.at("matrices");
  if (mats.size() != std::size(kMatrices))
    throw Error("read_channel_set: unexpected matrix count");

  for (std::size_t k = 0; k < std::size(kMatrices); ++k) {
    const auto &entry = mats[k];
    if (entry.at("name").get<std::string>() != kMatrices[k].name)
      throw Error("read_channel_set: unexpected matrix order");
    const auto rows = entry.at("rows").get<Eigen::Index>();
    const auto cols = entry.at("cols").get<Eigen::Index>();
    CMat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (!std::getline(in, line))
        throw Error(std::string("read_channel_set: truncated matrix ") + kMatrices[k].name);
      std::istringstream row(line);
      for (Eigen::Index c = 0; c < cols; ++c) {
        double re = 0, im = 0;
        if (!(row >> re >> im))
          throw Error(std::string("read_channel_set: short row in ") + kMatrices[k].name);
        m(r, c) = {re, im};
      }
    }
    ch.*kMatrices[k].member = std::move(m);
  }
  return ch;
}

} // namespace fdjcas
