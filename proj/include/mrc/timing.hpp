#pragma once

#include <array>
#include <string_view>

#include "mrc/error.hpp"

namespace mrc {

/// PHY/MAC constants of an 802.11a-style RTS/CTS WLAN.
/// Sizes are in bits, rates in bit/s, durations in microseconds.
struct PhyMacParams {
  double payload_bits = 8184.0;
  double mac_header_bits = 224.0;
  double phy_overhead_us = 20.0 + 22.0 / 6.0;
  double ack_bits = 112.0;
  double rts_bits = 160.0;
  double cts_bits = 112.0;
  double basic_rate_bps = 6e6;
  double data_rate_bps = 54e6;
  double slot_us = 9.0;
  double sifs_us = 16.0;
  double difs_us = 34.0;

  friend bool operator==(const PhyMacParams&, const PhyMacParams&) = default;
};

/// Durations derived from PhyMacParams, all in microseconds.
struct DerivedTimings {
  double t_rts_us = 0;      // one contention round excluding idle slots: RTS + DIFS
  double t_data_us = 0;     // T_H + L/R + ACK + SIFS + DIFS
  double b_us = 0;          // CTS + 2 SIFS - DIFS + t_data; fixed tail of every super round
  double rts_frame_us = 0;
  double cts_frame_us = 0;
  double ack_frame_us = 0;
  double header_us = 0;
  double slot_us = 0;       // copied through so callers need only this struct
  double payload_bits = 0;

  friend bool operator==(const DerivedTimings&, const DerivedTimings&) = default;
};

namespace detail {

struct ParamField {
  std::string_view name;
  double PhyMacParams::*member;
  bool may_be_zero;  // frame sizes and PHY overhead admit the degenerate zero-size case
};

inline constexpr std::array<ParamField, 11> kParamFields{{
    {"payload_bits", &PhyMacParams::payload_bits, false},
    {"mac_header_bits", &PhyMacParams::mac_header_bits, true},
    {"phy_overhead_us", &PhyMacParams::phy_overhead_us, true},
    {"ack_bits", &PhyMacParams::ack_bits, true},
    {"rts_bits", &PhyMacParams::rts_bits, true},
    {"cts_bits", &PhyMacParams::cts_bits, true},
    {"basic_rate_bps", &PhyMacParams::basic_rate_bps, false},
    {"data_rate_bps", &PhyMacParams::data_rate_bps, false},
    {"slot_us", &PhyMacParams::slot_us, false},
    {"sifs_us", &PhyMacParams::sifs_us, false},
    {"difs_us", &PhyMacParams::difs_us, false},
}};

}  // namespace detail

inline void validate(const PhyMacParams& p) {
  for (const auto& f : detail::kParamFields) {
    const double v = p.*(f.member);
    if (f.may_be_zero) {
      if (!(v >= 0.0)) throw ParameterError(std::string(f.name), "must be non-negative");
    } else if (!(v > 0.0)) {
      throw ParameterError(std::string(f.name), "must be strictly positive");
    }
  }
  if (!(p.sifs_us < p.difs_us)) throw ParameterError("sifs_us", "must be shorter than difs_us");
}

/// Airtime of a control frame of `bits` sent at the basic rate, PHY overhead included.
inline double control_frame_us(const PhyMacParams& p, double bits) {
  return bits / p.basic_rate_bps * 1e6 + p.phy_overhead_us;
}

inline DerivedTimings derive_timings(const PhyMacParams& p) {
  validate(p);
  DerivedTimings t;
  t.rts_frame_us = control_frame_us(p, p.rts_bits);
  t.cts_frame_us = control_frame_us(p, p.cts_bits);
  t.ack_frame_us = control_frame_us(p, p.ack_bits);
  t.header_us = p.mac_header_bits / p.data_rate_bps * 1e6 + p.phy_overhead_us;
  t.t_rts_us = t.rts_frame_us + p.difs_us;
  t.t_data_us = t.header_us + p.payload_bits / p.data_rate_bps * 1e6 + t.ack_frame_us +
                p.sifs_us + p.difs_us;
  t.b_us = t.cts_frame_us + 2.0 * p.sifs_us - p.difs_us + t.t_data_us;
  t.slot_us = p.slot_us;
  t.payload_bits = p.payload_bits;
  if (!(t.b_us > 0.0)) throw ParameterError("difs_us", "super-round tail B must be positive");
  return t;
}

}  // namespace mrc
