#pragma once

// dBm/dB <-> linear conversions. The model works in linear milliwatts and
// linear ratios; configs and CLI flags use dBm/dB.

#include <cmath>

namespace hcn {

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace hcn
