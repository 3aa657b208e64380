#pragma once

#include <string>
#include <string_view>

#include "postmetrics/anfis.hpp"
#include "postmetrics/esn.hpp"
#include "postmetrics/svr.hpp"

namespace postmetrics {

// JSON model dumps. Reals are written with 9 significant digits, so a dump
// read back reproduces the model to that precision, not bit for bit.

std::string to_json(const EsnModel& model);
std::string to_json(const SvrModel& model);
std::string to_json(const AnfisModel& model);

EsnModel esn_from_json(std::string_view text);
SvrModel svr_from_json(std::string_view text);
AnfisModel anfis_from_json(std::string_view text);

}  // namespace postmetrics
