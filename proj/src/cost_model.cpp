#include "gedkit/cost_model.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "gedkit/errors.hpp"

namespace ged {

void CostModel::validate() const {
  const std::array<double, 6> all{vsub, vdel, vins, esub, edel, eins};
  for (double c : all) {
    if (!std::isfinite(c) || c < 0.0) {
      throw InvalidArgument("edit costs must be finite and non-negative: " + to_string());
    }
  }
}

CostModel CostModel::parse(std::string_view text) {
  if (text == "default" || text == "defaults" || text == "setting1") return defaults();
  if (text == "uniform") return uniform();
  if (text == "setting2") return setting2();

  std::array<double, 6> values{};
  std::size_t count = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    auto field = text.substr(pos, comma - pos);
    if (count == values.size()) throw InvalidArgument("expected six costs, got more");
    double value = 0.0;
    auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || end != field.data() + field.size() || field.empty()) {
      throw InvalidArgument("malformed cost '" + std::string(field) + "'");
    }
    values[count++] = value;
    pos = comma + 1;
  }
  if (count != values.size()) {
    throw InvalidArgument("expected six costs vsub,vdel,vins,esub,edel,eins");
  }
  CostModel cm{values[0], values[1], values[2], values[3], values[4], values[5]};
  cm.validate();
  return cm;
}

std::string CostModel::to_string() const {
  std::ostringstream os;
  os << vsub << ',' << vdel << ',' << vins << ',' << esub << ',' << edel << ',' << eins;
  return os.str();
}

}  // namespace ged
