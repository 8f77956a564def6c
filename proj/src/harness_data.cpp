// Embedded reference datasets: worldwide yearly earthquake counts by
// magnitude class (USGS catalog, 1980-2017) and the New South Wales red
// kangaroo double-transect counts (Bayliss 1987, 1973-1984).

#include <array>

#include "dcc/errors.hpp"
#include "dcc/harness.hpp"

namespace dcc {

namespace {

constexpr int kEqYears = 38;  // 1980..2017

constexpr std::array<double, kEqYears> kEqM8 = {
    0, 0, 0, 0, 0, 2, 1, 0, 0, 1, 0, 0, 0, 0, 2, 2, 1, 0, 1,
    0, 1, 1, 0, 1, 2, 1, 2, 4, 0, 1, 1, 1, 2, 2, 1, 1, 0, 1};

constexpr std::array<double, kEqYears> kEqM7 = {
    6,  10, 7,  14, 14, 15, 11, 13, 11, 8,  18, 17, 13, 12, 13, 20, 15, 16, 12,
    18, 15, 16, 13, 15, 16, 11, 11, 18, 12, 17, 24, 20, 16, 19, 12, 19, 16, 7};

constexpr std::array<double, kEqYears> kEqM6 = {
    96,  88,  90,  139, 141, 162, 140, 173, 126, 139, 154, 137, 179,
    148, 159, 201, 164, 136, 121, 136, 160, 137, 139, 156, 157, 151,
    153, 196, 179, 161, 175, 207, 133, 142, 155, 146, 146, 111};

constexpr std::array<double, kEqYears> kEqM5 = {
    1408, 1265, 1505, 1802, 1683, 1806, 1765, 1572, 1598, 1561,
    1765, 1583, 1675, 1564, 1693, 1501, 1373, 1234, 1074, 1192,
    1495, 1352, 1309, 1364, 1672, 1843, 1877, 2283, 1965, 2075,
    2395, 2692, 1680, 1596, 1729, 1558, 1696, 1560};

constexpr int kKangarooN = 41;

constexpr std::array<double, kKangarooN> kKangarooTime = {
    1973.497, 1973.75,  1974.163, 1974.413, 1974.665, 1975.002, 1975.245,
    1975.497, 1975.75,  1976.078, 1976.33,  1976.582, 1976.917, 1977.245,
    1977.497, 1977.665, 1978.002, 1978.33,  1978.582, 1978.832, 1979.078,
    1979.582, 1979.832, 1980.163, 1980.497, 1980.75,  1980.917, 1981.163,
    1981.497, 1981.665, 1981.917, 1982.163, 1982.413, 1982.665, 1982.917,
    1983.163, 1983.413, 1983.665, 1983.917, 1984.163, 1984.413};

constexpr std::array<double, kKangarooN> kKangarooY1 = {
    267, 333, 159, 145, 340, 463, 305, 329, 575, 227, 532, 769, 526, 565,
    466, 494, 440, 858, 599, 298, 529, 912, 703, 402, 669, 796, 483, 700,
    418, 979, 757, 755, 517, 710, 240, 490, 497, 250, 271, 303, 386};

constexpr std::array<double, kKangarooN> kKangarooY2 = {
    326, 144, 145, 138, 413, 531, 331, 329, 529, 318, 449, 852, 332, 742,
    479, 620, 531, 751, 442, 824, 660, 834, 955, 453, 953, 808, 975, 627,
    851, 721, 1112, 731, 748, 675, 272, 292, 389, 323, 272, 248, 290};

template <std::size_t N>
Dataset scalar_series(const std::array<double, N>& values) {
  std::vector<double> flat(values.begin(), values.end());
  return Dataset::from_flat(std::move(flat), static_cast<int>(N), 1);
}

}  // namespace

Dataset embedded_dataset(const std::string& name) {
  if (name == "earthquake-m8") return scalar_series(kEqM8);
  if (name == "earthquake-m7") return scalar_series(kEqM7);
  if (name == "earthquake-m6") return scalar_series(kEqM6);
  if (name == "earthquake-m5") return scalar_series(kEqM5);
  if (name == "kangaroo") {
    std::vector<double> flat;
    flat.reserve(2 * kKangarooN);
    for (int i = 0; i < kKangarooN; ++i) {
      flat.push_back(kKangarooY1[i]);
      flat.push_back(kKangarooY2[i]);
    }
    std::vector<double> ts(kKangarooTime.begin(), kKangarooTime.end());
    return Dataset::from_flat(std::move(flat), kKangarooN, 2, std::move(ts));
  }
  throw invalid_input("UnknownDataset: " + name);
}

std::vector<std::string> embedded_dataset_names() {
  return {"earthquake-m8", "earthquake-m7", "earthquake-m6", "earthquake-m5",
          "kangaroo"};
}

}  // namespace dcc
