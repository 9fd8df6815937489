#include "shgcn/graphcore/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <string>

#include "shgcn/error.hpp"

namespace shgcn::graphcore {
namespace {

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open '" + path.string() + "'");
  return in;
}

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

bool skippable(std::string_view line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string_view::npos || line[first] == '#';
}

std::vector<std::string_view> fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == ',' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != ',' && line[i] != '\r') ++i;
    out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
T parse(std::string_view text, const std::filesystem::path& path, std::size_t line) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ContractError(where(path, line) + ": cannot parse '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

EdgeList load_edge_list(const std::filesystem::path& path, std::size_t min_nodes) {
  auto in = open(path);
  EdgeList out;
  std::size_t max_id = 0;
  bool any = false;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (skippable(line)) continue;
    const auto f = fields(line);
    if (f.size() != 2) throw ContractError(where(path, no) + ": expected two node ids");
    const auto u = parse<NodeId>(f[0], path, no);
    const auto v = parse<NodeId>(f[1], path, no);
    out.edges.push_back({u, v});
    max_id = std::max<std::size_t>(max_id, std::max(u, v));
    any = true;
  }
  out.num_nodes = std::max(min_nodes, any ? max_id + 1 : 0);
  return out;
}

numkit::Matrix load_features_csv(const std::filesystem::path& path) {
  auto in = open(path);
  std::vector<double> data;
  std::size_t rows = 0, cols = 0;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (skippable(line)) continue;
    const auto f = fields(line);
    if (rows == 0) cols = f.size();
    if (f.size() != cols) {
      throw ContractError(where(path, no) + ": expected " + std::to_string(cols) + " columns, found " +
                          std::to_string(f.size()));
    }
    for (auto field : f) data.push_back(parse<double>(field, path, no));
    ++rows;
  }
  if (rows == 0) throw ContractError("'" + path.string() + "' contains no feature rows");
  return numkit::Matrix(rows, cols, std::move(data));
}

std::vector<int> load_labels_csv(const std::filesystem::path& path) {
  auto in = open(path);
  std::vector<int> labels;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (skippable(line)) continue;
    const auto f = fields(line);
    if (f.size() != 1) throw ContractError(where(path, no) + ": expected a single label");
    const int label = parse<int>(f[0], path, no);
    if (label < 0) throw ContractError(where(path, no) + ": labels must be non-negative");
    labels.push_back(label);
  }
  return labels;
}

Graph load_graph(const std::filesystem::path& edges, const std::optional<std::filesystem::path>& features,
                 const std::optional<std::filesystem::path>& labels) {
  numkit::Matrix x = features ? load_features_csv(*features) : numkit::Matrix{};
  std::optional<std::vector<int>> y;
  if (labels) y = load_labels_csv(*labels);
  std::size_t min_nodes = x.rows();
  if (y) min_nodes = std::max(min_nodes, y->size());
  auto list = load_edge_list(edges, min_nodes);
  if (x.empty()) x = identity_features(list.num_nodes);
  return Graph(list.num_nodes, list.edges, std::move(x), std::move(y));
}

}  // namespace shgcn::graphcore
