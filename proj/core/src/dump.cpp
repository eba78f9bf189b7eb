#include "gesture/dump.hpp"

#include <fstream>

#include "gesture/error.hpp"

namespace gesture {
namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(17);
  return out;
}

}  // namespace

void write_motion_csv(const MotionCurve& curve, const std::filesystem::path& path) {
  auto out = open_csv(path);
  out << "frame,motion\n";
  for (std::size_t i = 0; i < curve.values.size(); ++i) out << i << ',' << curve.values[i] << '\n';
}

void write_descriptor_csv(const Descriptor& d, const std::filesystem::path& path) {
  auto out = open_csv(path);
  out << "cell_row,cell_col,bin,value\n";
  for (int r = 0; r < d.cells_rows(); ++r)
    for (int c = 0; c < d.cells_cols(); ++c)
      for (int b = 0; b < d.bins(); ++b) out << r << ',' << c << ',' << b << ',' << d.at(r, c, b) << '\n';
}

void write_similarity_csv(const BinSimilarityMatrix& a, const std::filesystem::path& path) {
  auto out = open_csv(path);
  out << "row,col,weight\n";
  for (int i = 0; i < a.dimension(); ++i)
    for (const auto& e : a.row(i)) out << i << ',' << e.col << ',' << e.weight << '\n';
}

void write_cost_matrix_csv(const CostMatrix& costs, const std::filesystem::path& path) {
  auto out = open_csv(path);
  for (std::size_t n = 0; n < costs.nodes(); ++n) {
    for (std::size_t t = 0; t < costs.columns(); ++t) out << (t ? "," : "") << costs(n, t);
    out << '\n';
  }
}

void write_score_matrix_csv(const ScoreMatrix& scores, const std::filesystem::path& path) {
  auto out = open_csv(path);
  for (std::size_t g = 0; g < scores.labels.size(); ++g) {
    out << scores.labels[g];
    for (std::size_t t = 0; t < scores.columns; ++t) out << ',' << scores(g, t);
    out << '\n';
  }
}

void write_path_csv(const GestureModel& model, const ViterbiPath& path,
                    const std::filesystem::path& file) {
  auto out = open_csv(file);
  out << "column,node,label\n";
  for (std::size_t t = 0; t < path.states.size(); ++t) {
    out << t << ',' << path.states[t] << ',' << model.node(path.states[t]).label << '\n';
  }
}

}  // namespace gesture
