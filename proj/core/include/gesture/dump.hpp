#pragma once

#include <filesystem>

#include "gesture/descriptors.hpp"
#include "gesture/preprocess.hpp"
#include "gesture/qchi.hpp"
#include "gesture/recognizer.hpp"

namespace gesture {

// frame,motion
void write_motion_csv(const MotionCurve& curve, const std::filesystem::path& path);

// cell_row,cell_col,bin,value
void write_descriptor_csv(const Descriptor& d, const std::filesystem::path& path);

// row,col,weight for every stored entry
void write_similarity_csv(const BinSimilarityMatrix& a, const std::filesystem::path& path);

// One line per model node, one column per test representation.
void write_cost_matrix_csv(const CostMatrix& costs, const std::filesystem::path& path);

// One line per gesture (label first), one column per window position.
void write_score_matrix_csv(const ScoreMatrix& scores, const std::filesystem::path& path);

// column,node,label
void write_path_csv(const GestureModel& model, const ViterbiPath& path,
                    const std::filesystem::path& file);

}  // namespace gesture
