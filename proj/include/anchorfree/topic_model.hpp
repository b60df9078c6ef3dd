#pragma once

#include <string>

#include <Eigen/Core>

#include "anchorfree/errors.hpp"

namespace anchorfree {

enum class Method { AnchorFree, SpaRecover };

std::string to_string(Method m);
Method method_from_string(const std::string& name);

/// Word-topic matrix C (V x F, columns are PMFs over the vocabulary) and the
/// topic-topic correlation matrix E (F x F, symmetric).
struct TopicModel {
  Eigen::MatrixXd c;
  Eigen::MatrixXd e;
  Method method = Method::AnchorFree;

  Index n_words() const { return c.rows(); }
  Index n_topics() const { return c.cols(); }
};

/// Clips negative entries of each column to zero and rescales the column to
/// sum to one. Returns the most negative entry seen (0 if none).
double clean_topic_columns(Eigen::MatrixXd& c);

}  // namespace anchorfree
