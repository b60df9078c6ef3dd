#pragma once

#include <vector>

#include <Eigen/Core>

#include "anchorfree/cooccur.hpp"
#include "anchorfree/simplex_lsq.hpp"
#include "anchorfree/topic_model.hpp"

namespace anchorfree {

/// Distinct word indices, in selection order.
struct AnchorSet {
  std::vector<Index> indices;
};

/// Successive projection. Rows of `data` are words (D or P). Each row is
/// normalized by its sum, then F times: take the word whose normalized row
/// has the largest norm (ties to the smaller index) and project every row
/// onto the orthogonal complement of the selected one.
/// Throws on a zero-sum row or when deflation annihilates the data before F
/// anchors are found.
AnchorSet spa_anchors(const Eigen::MatrixXd& data, Index f);

/// Recovers C from anchor words: every row of P is normalized by its sum and
/// expressed as a convex combination of the normalized anchor rows by
/// simplex-constrained least squares; C(v, f) is proportional to that weight
/// times the row sum of P(v, :), each column scaled by its signed total before
/// clipping. Rows of P that are zero (up to roundoff) or sum to zero get zero
/// weight.
/// E then follows from recover_e; if C^T C is singular (a topic collapsed),
/// E = C^+ P C^+^T is returned with a warning.
TopicModel recover_topics_from_anchors(const CooccurrenceMatrix& p, const AnchorSet& anchors,
                                       const SimplexLsqOptions& opts = {},
                                       Warnings* warnings = nullptr);

/// SPA on the significant, nonzero-sum rows of P followed by recovery.
struct SpaResult {
  TopicModel model;
  AnchorSet anchors;
};
SpaResult spa_factorize(const CooccurrenceMatrix& p, Index f, const SimplexLsqOptions& opts = {},
                        Warnings* warnings = nullptr);

}  // namespace anchorfree
