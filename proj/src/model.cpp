#include "vaep/model.hpp"

#include "vaep/errors.hpp"

namespace vaep {

std::string to_string(Target t) { return t == Target::scores ? "scores" : "concedes"; }

Target parse_target(std::string_view s) {
  if (s == "scores") return Target::scores;
  if (s == "concedes") return Target::concedes;
  throw errors::invalid_argument("model", "unknown target '" + std::string(s) + "' (expected scores|concedes)");
}

std::string to_string(LearnerKind k) { return k == LearnerKind::logistic ? "logistic" : "forest"; }

LearnerKind parse_learner(std::string_view s) {
  if (s == "logistic") return LearnerKind::logistic;
  if (s == "forest") return LearnerKind::forest;
  throw errors::invalid_argument("model", "unknown learner '" + std::string(s) + "' (expected forest|logistic)");
}

LearnerKind Model::kind() const {
  return std::holds_alternative<LogisticModel>(learner) ? LearnerKind::logistic : LearnerKind::forest;
}

const FeatureSchema& Model::schema() const {
  return std::visit([](const auto& m) -> const FeatureSchema& { return m.schema; }, learner);
}

std::vector<double> predict_proba(const Model& m, const FeatureMatrix& x) {
  if (const auto* lr = std::get_if<LogisticModel>(&m.learner)) return predict_logistic(*lr, x);
  return predict_forest(std::get<ForestModel>(m.learner), x);
}

namespace serial {
std::vector<double> predict_proba(const Model& m, const FeatureMatrix& x) {
  if (const auto* lr = std::get_if<LogisticModel>(&m.learner)) return serial::predict_logistic(*lr, x);
  return serial::predict_forest(std::get<ForestModel>(m.learner), x);
}
}  // namespace serial

}  // namespace vaep
