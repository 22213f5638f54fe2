#include "mpf/serialize.hpp"

#include "mpf/error.hpp"

namespace mpf {

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json model_document(const FusionModel& model) {
  Json doc;
  doc["schema"] = kModelSchema;
  doc["model"] = model;
  return doc;
}

FusionModel model_from_document(const Json& doc) {
  if (!doc.is_object() || doc.value("schema", std::string{}) != kModelSchema) {
    throw ParseError(std::string("model file schema is not ") + kModelSchema, 0);
  }
  return doc.at("model").get<FusionModel>();
}

}  // namespace mpf
