#pragma once

#include <string>

#include "causal_affects/io.hpp"

namespace test_support {

inline causal_affects::StructuralModel recipe_model(const std::string& recipe, const std::string& file = "model.json") {
    std::string path = std::string(CAUSAL_AFFECTS_RECIPE_DIR) + "/" + recipe + "/" + file;
    return causal_affects::io::model_from_json(causal_affects::io::read_json_file(path), path);
}

inline causal_affects::AffectsSet recipe_affects(const std::string& recipe) {
    std::string path = std::string(CAUSAL_AFFECTS_RECIPE_DIR) + "/" + recipe + "/affects.json";
    return causal_affects::io::affects_from_json(causal_affects::io::read_json_file(path), path);
}

inline causal_affects::Poset recipe_poset(const std::string& recipe) {
    std::string path = std::string(CAUSAL_AFFECTS_RECIPE_DIR) + "/" + recipe + "/poset.json";
    return causal_affects::io::poset_from_json(causal_affects::io::read_json_file(path), path);
}

inline causal_affects::StructuralModel model_from_text(const std::string& text) {
    return causal_affects::io::model_from_json(causal_affects::io::parse_json(text, "inline"), "inline");
}

inline causal_affects::AffectsSet affects_from_text(const std::string& text) {
    return causal_affects::io::affects_from_json(causal_affects::io::parse_json(text, "inline"), "inline");
}

}  // namespace test_support
