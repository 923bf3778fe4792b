#pragma once

#include <map>
#include <memory>
#include <string>

#include "nashcsg/model/csg.hpp"

namespace nashcsg {

using Constants = std::map<std::string, double>;

// Arithmetic over numbers and named constants: + - * / ^, unary minus,
// parentheses, min(a, b), max(a, b). Throws ModelError on syntax errors and
// unknown names.
double evaluate_expression(const std::string& text, const Constants& constants);

// Model document:
//   {constants?: {name: number},
//    players: [{name, actions: [...]}],
//    states: [{id, labels?: [...]}],
//    initial: [id...],
//    availability: {state: {player: [action...]}},   (missing entries: idle)
//    transitions: [{state, joint: [action | "~"], dist: {state: prob}}],
//    rewards?: {name: {state?: {id: v}, action?: [{state, joint, v}]}}}
// Probabilities and reward values are numbers or expression strings over the
// constants. overrides rebind declared constants; an override naming an
// undeclared constant is an error.
CsgData parse_model(const std::string& text, const Constants& overrides = {});
std::shared_ptr<const Csg> load_model(const std::string& path, const Constants& overrides = {});
// Declared constants with their file values.
Constants model_constants(const std::string& text);

// Serializes a game in the same format, with numeric probabilities.
std::string save_model(const Csg& game);

std::string read_file(const std::string& path);

}  // namespace nashcsg
